/* Nothing to analyze. */

int main() {
  return 0;
}
