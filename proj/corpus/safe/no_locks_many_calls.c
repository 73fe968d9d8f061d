/* Plenty of calls, zero locks. */

int counter;

void bump() {
  counter = counter + 1;
}

void twice() {
  bump();
  bump();
}

void t1() {
  twice();
  bump();
}

void t2() {
  twice();
  twice();
}
