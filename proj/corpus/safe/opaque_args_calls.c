/* Calls whose arguments are not access paths; nothing here locks. */

int total;

void accumulate(int amount, int scale) {
  total = total + amount;
}

void t1() {
  accumulate(3 + 4, 2);
  accumulate(total, 1);
}

void t2() {
  accumulate(0, 0);
}
