/* Two threads take the same two locks in opposite orders. */

Lock a, b;

void t1() {
  lock(&a);
  lock(&b);
  unlock(&b);
  unlock(&a);
}

void t2() {
  lock(&b);
  lock(&a);
  unlock(&a);
  unlock(&b);
}
