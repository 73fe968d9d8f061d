/* One lock can never participate in an ordering cycle. */

Lock a;

void t1() {
  lock(&a);
  unlock(&a);
}

void t2() {
  lock(&a);
  unlock(&a);
}
