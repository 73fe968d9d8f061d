/* Same order as t2, but inside a counted loop. */

Lock a, b;

void t1() {
  int i;
  for (i = 0; i < 10; i++) {
    lock(&a);
    lock(&b);
    unlock(&b);
    unlock(&a);
  }
}

void t2() {
  lock(&a);
  lock(&b);
  unlock(&b);
  unlock(&a);
}
