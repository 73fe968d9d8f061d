/* Balanced lock/unlock inside a loop: the state after any number of
 * iterations matches the state after one. */

Lock a;

void t1() {
  while (running) {
    lock(&a);
    unlock(&a);
  }
}

void t2() {
  lock(&a);
  unlock(&a);
}
