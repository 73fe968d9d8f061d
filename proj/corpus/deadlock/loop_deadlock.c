/* The conflicting order sits inside a loop body; the summary must be
 * stable across the back edge. */

Lock a, b;

void t1() {
  while (running) {
    lock(&a);
    lock(&b);
    unlock(&b);
    unlock(&a);
  }
}

void t2() {
  lock(&b);
  lock(&a);
  unlock(&a);
  unlock(&b);
}
