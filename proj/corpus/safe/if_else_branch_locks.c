/* Each branch uses one lock at a time; only t2 ever nests them. */

Lock a, b;

void t1() {
  if (mode) {
    lock(&a);
    unlock(&a);
  } else {
    lock(&b);
    unlock(&b);
  }
}

void t2() {
  lock(&a);
  lock(&b);
  unlock(&b);
  unlock(&a);
}
