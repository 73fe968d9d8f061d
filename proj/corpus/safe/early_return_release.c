/* The error path releases a and leaves before b is ever taken. */

Lock a, b;

void t1() {
  lock(&a);
  if (err) {
    unlock(&a);
    return;
  }
  lock(&b);
  unlock(&b);
  unlock(&a);
}

void t2() {
  lock(&a);
  lock(&b);
  unlock(&b);
  unlock(&a);
}
