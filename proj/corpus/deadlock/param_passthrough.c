/* The second lock is taken through a pointer parameter; the order
 * conflict appears only after substituting the actual for the formal. */

Lock a, b;

void with_held(Lock *x) {
  lock(x);
  unlock(x);
}

void t1() {
  lock(&a);
  with_held(&b);
  unlock(&a);
}

void t2() {
  lock(&b);
  lock(&a);
  unlock(&a);
  unlock(&b);
}
