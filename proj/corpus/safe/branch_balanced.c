/* Both branches acquire the same lock, so the join adds nothing new. */

Lock a, b;

void t1() {
  if (flag) {
    lock(&a);
  } else {
    lock(&a);
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
