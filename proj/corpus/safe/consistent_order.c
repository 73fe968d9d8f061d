/* Both threads agree on a before b. */

Lock a, b;

void t1() {
  lock(&a);
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
