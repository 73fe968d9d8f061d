/* A cycle over three locks: t1 orders a < b < c, t2 orders c < a. */

Lock a, b, c;

void t1() {
  lock(&a);
  lock(&b);
  lock(&c);
  unlock(&c);
  unlock(&b);
  unlock(&a);
}

void t2() {
  lock(&c);
  lock(&a);
  unlock(&a);
  unlock(&c);
}
