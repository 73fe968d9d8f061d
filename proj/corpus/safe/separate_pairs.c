/* The two threads touch disjoint lock sets. */

Lock a, b, c, d;

void t1() {
  lock(&a);
  lock(&b);
  unlock(&b);
  unlock(&a);
}

void t2() {
  lock(&c);
  lock(&d);
  unlock(&d);
  unlock(&c);
}
