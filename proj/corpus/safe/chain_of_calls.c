/* Three call levels; the lock order stays a, then b, then c. */

Lock a, b, c;

void level3() {
  lock(&c);
  unlock(&c);
}

void level2() {
  lock(&b);
  level3();
  unlock(&b);
}

void level1() {
  lock(&a);
  level2();
  unlock(&a);
}

void t1() {
  level1();
}

void t2() {
  level1();
}
