/* Two call levels deep, same order everywhere. */

Lock a, b;

void inner() {
  lock(&b);
  unlock(&b);
}

void outer() {
  lock(&a);
  inner();
  unlock(&a);
}

void t1() {
  outer();
}

void t2() {
  outer();
}
