/* The function body never closes. */

Lock a;

void t1() {
  lock(&a);
  unlock(&a);
