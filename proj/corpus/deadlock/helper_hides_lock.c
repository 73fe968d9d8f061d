/* The b acquisition happens entirely inside a helper that releases it
 * again, so only the callee's record of ever having locked it exposes
 * the a-before-b order to the caller. */

Lock a, b;

void poke() {
  lock(&b);
  unlock(&b);
}

void t1() {
  lock(&a);
  poke();
  unlock(&a);
}

void t2() {
  lock(&b);
  lock(&a);
  unlock(&a);
  unlock(&b);
}
