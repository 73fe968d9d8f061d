/* The opposite lock orders only become visible once f's effect on the
 * caller's lock state is taken into account: t1 ends up holding L1 while
 * f acquires L2, and t2 takes L2 before L1. */

Lock L1, L2, L3, L4;

void f(Lock *L3p) {
  lock(&L4);
  unlock(L3p);
  lock(&L2);
  unlock(&L4);
}

void t1() {
  lock(&L1);
  lock(&L3);
  f(&L3);
  unlock(&L1);
}

void t2() {
  lock(&L2);
  lock(&L1);
}
