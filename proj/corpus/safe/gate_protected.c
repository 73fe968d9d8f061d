/* Both threads hold the gate g while taking a and b in opposite orders;
 * the opposite orders can never overlap. */

Lock g, a, b;

void t1() {
  lock(&g);
  lock(&a);
  lock(&b);
  unlock(&b);
  unlock(&a);
  unlock(&g);
}

void t2() {
  lock(&g);
  lock(&b);
  lock(&a);
  unlock(&a);
  unlock(&b);
  unlock(&g);
}
