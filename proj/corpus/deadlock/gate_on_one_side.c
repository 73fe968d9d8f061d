/* Only t1 takes the gate g around the a/b pair; t2 bypasses it, so the
 * gate does not serialize the two orders and the pair must be reported. */

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
  lock(&b);
  lock(&a);
  unlock(&a);
  unlock(&b);
}
