/* Three locks in fully reversed orders, but both threads wrap the whole
 * sequence in the same gate. */

Lock g, a, b, c;

void t1() {
  lock(&g);
  lock(&a);
  lock(&b);
  lock(&c);
  unlock(&c);
  unlock(&b);
  unlock(&a);
  unlock(&g);
}

void t2() {
  lock(&g);
  lock(&c);
  lock(&b);
  lock(&a);
  unlock(&a);
  unlock(&b);
  unlock(&c);
  unlock(&g);
}
