/* Re-locking a without an intervening release; only one thread, so no
 * ordering conflict can arise whatever the heuristic makes of it. */

Lock r, b;

void t1() {
  lock(&r);
  lock(&r);
  lock(&b);
  unlock(&b);
  unlock(&r);
}
