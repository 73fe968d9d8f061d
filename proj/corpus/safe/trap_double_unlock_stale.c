/* The unconditional unlock(&a) duplicates the one inside the branch, so
 * the path reaching lock(&b) with g still tracked as held is bogus.
 * Without the release heuristic the stale g produces a (g, b) order that
 * cycles with t2's (b, g). */

Lock g, a, b;

void t1() {
  lock(&g);
  if (flag) {
    lock(&a);
    unlock(&a);
  }
  unlock(&a);
  lock(&b);
  unlock(&b);
  unlock(&g);
}

void t2() {
  lock(&b);
  lock(&g);
  unlock(&g);
  unlock(&b);
}
