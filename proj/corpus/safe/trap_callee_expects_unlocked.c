/* take_fresh requires both of its locks to be free on entry, but the
 * joined caller state claims a may already be held — another infeasible
 * path marker. Without the summary-application heuristic the stale held
 * set manufactures orders that cycle with t2's (b, h). */

Lock a, h, b;

void take_fresh(Lock *p, Lock *q) {
  lock(p);
  lock(q);
  unlock(q);
  unlock(p);
}

void t1() {
  if (flag) {
    lock(&a);
  } else {
    lock(&h);
  }
  take_fresh(&a, &b);
}

void t2() {
  lock(&b);
  lock(&h);
  unlock(&h);
  unlock(&b);
}
