/* After the branch join the analysis believes a and h may both be held;
 * re-locking a on that merged state is the tell-tale of an infeasible
 * path. Without the acquisition heuristic the stale h yields (h, b)
 * and two more orders that cycle with t2's (b, h). */

Lock a, h, b;

void t1() {
  if (flag) {
    lock(&a);
  } else {
    lock(&h);
  }
  lock(&a);
  lock(&b);
  unlock(&b);
  unlock(&a);
}

void t2() {
  lock(&b);
  lock(&h);
  unlock(&h);
  unlock(&b);
}
