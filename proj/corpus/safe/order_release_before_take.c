/* hand_over releases the caller's lock before taking the next one, so a
 * and b are never held together by t1; the callee's release-before-lock
 * ordering must prevent a phantom (a, b) at the call site. */

Lock a, b;

void hand_over(Lock *x) {
  unlock(x);
  lock(&b);
}

void t1() {
  lock(&a);
  hand_over(&a);
  unlock(&b);
}

void t2() {
  lock(&b);
  lock(&a);
  unlock(&a);
  unlock(&b);
}
