/* A double release with no second thread and no second lock. */

Lock a;

void t1() {
  lock(&a);
  unlock(&a);
  unlock(&a);
}
