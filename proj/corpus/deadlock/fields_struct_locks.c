/* Locks reached through field selectors; the two threads disagree on
 * the order of dev.m and dev.n. */

struct Device {
  Lock m;
  Lock n;
};

struct Device dev;

void t1() {
  lock(&dev.m);
  lock(&dev.n);
  unlock(&dev.n);
  unlock(&dev.m);
}

void t2() {
  lock(&dev.n);
  lock(&dev.m);
  unlock(&dev.m);
  unlock(&dev.n);
}
