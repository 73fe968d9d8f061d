/* Field-selector locks, same order in both threads. */

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
  lock(&dev.m);
  lock(&dev.n);
  unlock(&dev.n);
  unlock(&dev.m);
}
