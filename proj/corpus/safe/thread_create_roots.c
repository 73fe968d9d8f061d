/* Workers started through pthread_create; both honor a before b. */

pthread_mutex_t a, b;

void *worker1(void *arg) {
  pthread_mutex_lock(&a);
  pthread_mutex_lock(&b);
  pthread_mutex_unlock(&b);
  pthread_mutex_unlock(&a);
  return 0;
}

void *worker2(void *arg) {
  pthread_mutex_lock(&a);
  pthread_mutex_lock(&b);
  pthread_mutex_unlock(&b);
  pthread_mutex_unlock(&a);
  return 0;
}

int main() {
  pthread_t u, v;
  pthread_create(&u, 0, worker1, 0);
  pthread_create(&v, 0, worker2, 0);
  return 0;
}
