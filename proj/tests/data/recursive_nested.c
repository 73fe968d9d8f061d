Lock r;
Lock a;
Lock b;

void t1() {
    lock(&r);
    lock(&a);
    lock(&r);
    lock(&b);
    unlock(&b);
    unlock(&a);
    unlock(&r);
}

void t2() {
    lock(&b);
    lock(&a);
    unlock(&a);
    unlock(&b);
}
