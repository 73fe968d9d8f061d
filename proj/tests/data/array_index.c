Lock banks[4];

void t1() {
    lock(&banks[0]);
    unlock(&banks[0]);
}
