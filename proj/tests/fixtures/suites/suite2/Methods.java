package tests.suite2;

class SuperC {
    void only() {}
}

class A extends SuperC {
    A() {}
    void first() {}
    int second(int x) { return x; }
}

class B extends A {
    void one() {}
    void two() {}
    void three() {}
}
