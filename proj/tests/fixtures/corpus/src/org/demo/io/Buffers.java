package org.demo.io;

final class Buffers {
    static byte[] grow(byte[] b) {
        byte[] out = new byte[b.length * 2];
        System.arraycopy(b, 0, out, 0, b.length);
        return out;
    }
}

class BufferPool {
    private Buffers unused;
    int capacity;

    byte[] take() {
        return new byte[capacity];
    }
}
