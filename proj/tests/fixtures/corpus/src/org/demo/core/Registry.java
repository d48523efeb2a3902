package org.demo.core;

import java.util.ArrayList;
import java.util.List;

public class Registry {
    private final List<Entry> entries = new ArrayList<>();
    public int limit = 10;

    private static class Entry {
        Shape shape;
        int weight;
    }

    protected static class Bucket {
        int size;

        boolean full(int cap) {
            return size >= cap;
        }
    }

    public void add(Shape s, int weight) {
        if (entries.size() >= limit) {
            throw new IllegalStateException("full");
        }
        Entry e = new Entry();
        e.shape = s;
        e.weight = weight;
        entries.add(e);
    }

    public double total() {
        double sum = 0;
        for (Entry e : entries) {
            sum += e.shape.area() * e.weight;
        }
        return sum;
    }
}
