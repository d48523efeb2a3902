package org.demo.app;

/* A block comment with a stray brace } and a keyword if (x) */
public class Tricky {
    private String text = "{ not a block }";
    private char brace = '}';

    // class Hidden { } in a line comment is not a type

    public int count(java.util.Map<String, java.util.List<Integer>> m) {
        int c = 0; /* trailing comment */
        String s = "while (true) { }";
        for (java.util.List<Integer> l : m.values()) {
            c += l.size() > 2 && s.isEmpty() ? 1 : 0;
        }
        return c;
    }
}
