package org.demo.io;

import java.io.IOException;

public class FileSource implements Source {
    public enum Mode { TEXT, BINARY }

    private final String path;
    private Mode mode = Mode.TEXT;

    public FileSource(String path) {
        this.path = path;
    }

    public byte[] read(int n) throws IOException {
        switch (mode) {
            case TEXT:
                return new byte[n];
            case BINARY:
                return new byte[n * 2];
            default:
                throw new IOException(path);
        }
    }
}
