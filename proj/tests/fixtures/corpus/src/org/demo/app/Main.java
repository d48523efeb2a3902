package org.demo.app;

import org.demo.core.Circle;
import org.demo.core.Registry;

public class Main implements Service.Listener {
    private Registry registry = new Registry();

    public static void main(String[] args) {
        Main m = new Main();
        m.run(args.length > 0 ? Integer.parseInt(args[0]) : 1);
    }

    void run(int n) {
        for (int i = 0; i < n; i++) {
            registry.add(new Circle(i), 1);
        }
        fired("done");
    }

    public void fired(String event) {
        System.out.println(event);
    }
}
