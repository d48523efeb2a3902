package org.demo.core;

public class Square extends AbstractShape {
    protected double side;

    public Square(double side) {
        super("square");
        this.side = side;
    }

    public double area() {
        return side * side;
    }
}

class Rect extends Square {
    private double other;

    Rect(double a, double b) {
        super(a);
        other = b;
    }

    @Override
    public double area() {
        if (other <= 0 || side <= 0) {
            return 0;
        }
        return side * other;
    }
}
