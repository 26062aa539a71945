package shapes;

public class Polygon extends Shape {
    protected int sides;

    @Override
    public double area() {
        return 0.0;
    }

    @Override
    public String describe() {
        return "polygon";
    }
}
