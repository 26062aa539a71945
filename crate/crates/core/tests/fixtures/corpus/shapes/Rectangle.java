package shapes;

public class Rectangle extends Polygon {
    protected double w, h;

    public Rectangle(double w, double h) {
        this.w = w;
        this.h = h;
    }

    @Override
    public double area() {
        return w * h;
    }

    public boolean isSquare() {
        return w > 0 && w == h;
    }

    @Override
    public String describe() {
        Logger l = Logger.get("rect");
        l.info(super.describe());
        return super.describe();
    }
}
