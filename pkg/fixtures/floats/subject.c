/* Floating-point subject: absolute difference and a scaled average. */

double absdiff(double a, double b)
{
    if (a < b) {
        return b - a;
    }
    return a - b;
}

double midpoint(double a, double b)
{
    return (a + b) / 2.0;
}
