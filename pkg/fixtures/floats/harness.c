#include <stdio.h>

double absdiff(double a, double b);
double midpoint(double a, double b);

int main(int argc, char **argv)
{
    int scenario = argc > 1 ? argv[1][0] - '0' : 1;
    if (scenario == 1) {
        printf("%.3f %.3f\n", absdiff(1.5, 4.0), absdiff(4.0, 1.5));
    } else {
        printf("%.3f\n", midpoint(-2.0, 6.0));
    }
    return 0;
}
