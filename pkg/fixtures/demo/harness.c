/* Test harness for the demo subject.  Scenario 2 exercises the range
 * boundaries without observing the results, so boundary mutants survive
 * the suite and must be killed by fuzzing. */

#include <stdio.h>

int in_range(int v, int lo, int hi);
int shifted(int x);

int main(int argc, char **argv)
{
    int scenario = argc > 1 ? argv[1][0] - '0' : 1;
    if (scenario == 1) {
        printf("%d %d %d\n", in_range(5, 0, 10), in_range(-7, 0, 10),
               in_range(50, 0, 10));
        printf("%d\n", shifted(3));
    } else if (scenario == 2) {
        in_range(0, 0, 10);
        in_range(10, 0, 10);
        puts("boundary ok");
    } else {
        printf("%d\n", shifted(-9));
        puts("done");
    }
    return 0;
}
