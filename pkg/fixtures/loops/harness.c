#include <stdio.h>

int sum_upto(int n);
int pow2_capped(int n, int cap);

int main(int argc, char **argv)
{
    int scenario = argc > 1 ? argv[1][0] - '0' : 1;
    if (scenario == 1) {
        printf("%d %d\n", sum_upto(5), sum_upto(0));
    } else {
        printf("%d %d\n", pow2_capped(3, 100), pow2_capped(10, 16));
    }
    return 0;
}
