/* Loop-heavy subject: triangular numbers and a clamped power of two. */

int sum_upto(int n)
{
    int total = 0;
    for (int i = 1; i <= n; i = i + 1) {
        total = total + i;
    }
    return total;
}

int pow2_capped(int n, int cap)
{
    int value = 1;
    while (n > 0 && value < cap) {
        value = value * 2;
        n = n - 1;
    }
    return value;
}
