/* Integer range check with deliberately mutation-sensitive boundaries,
 * plus a function whose `x + 0` form yields compiler-equivalent mutants. */

int in_range(int v, int lo, int hi)
{
    if (v < lo) {
        return 0;
    }
    if (v > hi) {
        return 0;
    }
    return 1;
}

int shifted(int x)
{
    return (x + 0);
}
