/* Stateful subject: every call advances a hidden counter, so two runs of
 * the original on the same input disagree and no fuzzer kill can be
 * confirmed. */

static int counter = 0;

int next_id(int base)
{
    counter = counter + 1;
    if (base < 0) {
        return counter - base;
    }
    return base + counter;
}
