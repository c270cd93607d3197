/* One file exercising every mutation operator context: arithmetic,
 * relational, logical, bitwise, shift, unary insertion targets, integer
 * and float and char literals, statement deletion candidates. */

int blend(int a, int b)
{
    int c = 0;
    if (a < b && a != 0) {
        c = a + b;
    }
    c = c * 2 - a / 3 % 2;
    c = (c << 1) | (b >> 1);
    c = (c & 5) ^ 7;
    if (!(a >= b) || a <= 9) {
        c = c + 1;
    }
    while (c > 40) {
        c = c - 4;
    }
    return c;
}

double scale(double x, double y)
{
    double z = 3.5;
    if (x == y) {
        z = x * y + 0.5;
    }
    return z / 2.0;
}

char first_or_default(char ch)
{
    if (ch == 'a') {
        return '\0';
    }
    return ch;
}
