#!/usr/bin/env python3
"""Independent exact oracle for elliptic divisibility sequence fixtures.

Uses only Fraction arithmetic and the chord-tangent law on a long
Weierstrass model, plus brute-force point enumeration over F_p. Shares no
code with the C++ library.

    eds_oracle.py denominators a1 a2 a3 a4 a6 x y N
    eds_oracle.py count a1 a2 a3 a4 a6 p
    eds_oracle.py order a1 a2 a3 a4 a6 x y p
"""
import math
import sys
from fractions import Fraction as F


def add(c, P, Q):
    a1, a2, a3, a4, a6 = c
    if P is None:
        return Q
    if Q is None:
        return P
    x1, y1 = P
    x2, y2 = Q
    if x1 == x2:
        if y1 + y2 + a1 * x2 + a3 == 0:
            return None
        lam = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) / (2 * y1 + a1 * x1 + a3)
    else:
        lam = (y2 - y1) / (x2 - x1)
    nu = y1 - lam * x1
    x3 = lam * lam + a1 * lam - a2 - x1 - x2
    y3 = -(lam + a1) * x3 - nu - a3
    return (x3, y3)


def denominators(c, P, n_max):
    out = []
    R = None
    for _ in range(n_max):
        R = add(c, R, P)
        den = R[0].denominator
        d = math.isqrt(den)
        assert d * d == den
        out.append(d)
    return out


def count(c, p):
    a1, a2, a3, a4, a6 = c
    total = 1
    for x in range(p):
        for y in range(p):
            if (y * y + a1 * x * y + a3 * y - (x ** 3 + a2 * x * x + a4 * x + a6)) % p == 0:
                total += 1
    return total


def add_mod(c, P, Q, p):
    a1, a2, a3, a4, a6 = c
    if P is None:
        return Q
    if Q is None:
        return P
    x1, y1 = P
    x2, y2 = Q
    if x1 == x2:
        if (y1 + y2 + a1 * x2 + a3) % p == 0:
            return None
        lam = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) * pow(2 * y1 + a1 * x1 + a3, -1, p)
    else:
        lam = (y2 - y1) * pow(x2 - x1, -1, p)
    lam %= p
    nu = (y1 - lam * x1) % p
    x3 = (lam * lam + a1 * lam - a2 - x1 - x2) % p
    y3 = (-(lam + a1) * x3 - nu - a3) % p
    return (x3, y3)


def order(c, P, p):
    x, y = P
    Pm = (x.numerator * pow(x.denominator, -1, p) % p, y.numerator * pow(y.denominator, -1, p) % p)
    R = Pm
    k = 1
    while R is not None:
        R = add_mod(c, R, Pm, p)
        k += 1
    return k


def main(argv):
    cmd = argv[1]
    c = tuple(int(v) for v in argv[2:7])
    if cmd == "denominators":
        P = (F(argv[7]), F(argv[8]))
        print(" ".join(str(d) for d in denominators(c, P, int(argv[9]))))
    elif cmd == "count":
        print(count(c, int(argv[7])))
    elif cmd == "order":
        P = (F(argv[7]), F(argv[8]))
        print(order(c, P, int(argv[9])))
    else:
        raise SystemExit("unknown command")


if __name__ == "__main__":
    main(sys.argv)
