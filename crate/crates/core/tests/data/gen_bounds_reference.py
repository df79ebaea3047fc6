#!/usr/bin/env python3
"""Regenerates bounds_reference.csv with 60-digit mpmath arithmetic.

Grid: 20 (epsilon, C) pairs times 5 values of n. f and delta are derived as
f = ceil(C / epsilon), delta = epsilon^2 / (4 C^2).
"""
from fractions import Fraction
import math
import mpmath

mpmath.mp.dps = 60

EPS = [Fraction(1, 2), Fraction(1, 3), Fraction(1, 4), Fraction(2, 5), Fraction(1, 10)]
CS = [Fraction(1), Fraction(3, 2), Fraction(2), Fraction(3)]
NS = [10, 1000, 10**6, 10**9, 10**12]


def mp(q):
    return mpmath.mpf(q.numerator) / q.denominator


def main():
    print("eps,c,n,f,delta,event1,degree_tail")
    for eps in EPS:
        for c in CS:
            f = math.ceil(c / eps)
            delta = eps * eps / (4 * c * c)
            for n in NS:
                size = (mp(c) + 1) * n
                e1 = mpmath.log(size + 1) * size - mp(eps) ** 2 * mpmath.power(n, 2 - f * f * mp(delta))
                dt = mpmath.log(size) - mpmath.power(n, 1 - mp(delta)) / 3
                print(f"{eps},{c},{n},{f},{delta},{mpmath.nstr(e1, 25)},{mpmath.nstr(dt, 25)}")


if __name__ == "__main__":
    main()
