"""Writes samples.csv: the hyper2 model exp(2 pi i k/8) P(k) at k = 1..60, 40 digits."""
from fractions import Fraction as F

import mpmath

mpmath.mp.dps = 50
P = [F(1651, 768), F(155, 32), F(13, 4), F(2, 3)]  # coefficients of k^0 .. k^3

with open("samples.csv", "w") as out:
    out.write("k,re,im\n")
    for k in range(1, 61):
        p = sum(mpmath.mpf(c.numerator) / c.denominator * k**j for j, c in enumerate(P))
        z = mpmath.exp(2j * mpmath.pi * k / 8) * p
        out.write(f"{k},{mpmath.nstr(z.real, 40)},{mpmath.nstr(z.imag, 40)}\n")
