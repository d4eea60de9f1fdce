"""Independent reference values frozen into tests/support/oracle.hpp.

Uses mpmath at 30 digits and exact rational arithmetic; nothing here calls
the library.
"""
from fractions import Fraction as F
from itertools import product
from math import comb

import mpmath as mp

mp.mp.dps = 30


def beta_series(k):
    s = F(0)
    for r in range(0, 2 * k + 1):
        inner = F((-1) ** r, (2 * k - r + 1) * (6 * k - r + 3) ** 2)
        for l in range(0, 2 * k + r + 2):
            inner += F(comb(2 * k + r + 1, l) * (-2) ** l, (2 * k - r + l + 1) * (6 * k - r + l + 3) ** 2)
        s += comb(2 * k, r) * F(2 ** (2 * k - r + 1), 2 * k + r + 1) * inner
    return 1 - (2 * k + 1) ** 4 * s


def gamma_sum(g):
    a1 = mp.sqrt(mp.pi) / (2 ** (4 * g) * mp.gamma(g) ** 2) * mp.fsum(
        1 / (2 ** k * mp.factorial(k)) * mp.gamma(k + 2 * g) ** 2 / mp.gamma(k + 2 * g + 0.5)
        for k in range(0, 2 * g))
    a2 = mp.gamma(g + 0.5) ** 2 / (4 * mp.sqrt(mp.pi) * mp.gamma(g) ** 2) * mp.fsum(
        1 / mp.factorial(k) * mp.gamma(k + g) ** 2 / mp.gamma(k + 2 * g + 0.5) for k in range(0, g))
    return mp.mpf(1) / 2 + a1 + a2


def ginibre_expected_real(n):
    return mp.mpf(1) / 2 + mp.sqrt(2) * mp.gamma(n + mp.mpf(1) / 2) / mp.gamma(n) * mp.hyp2f1(
        1, -mp.mpf(1) / 2, n, mp.mpf(1) / 2) / mp.sqrt(mp.pi)


def sign_matrices_real():
    return sum(1 for a, b, c, d in product((-1, 1), repeat=4) if (a - d) ** 2 + 4 * b * c >= 0)


def beta_pdf(mu, nu, x):
    norm = mp.quad(lambda t: (1 - t) ** mu * t ** nu, [0, 1]) * 2
    return (1 - abs(x)) ** mu * abs(x) ** nu / norm


def main():
    print("K0")
    for x in ("1e-8", "1e-3", "0.1", "1", "1.5", "2", "2.5", "5", "10", "24.9", "25.1", "100", "600"):
        print(f"  {x} {mp.nstr(mp.besselk(0, mp.mpf(x)), 20)}")
    print("lgamma")
    for x in ("0.25", "0.5", "1.5", "3.7", "14.9", "15.1", "50", "170.5", "1000"):
        print(f"  {x} {mp.nstr(mp.loggamma(mp.mpf(x)), 20)}")
    print("beta(0,1) pdf at 0.5", mp.nstr(beta_pdf(0, 1, mp.mpf("0.5")), 20))
    print("beta(1/2,3/2) pdf at 0.3", mp.nstr(beta_pdf(mp.mpf(1) / 2, mp.mpf(3) / 2, mp.mpf("0.3")), 20))
    print("sign matrices with real spectrum", sign_matrices_real(), "of 16")
    for k in (1, 2, 3, 5, 10):
        print("beta_series", k, mp.nstr(mp.mpf(beta_series(k).numerator) / beta_series(k).denominator, 20))
    for g in (1, 2, 3, 10, 50, 100):
        print("gamma_sum", g, mp.nstr(gamma_sum(g), 20),
              "asym", mp.nstr(mp.mpf(5) / 8 + 1 / (16 * mp.sqrt(2 * mp.pi * g)), 20))
    for n in (2, 3, 4, 8):
        print("ginibre E", n, mp.nstr(ginibre_expected_real(n), 20))


if __name__ == "__main__":
    main()
