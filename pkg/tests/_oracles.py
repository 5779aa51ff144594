"""Independent reference implementations used only by the tests.

Clebsch-Gordan values come from the exact Racah sum in rational
arithmetic; Wigner-d and spherical Bessel values from mpmath at high
precision. None of these share code with the package.
"""

import math
from fractions import Fraction
from math import factorial

import mpmath


def cg_exact(tj1, tj2, tm1, tm2, tJ, tM):
    """<j1 m1 j2 m2|J M> from doubled arguments, exact up to the final sqrt."""
    if tm1 + tm2 != tM:
        return 0.0
    a = (tj1 + tj2 - tJ) // 2
    b = (tj1 - tj2 + tJ) // 2
    c = (-tj1 + tj2 + tJ) // 2
    if min(a, b, c) < 0 or (tj1 + tj2 + tJ) % 2:
        return 0.0
    f = factorial
    pre = Fraction(
        (tJ + 1) * f(a) * f(b) * f(c)
        * f((tj1 + tm1) // 2) * f((tj1 - tm1) // 2)
        * f((tj2 + tm2) // 2) * f((tj2 - tm2) // 2)
        * f((tJ + tM) // 2) * f((tJ - tM) // 2),
        f((tj1 + tj2 + tJ) // 2 + 1),
    )
    kmin = max(0, (tj2 - tJ - tm1) // 2, (tj1 - tJ + tm2) // 2)
    kmax = min(a, (tj1 - tm1) // 2, (tj2 + tm2) // 2)
    s = Fraction(0)
    for k in range(kmin, kmax + 1):
        s += Fraction((-1) ** k, f(k) * f(a - k) * f((tj1 - tm1) // 2 - k) * f((tj2 + tm2) // 2 - k)
                      * f((tJ - tj2 + tm1) // 2 + k) * f((tJ - tj1 - tm2) // 2 + k))
    return math.copysign(math.sqrt(pre * s * s), s)


def wigner_d_mp(tj, tm1, tm2, beta, dps=60):
    """Explicit factorial sum for d^j_{m1 m2}(beta) evaluated with mpmath."""
    with mpmath.workdps(dps):
        jp1, jm1 = (tj + tm1) // 2, (tj - tm1) // 2
        jp2, jm2 = (tj + tm2) // 2, (tj - tm2) // 2
        pref = mpmath.sqrt(mpmath.factorial(jp1) * mpmath.factorial(jm1)
                           * mpmath.factorial(jp2) * mpmath.factorial(jm2))
        c, s = mpmath.cos(mpmath.mpf(beta) / 2), mpmath.sin(mpmath.mpf(beta) / 2)
        total = mpmath.mpf(0)
        for k in range(max(0, (tm2 - tm1) // 2), min(jp2, jm1) + 1):
            den = (mpmath.factorial(jp2 - k) * mpmath.factorial(k)
                   * mpmath.factorial(jm1 - k) * mpmath.factorial(k + (tm1 - tm2) // 2))
            total += (-1) ** (k + (tm1 - tm2) // 2) * c ** (tj + (tm2 - tm1) // 2 - 2 * k) \
                * s ** ((tm1 - tm2) // 2 + 2 * k) / den
        return float(pref * total)


def sph_jn_mp(l, x, dps=40):
    with mpmath.workdps(dps):
        x = mpmath.mpf(x)
        if x == 0:
            return 1.0 if l == 0 else 0.0
        return float(mpmath.sqrt(mpmath.pi / (2 * x)) * mpmath.besselj(l + mpmath.mpf(1) / 2, x, maxterms=10**6))
