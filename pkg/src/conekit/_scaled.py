"""Internal scaled-float arithmetic: values carried as (mantissa, exp2).

A pair (m, e) represents m * 2**e.  Used wherever kernel series terms span
more binary orders of magnitude than a double can hold (deep boundary
probes, large-order Bessel factors).  Mantissas are kept in [1, 2) by
``norm2``; ``from_log`` builds a pair from a natural log with a
Cody-Waite-split log 2 so exponent folding stays accurate to ~1 ulp even
for |log| in the thousands.
"""

from __future__ import annotations

import math

_LN2_HI = 6.93147180369123816490e-01
_LN2_LO = 1.90821492927058770002e-10
LN2 = math.log(2.0)


def norm2(m: float, e: int) -> tuple[float, int]:
    """Renormalize so |mantissa| sits in [1, 2) (sign preserved)."""
    if m == 0.0 or not math.isfinite(m):
        return m, 0
    fm, fe = math.frexp(m)  # m = fm * 2**fe, |fm| in [0.5, 1)
    return fm * 2.0, e + fe - 1


def from_log(ln_x: float) -> tuple[float, int]:
    """Scaled pair for exp(ln_x); ln_x may be far outside float range."""
    if ln_x == -math.inf:
        return 0.0, 0
    e = math.floor(ln_x / LN2)
    frac = (ln_x - e * _LN2_HI) - e * _LN2_LO
    return norm2(math.exp(frac), e)


def log_of(pair: tuple[float, int]) -> float:
    m, e = pair
    if m == 0.0:
        return -math.inf
    return math.log(abs(m)) + e * LN2


def mul2(a: tuple[float, int], b: tuple[float, int]) -> tuple[float, int]:
    return norm2(a[0] * b[0], a[1] + b[1])


def add2(a: tuple[float, int], b: tuple[float, int]) -> tuple[float, int]:
    """Sum of two scaled pairs (mixed signs fine)."""
    if a[0] == 0.0:
        return b
    if b[0] == 0.0:
        return a
    if a[1] < b[1]:
        a, b = b, a
    shift = b[1] - a[1]
    if shift < -200:
        return a
    return norm2(a[0] + math.ldexp(b[0], shift), a[1])


def to_float(pair: tuple[float, int]) -> float:
    """Plain float; deliberately over/underflows outside float range."""
    return math.ldexp(pair[0], pair[1])
