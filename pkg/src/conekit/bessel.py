"""Modified Bessel functions I_nu, K_nu of real order nu >= 0.

The resolvent series multiplies I_mu(a) by K_mu(b) for orders mu up to a
few hundred and arguments from 1e-6 to several hundred.  In that range the
factors individually overflow or underflow double precision
(I_mu(r) ~ (r/2)^mu / Gamma(mu+1), K_mu(r) ~ Gamma(mu) (2/r)^mu / 2 near
zero) long before their product does.  Every evaluation therefore carries
an explicit binary exponent: the result is ``value * 2**exp2``, with
``exp2 == 0`` whenever the plain float is comfortably representable.

Algorithm selection (cutovers in :mod:`conekit.config`):

* ``I``: ascending power series for r <= max(10, nu/2); Olver's uniform
  large-order asymptotics for nu >= 30; otherwise a Lentz continued
  fraction for the ratio I_{nu+1}/I_nu closed through the Wronskian
  ``I_nu K_{nu+1} + I_{nu+1} K_nu = 1/r``.
* ``K``: Olver for nu >= 30; otherwise Temme's series (r <= 2) or Steed's
  continued fraction (r > 2) at the fractional base order in [-1/2, 1/2),
  walked up in order by the stable forward recurrence.

Derivatives use ``I'_nu = I_{nu+1} + (nu/r) I_nu`` and
``K'_nu = -(K_{nu-1} + K_{nu+1})/2``, arranged so no cancellation-prone
downward step is ever taken.

Accuracy: validated against 40-digit reference values at 1e-12 relative
over nu <= 200, r in [1e-6, 500] (see the test suite).  ``abs_error_est``
is a running estimate of rounding plus truncation, not a certified
enclosure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from ._scaled import add2 as _add
from ._scaled import from_log as _from_log
from ._scaled import log_of as _log_of
from ._scaled import mul2 as _mul
from ._scaled import norm2 as _norm
from .config import DEFAULTS
from .errors import DomainError

__all__ = [
    "BesselEval",
    "bessel_i",
    "bessel_k",
    "bessel_i_dr",
    "bessel_k_dr",
    "bessel_i_with_dr",
    "bessel_k_with_dr",
    "wronskian_residual",
    "log_ik_bound",
    "log_i_dr_k_bound",
    "log_i_k_dr_bound",
    "BoundFit",
    "BoundReport",
    "check_uniform_bounds",
    "bound_report_csv",
]

_EPS = 2.220446049250313e-16
_LN2 = math.log(2.0)


@dataclass(frozen=True)
class BesselEval:
    """One function evaluation: the result is ``value * 2**exp2``.

    ``exp2`` is zero unless the plain value would run out of float range;
    ``abs_error_est`` is expressed on the same scale as ``value``.
    """

    value: float
    abs_error_est: float
    method: str
    exp2: int = 0

    def float_value(self) -> float:
        """Plain float; deliberately over/underflows outside float range."""
        return math.ldexp(self.value, self.exp2)

    @property
    def log_abs(self) -> float:
        """Natural log of the absolute value (-inf for an exact zero)."""
        if self.value == 0.0:
            return -math.inf
        return math.log(abs(self.value)) + self.exp2 * _LN2

    @property
    def rel_error_est(self) -> float:
        if self.value == 0.0:
            return 0.0
        return abs(self.abs_error_est / self.value)


def _pack(pair: tuple[float, int], rel_err: float, method: str) -> BesselEval:
    m, e = _norm(*pair)
    if m == 0.0:
        return BesselEval(0.0, 0.0, method, 0)
    log2_total = math.log2(abs(m)) + e
    if abs(log2_total) <= DEFAULTS.fold_exp2:
        v = math.ldexp(m, e)
        return BesselEval(v, abs(v) * rel_err, method, 0)
    return BesselEval(m, abs(m) * rel_err, method, e)


def _validate(nu: float, r: float) -> tuple[float, float]:
    nu, r = float(nu), float(r)
    if not math.isfinite(nu) or nu < 0.0:
        raise DomainError(f"order must be finite and >= 0, got {nu!r}")
    if not math.isfinite(r) or r <= 0.0:
        raise DomainError(f"argument must be finite and > 0, got {r!r}")
    return nu, r


# ----------------------------------------------------------------------
# I_nu: ascending power series.
# ----------------------------------------------------------------------

def _i_series(nu: float, r: float) -> tuple[tuple[float, int], float]:
    """All-positive ascending series; returns (scaled value, rel error)."""
    q = 0.25 * r * r
    term = 1.0
    total = 1.0
    shift = 0
    k = 0
    while True:
        k += 1
        term *= q / (k * (nu + k))
        total += term
        if total > 8.98846567431158e307 * 0.5:  # 2**1023 / 2: renormalize
            total = math.ldexp(total, -512)
            term = math.ldexp(term, -512)
            shift += 512
        ratio = q / ((k + 1) * (nu + k + 1))
        if ratio < 0.5 and term <= 0.25 * _EPS * total:
            break
        if k > 100000:  # pragma: no cover - unreachable for finite inputs
            raise ArithmeticError("I series failed to converge")
    ln_pref = nu * math.log(0.5 * r) - math.lgamma(nu + 1.0)
    m, e = _from_log(ln_pref)
    rel = (k + 4) * _EPS + 2.0 * abs(ln_pref) * _EPS
    return _norm(m * total, e + shift), rel


# ----------------------------------------------------------------------
# K_nu at base order |h| <= 1/2: Temme's series (r <= 2), Steed CF2 (r > 2).
# ----------------------------------------------------------------------

# Taylor coefficients of 1/Gamma(1+x) = 1 + b1 x + b2 x^2 + ...
_INV_GAMMA1 = (
    0.5772156649015329,
    -0.6558780715202538,
    -0.0420026350340952,
    0.1665386113822915,
    -0.0421977345555443,
    -0.0096219715278770,
    0.0072189432466630,
    -0.0011651675918591,
)


def _temme_gammas(h: float) -> tuple[float, float, float, float]:
    """(gam1, gam2, 1/Gamma(1+h), 1/Gamma(1-h)) for |h| <= 1/2.

    gam1 = (1/Gamma(1-h) - 1/Gamma(1+h)) / (2h), gam2 the even average;
    a short Taylor form takes over near h = 0 where the quotient cancels.
    """
    b = _INV_GAMMA1
    if abs(h) < 0.01:
        h2 = h * h
        gam1 = -(b[0] + h2 * (b[2] + h2 * (b[4] + h2 * b[6])))
        gam2 = 1.0 + h2 * (b[1] + h2 * (b[3] + h2 * b[5]))
        gampl = gam2 - h * gam1
        gammi = gam2 + h * gam1
    else:
        gampl = 1.0 / math.gamma(1.0 + h)
        gammi = 1.0 / math.gamma(1.0 - h)
        gam1 = (gammi - gampl) / (2.0 * h)
        gam2 = 0.5 * (gammi + gampl)
    return gam1, gam2, gampl, gammi


def _k_temme(h: float, x: float) -> tuple[tuple[float, int], tuple[float, int], float]:
    """K_h(x) and K_{h+1}(x) for |h| <= 1/2, 0 < x <= 2 (scaled pairs)."""
    pimu = math.pi * h
    fact = pimu / math.sin(pimu) if pimu != 0.0 else 1.0
    dlx = -math.log(0.5 * x)
    e = h * dlx
    fact2 = math.sinh(e) / e if e != 0.0 else 1.0
    gam1, gam2, gampl, gammi = _temme_gammas(h)
    ff = fact * (gam1 * math.cosh(e) + gam2 * fact2 * dlx)
    ee = math.exp(e)
    p = 0.5 * ee / gampl
    q = 0.5 / (ee * gammi)
    c = 1.0
    d2 = 0.25 * x * x
    total = ff
    total1 = p
    k = 0
    for i in range(1, 1000):
        k = i
        ff = (i * ff + p + q) / (i * i - h * h)
        c *= d2 / i
        p /= (i - h)
        q /= (i + h)
        dl = c * ff
        total += dl
        total1 += c * (p - i * ff)
        if abs(dl) < abs(total) * 0.5 * _EPS:
            break
    rel = (k + 6) * _EPS
    k_h = _norm(total, 0)
    # K_{h+1} = (2/x) * total1; go through logs so x ~ 1e-300 cannot overflow.
    sign = 1.0 if total1 >= 0.0 else -1.0
    if total1 == 0.0:
        k_h1: tuple[float, int] = (0.0, 0)
    else:
        m, ex = _from_log(math.log(abs(total1)) + math.log(2.0 / x))
        k_h1 = (sign * m, ex)
    return k_h, k_h1, rel


def _k_cf2(h: float, x: float) -> tuple[tuple[float, int], tuple[float, int], float]:
    """K_h(x) and K_{h+1}(x) for |h| <= 1/2, x > 2, via Steed's CF2."""
    mu2 = h * h
    b = 2.0 * (1.0 + x)
    d = 1.0 / b
    hcf = delh = d
    q1 = 0.0
    q2 = 1.0
    a1 = 0.25 - mu2
    q = c = a1
    a = -a1
    s = 1.0 + q * delh
    k = 1
    for i in range(2, 10000):
        k = i
        a -= 2 * (i - 1)
        c = -a * c / i
        qnew = (q1 - b * q2) / a
        q1 = q2
        q2 = qnew
        q += c * qnew
        b += 2.0
        d = 1.0 / (b + a * d)
        delh = (b * d - 1.0) * delh
        hcf += delh
        dels = q * delh
        s += dels
        if abs(dels / s) <= _EPS:
            break
    hcf = a1 * hcf
    ln_kh = 0.5 * math.log(math.pi / (2.0 * x)) - x - math.log(s)
    k_h = _from_log(ln_kh)
    k_h1 = _mul(k_h, _norm((h + x + 0.5 - hcf) / x, 0))
    rel = (k + 8) * _EPS + 2.0 * x * _EPS
    return k_h, k_h1, rel


def _k_base(h: float, x: float):
    if x <= DEFAULTS.temme_r_max:
        pair = _k_temme(h, x)
        return pair, "power-series"
    pair = _k_cf2(h, x)
    return pair, "continued-fraction"


def _k_pair(nu: float, x: float) -> tuple[tuple[float, int], tuple[float, int], float, str]:
    """(K_nu, K_{nu+1}) scaled, with rel error estimate and method tag."""
    if nu >= DEFAULTS.olver_nu_min:
        k0, r0 = _olver_k(nu, x)
        k1, r1 = _olver_k(nu + 1.0, x)
        return k0, k1, max(r0, r1), "uniform-asymptotic"
    n = int(math.floor(nu + 0.5))
    h = nu - n  # in [-1/2, 1/2)
    (km, km1, rel), method = _k_base(h, x)
    if n == 0:
        return km, km1, rel, method
    # Forward recurrence K_{j+1} = K_{j-1} + (2j/x) K_j, all terms positive:
    # stable, no cancellation.
    for j in range(1, n + 1):
        km, km1 = km1, _add(km, _mul(_norm(2.0 * (h + j) / x, 0), km1))
    return km, km1, rel + (n + 2) * _EPS, "recurrence"


# ----------------------------------------------------------------------
# I_nu via CF1 ratio + Wronskian closure (moderate order, large argument).
# ----------------------------------------------------------------------

def _i_ratio_cf1(nu: float, x: float) -> tuple[float, int]:
    """I_{nu+1}(x)/I_nu(x) by modified Lentz; returns (ratio, iterations)."""
    tiny = 1e-300
    f = tiny
    c = f
    d = 0.0
    k = 0
    for j in range(1, 200000):
        k = j
        b = 2.0 * (nu + j) / x
        d = b + d
        if d == 0.0:
            d = tiny
        c = b + 1.0 / c
        if c == 0.0:
            c = tiny
        d = 1.0 / d
        delta = c * d
        f *= delta
        if abs(delta - 1.0) < 0.5 * _EPS:
            break
    else:  # pragma: no cover
        raise ArithmeticError("CF1 failed to converge")
    return f, k


def _i_pair_cf(nu: float, x: float):
    """(I_nu, I_{nu+1}) scaled via CF1 + Wronskian I K1 + I1 K = 1/x."""
    f, k = _i_ratio_cf1(nu, x)
    k0, k1, relk, _ = _k_pair(nu, x)
    denom = _add(k1, _mul(_norm(f, 0), k0))
    # I_nu = 1 / (x * denom)
    ln_i = -(math.log(x) + _log_of(denom))
    i0 = _from_log(ln_i)
    i1 = _mul(i0, _norm(f, 0))
    rel = relk + (k + 8) * _EPS
    return i0, i1, rel


# ----------------------------------------------------------------------
# Olver's uniform large-order asymptotics.
# ----------------------------------------------------------------------

def _gen_olver_polys(kmax: int) -> list[list[float]]:
    """U_k polynomials (ascending coefficients in p), exact recurrence.

    U_0 = 1,  U_{k+1}(p) = p^2(1-p^2)/2 * U_k'(p)
                           + (1/8) * Integral_0^p (1 - 5 t^2) U_k(t) dt.
    Done in Fraction arithmetic; degree of U_k is 3k.
    """
    polys = [[Fraction(1)]]
    for _ in range(kmax):
        u = polys[-1]
        du = [i * c for i, c in enumerate(u)][1:]
        nxt = [Fraction(0)] * (len(u) + 3)
        for i, c in enumerate(du):  # p^2/2 * u' - p^4/2 * u'
            nxt[i + 2] += c / 2
            nxt[i + 4] -= c / 2
        for i, c in enumerate(u):  # (1/8) int (1 - 5 t^2) u
            nxt[i + 1] += c / (8 * (i + 1))
            nxt[i + 3] -= 5 * c / (8 * (i + 3))
        while nxt and nxt[-1] == 0:
            nxt.pop()
        polys.append(nxt)
    return [[float(c) for c in poly] for poly in polys]


_U_POLYS = _gen_olver_polys(12)


def _horner(coeffs: list[float], x: float) -> float:
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _olver_series(nu: float, p: float, alternate: bool) -> tuple[float, float]:
    total = 0.0
    last = 0.0
    for k, poly in enumerate(_U_POLYS):
        term = _horner(poly, p) / nu**k
        if alternate and k % 2 == 1:
            term = -term
        total += term
        last = term
    return total, abs(last / total) if total != 0.0 else 0.0


def _olver_frame(nu: float, x: float) -> tuple[float, float]:
    z = x / nu
    w = math.hypot(1.0, z)
    p = 1.0 / w
    eta = w + math.log(z / (1.0 + w))
    return p, eta


def _olver_i(nu: float, x: float) -> tuple[tuple[float, int], float]:
    p, eta = _olver_frame(nu, x)
    s, trunc = _olver_series(nu, p, alternate=False)
    ln_val = nu * eta - 0.5 * math.log(2.0 * math.pi * nu) - 0.5 * math.log(1.0 / p) + math.log(s)
    rel = trunc + (abs(nu * eta) + 16.0) * _EPS
    return _from_log(ln_val), rel


def _olver_k(nu: float, x: float) -> tuple[tuple[float, int], float]:
    p, eta = _olver_frame(nu, x)
    s, trunc = _olver_series(nu, p, alternate=True)
    ln_val = -nu * eta + 0.5 * math.log(math.pi / (2.0 * nu)) - 0.5 * math.log(1.0 / p) + math.log(s)
    rel = trunc + (abs(nu * eta) + 16.0) * _EPS
    return _from_log(ln_val), rel


# ----------------------------------------------------------------------
# Public evaluations.
# ----------------------------------------------------------------------

def _i_pair_any(nu: float, x: float):
    """(I_nu, I_{nu+1}) scaled, rel error, method."""
    if x <= max(DEFAULTS.series_r_max, 0.5 * nu):
        v0, r0 = _i_series(nu, x)
        v1, r1 = _i_series(nu + 1.0, x)
        return v0, v1, max(r0, r1), "power-series"
    if nu >= DEFAULTS.olver_nu_min:
        v0, r0 = _olver_i(nu, x)
        v1, r1 = _olver_i(nu + 1.0, x)
        return v0, v1, max(r0, r1), "uniform-asymptotic"
    v0, v1, rel = _i_pair_cf(nu, x)
    return v0, v1, rel, "continued-fraction"


def bessel_i(nu: float, r: float) -> BesselEval:
    """Modified Bessel function of the first kind, scaled on overflow."""
    nu, r = _validate(nu, r)
    v0, _v1, rel, method = _i_pair_any(nu, r)
    return _pack(v0, rel, method)


def bessel_k(nu: float, r: float) -> BesselEval:
    """Modified Bessel function of the second kind, scaled on overflow."""
    nu, r = _validate(nu, r)
    k0, _k1, rel, method = _k_pair(nu, r)
    return _pack(k0, rel, method)


def bessel_i_with_dr(nu: float, r: float) -> tuple[BesselEval, BesselEval]:
    """(I_nu(r), d/dr I_nu(r)) sharing intermediate work.

    The derivative uses I'_nu = I_{nu+1} + (nu/r) I_nu, which involves only
    nonnegative terms (no cancellation) and is valid for every nu >= 0.
    """
    nu, r = _validate(nu, r)
    v0, v1, rel, method = _i_pair_any(nu, r)
    deriv = _add(v1, _mul(_norm(nu / r, 0), v0))
    return _pack(v0, rel, method), _pack(deriv, rel + 4.0 * _EPS, "recurrence")


def bessel_i_dr(nu: float, r: float) -> BesselEval:
    """d/dr I_nu(r)."""
    return bessel_i_with_dr(nu, r)[1]


def bessel_k_with_dr(nu: float, r: float) -> tuple[BesselEval, BesselEval]:
    """(K_nu(r), d/dr K_nu(r)) sharing intermediate work.

    K'_nu = -(K_{nu-1} + K_{nu+1})/2 with K_{nu-1} = K_{|nu-1|}.  For
    nu >= 1 the pair (K_{nu-1}, K_nu) is computed first and K_{nu+1}
    recovered by one *forward* step, so no subtractive recurrence occurs.
    """
    nu, r = _validate(nu, r)
    if nu >= 1.0:
        km, kc, rel, method = _k_pair(nu - 1.0, r)  # (K_{nu-1}, K_nu)
        kp = _add(km, _mul(_norm(2.0 * nu / r, 0), kc))  # K_{nu+1}
        value = kc
    else:
        kc, kp, rel, method = _k_pair(nu, r)  # (K_nu, K_{nu+1})
        other = _k_pair(abs(nu - 1.0), r)  # K_{|nu-1|} = K_{nu-1}
        km = other[0]
        rel = max(rel, other[2])
        value = kc
    deriv = _mul(_norm(-0.5, 0), _add(km, kp))
    return _pack(value, rel, method), _pack(deriv, rel + 4.0 * _EPS, "recurrence")


def bessel_k_dr(nu: float, r: float) -> BesselEval:
    """d/dr K_nu(r) (always negative)."""
    return bessel_k_with_dr(nu, r)[1]


def wronskian_residual(nu: float, r: float) -> float:
    """r * |I_nu(r) K'_nu(r) - I'_nu(r) K_nu(r) + 1/r| (should be ~0).

    The exact Wronskian is I K' - I' K = -1/r; the residual is scaled by r
    so it is a relative-size quantity across the whole range.
    """
    i0, i1 = bessel_i_with_dr(nu, r)
    k0, k1 = bessel_k_with_dr(nu, r)
    ik = _mul((i0.value, i0.exp2), (k1.value, k1.exp2))
    ki = _mul((i1.value, i1.exp2), (k0.value, k0.exp2))
    total = _add(_add(ik, (-ki[0], ki[1])), _norm(1.0 / r, 0))
    return abs(math.ldexp(total[0], total[1])) * r


# ----------------------------------------------------------------------
# Provable product bounds (used for certified series tails).
# ----------------------------------------------------------------------

def log_ik_bound(mu: float, a: float, b: float) -> float:
    """log of a proven bound: I_mu(a) K_mu(b) <= (a/b)^mu / (2 mu).

    Ingredients: I_mu(x)/x^mu is increasing (ascending series has positive
    coefficients), so I_mu(a) <= (a/b)^mu I_mu(b); and Nicholson's formula
    I_mu(x) K_mu(x) = Integral_0^inf J_0(2x sinh t) e^{-2 mu t} dt gives
    I_mu(b) K_mu(b) <= 1/(2 mu).  Valid for all 0 < a <= b, mu > 0.
    """
    if not 0.0 < a <= b or mu <= 0.0:
        raise DomainError("log_ik_bound needs 0 < a <= b and mu > 0")
    return mu * math.log(a / b) - math.log(2.0 * mu)


def log_i_dr_k_bound(mu: float, a: float, b: float) -> float:
    """log of a proven bound: I'_mu(a) K_mu(b) <= (a/b)^mu (1/(2a) + a/b^2).

    From I'_mu = I_{mu+1} + (mu/a) I_mu: the second piece is bounded via
    log_ik_bound; the first via order-(mu+1) monotonicity plus the
    Wronskian I_mu K_{mu+1} + I_{mu+1} K_mu = 1/b, whose terms are all
    positive, so I_{mu+1}(b) K_mu(b) <= 1/b.
    """
    if not 0.0 < a <= b or mu <= 0.0:
        raise DomainError("log_i_dr_k_bound needs 0 < a <= b and mu > 0")
    return mu * math.log(a / b) + math.log(0.5 / a + a / (b * b))


def log_i_k_dr_bound(mu: float, a: float, b: float) -> float:
    """log of a proven bound: I_mu(a) |K'_mu(b)| <= (a/b)^mu / b.

    |K'_mu| = (K_{mu-1} + K_{mu+1})/2 <= K_{mu+1} since K is increasing in
    |order| and |mu-1| <= mu+1; then I_mu(b) K_{mu+1}(b) <= 1/b by the
    Wronskian as above.
    """
    if not 0.0 < a <= b or mu <= 0.0:
        raise DomainError("log_i_k_dr_bound needs 0 < a <= b and mu > 0")
    return mu * math.log(a / b) - math.log(b)


# ----------------------------------------------------------------------
# Uniform-bound verification report.
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class BoundFit:
    """Fit of one bound family: smallest admissible constant on a grid."""

    bound_id: str
    c_fit: float
    max_violation_ratio: float  # refined-grid C / base-grid C (stability)
    grid: str

    @property
    def passed(self) -> bool:
        return math.isfinite(self.c_fit) and self.max_violation_ratio <= 1.25


@dataclass(frozen=True)
class BoundReport:
    fits: tuple[BoundFit, ...]

    @property
    def passed(self) -> bool:
        return all(f.passed for f in self.fits)


def _log_model(bound_id: str, mu: float, r: float, rp: float = 0.0) -> float:
    """log of the model right-hand side for each bound family."""
    lg = math.lgamma
    if bound_id == "i-small-arg":  # I <= C 2^-mu r^mu / Gamma(mu+1/2)
        return -mu * _LN2 + mu * math.log(r) - lg(mu + 0.5)
    if bound_id == "i-large-arg":  # I <= C 2^-mu r^(mu-1) e^r / Gamma(mu+1/2)
        return -mu * _LN2 + (mu - 1.0) * math.log(r) + r - lg(mu + 0.5)
    if bound_id == "k-small-arg":  # K <= C 2^-mu r^-mu Gamma(2mu)/Gamma(mu+1/2)
        return -mu * _LN2 - mu * math.log(r) + lg(2.0 * mu) - lg(mu + 0.5)
    if bound_id == "k-large-arg":  # K <= C e^(-r/2) r^-mu 2^(2mu) Gamma(mu)
        return -0.5 * r - mu * math.log(r) + 2.0 * mu * _LN2 + lg(mu)
    if bound_id == "ik-far-product":
        s = r / rp
        if rp <= 1.0:
            return mu * math.log(s)
        if r <= 1.0:
            return mu * math.log(2.0 * s) - 0.5 * rp
        return mu * math.log(2.0 * s) - 0.25 * rp
    raise DomainError(f"unknown bound id {bound_id!r}")


def _geom(lo: float, hi: float, n: int) -> list[float]:
    if n == 1:
        return [lo]
    ratio = (hi / lo) ** (1.0 / (n - 1))
    return [lo * ratio**i for i in range(n)]


def _fit_single(bound_id: str, mus, rs) -> float:
    """Largest log-space ratio observed / model over the grid, exponentiated."""
    worst = -math.inf
    for mu in mus:
        for r in rs:
            if bound_id.startswith("i-"):
                val = bessel_i(mu, r)
            else:
                val = bessel_k(mu, r)
            worst = max(worst, val.log_abs - _log_model(bound_id, mu, r))
    return math.exp(worst)


def _fit_product(mus, rps) -> float:
    worst = -math.inf
    for mu in mus:
        for rp in rps:
            for ratio in (4.0, 8.0, 16.0):
                r = rp / ratio
                lhs = bessel_i(mu, r).log_abs + bessel_k(mu, rp).log_abs
                worst = max(worst, lhs - _log_model("ik-far-product", mu, r, rp))
    return math.exp(worst)


def _gamma_identity_residual(mus) -> float:
    """max relative residual of Gamma(2mu) = 2^(2mu-1)/sqrt(pi) Gamma(mu) Gamma(mu+1/2)."""
    worst = 0.0
    for mu in mus:
        lhs = math.lgamma(2.0 * mu)
        rhs = (2.0 * mu - 1.0) * _LN2 - 0.5 * math.log(math.pi) \
            + math.lgamma(mu) + math.lgamma(mu + 0.5)
        worst = max(worst, abs(math.expm1(rhs - lhs)))
    return worst


def check_uniform_bounds(mu_grid=None, r_grid=None) -> BoundReport:
    """Fit the smallest constant for each uniform bound family on a grid.

    Families (mu >= 1/2 throughout; each C is a grid supremum, refined on a
    doubled grid to report stability):

    * ``i-small-arg``:    I_mu(r)  <= C 2^-mu r^mu / Gamma(mu+1/2), r <= 1
    * ``i-large-arg``:    I_mu(r)  <= C 2^-mu r^(mu-1) e^r / Gamma(mu+1/2), r >= 1
    * ``k-small-arg``:    K_mu(r)  <= C 2^-mu r^-mu Gamma(2mu)/Gamma(mu+1/2), r <= 1
    * ``k-large-arg``:    K_mu(r)  <= C e^(-r/2) r^-mu 2^(2mu) Gamma(mu), r >= 1
    * ``ik-far-product``: I_mu(r) K_mu(r') <= C * three-branch model for r' >= 4r
    * ``gamma-duplication``: relative residual of the Gamma duplication
      identity (c_fit is the max residual; passes when < 1e-12).
    """
    mus = list(mu_grid) if mu_grid is not None else _geom(0.5, 50.0, 28)
    if any(m < 0.5 for m in mus):
        raise DomainError("bound checks require mu >= 1/2")
    small = list(r_grid) if r_grid is not None else _geom(1e-4, 1.0, 25)
    large = _geom(1.0, 300.0, 25)

    def refine(grid):
        out = []
        for a, b in zip(grid, grid[1:]):
            out += [a, math.sqrt(a * b)]
        out.append(grid[-1])
        return out

    fits = []
    for bound_id, rs in (
        ("i-small-arg", small),
        ("i-large-arg", large),
        ("k-small-arg", small),
        ("k-large-arg", large),
    ):
        base = _fit_single(bound_id, mus, rs)
        fine = _fit_single(bound_id, refine(mus), refine(rs))
        fits.append(BoundFit(bound_id, fine, fine / base,
                             f"mu[{mus[0]:g},{mus[-1]:g}]x{len(mus)} r[{rs[0]:g},{rs[-1]:g}]x{len(rs)}"))
    rps = _geom(0.05, 40.0, 25)
    base = _fit_product(mus, rps)
    fine = _fit_product(refine(mus), refine(rps))
    fits.append(BoundFit("ik-far-product", fine, fine / base,
                         f"mu[{mus[0]:g},{mus[-1]:g}]x{len(mus)} rp[{rps[0]:g},{rps[-1]:g}]x{len(rps)} ratios(4,8,16)"))
    resid = _gamma_identity_residual(mus + refine(mus))
    fits.append(BoundFit("gamma-duplication", resid,
                         1.0 if resid < 1e-12 else math.inf,
                         f"mu[{mus[0]:g},{mus[-1]:g}]x{len(mus)}"))
    return BoundReport(tuple(fits))


def bound_report_csv(report: BoundReport) -> str:
    lines = ["# conekit-schema v1", "bound_id,c_fit,max_violation_ratio,grid"]
    for f in report.fits:
        lines.append(f"{f.bound_id},{f.c_fit:.12g},{f.max_violation_ratio:.12g},{f.grid}")
    return "\n".join(lines) + "\n"
