"""Riesz transform kernel and L^p boundedness thresholds on metric cones.

The Riesz transform of H = Delta + V0/r^2 is realized through the
spectral identity

    T = grad H^{-1/2} = (2/pi) * integral_0^inf grad_z G_lambda dlambda,

evaluated here componentwise (radial, angular) by adaptive quadrature
over lambda with panel splits at the two natural scales 1/r and 1/r'.

The exact L^p boundedness interval of T is determined by the bottom of
the cross-sectional spectrum.  With mu0 = sqrt(lambda_0(V0) + (d-2)^2/4)
(and mu1 its analogue for the second mode when V0 == 0):

    general V0:   ( d / min(d/2 + 1 + mu0, d),  d / max(d/2 - mu0, 0) )
    V0 == 0:      ( 1,                          d / max(d/2 - mu1, 0) )

with d/0 read as infinity.  Both endpoints are excluded: boundedness
fails at p_lo and p_hi themselves.  For constant V0 = c the general
formula applies with mu0 = sqrt(c + (d-2)^2/4), and when c and d make
that a rational number the endpoints are returned as exact fractions.

Off-diagonal decay of the kernel is checked against the model bounds

    |T(z, z')| <= C (r/r')^{mu0 - d/2} r'^{-d}        (r <= r'/4)
    |T(z, z')| <= C (r'/r)^{mu0 - d/2 + 1} r^{-d}     (r' <= r/4)

whose exponents are exactly what the threshold formulas integrate; the
L^p check module turns them into the same interval by Schur tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.integrate import quad

from .config import DEFAULTS
from .errors import DomainError, PositivityError, UnsupportedError
from .geometry import ConePoint, cone_distance
from .resolvent import ResolventRequest, resolvent_gradient
from .spectrum import CrossSectionSpectrum, leading_modes

__all__ = [
    "PInterval",
    "threshold_interval",
    "threshold_interval_zero_v",
    "threshold_interval_constant",
    "L2Bound",
    "l2_bound_constant",
    "RieszKernelValue",
    "riesz_kernel",
    "OffdiagReport",
    "offdiag_bound_check",
]

_BASES = ("general-V", "zero-V", "constant-c")


@dataclass(frozen=True)
class PInterval:
    """Open interval (p_lo, p_hi) of L^p boundedness.

    Both endpoints are excluded.  ``basis`` records which threshold
    formula produced it.  When the endpoints are exactly rational the
    ``*_exact`` fields carry them as fractions (p_hi_exact is None when
    the upper endpoint is infinite or irrational).
    """

    p_lo: float
    p_hi: float
    basis: str
    p_lo_exact: Fraction | None = None
    p_hi_exact: Fraction | None = None

    def __post_init__(self):
        if self.basis not in _BASES:
            raise DomainError(f"basis must be one of {_BASES}, got {self.basis!r}")
        if not (1.0 <= self.p_lo < 2.0 <= self.p_hi):
            raise DomainError(
                f"threshold interval must satisfy 1 <= p_lo < 2 <= p_hi "
                f"(p_hi = 2 only in the critical case mu0 = 0), "
                f"got ({self.p_lo}, {self.p_hi})"
            )

    def contains(self, p: float) -> bool:
        """Open-interval membership: boundedness fails at the endpoints."""
        return self.p_lo < p < self.p_hi


def _interval_from_mu(d: int, mu: float, basis: str, mu_exact: Fraction | None = None):
    """Endpoints from one bottom-mode exponent; exact path when mu is rational."""
    if mu_exact is not None:
        half = Fraction(d, 2)
        lo_den = min(half + 1 + mu_exact, Fraction(d))
        p_lo = Fraction(d) / lo_den
        hi_den = half - mu_exact
        if hi_den <= 0:
            return PInterval(float(p_lo), math.inf, basis, p_lo, None)
        p_hi = Fraction(d) / hi_den
        return PInterval(float(p_lo), float(p_hi), basis, p_lo, p_hi)
    lo_den = min(0.5 * d + 1.0 + mu, float(d))
    p_lo = d / lo_den
    hi_den = 0.5 * d - mu
    p_hi = math.inf if hi_den <= 0.0 else d / hi_den
    return PInterval(p_lo, p_hi, basis)


def _validate_d(d) -> int:
    if int(d) != d or d < 3:
        raise DomainError(f"cone dimension d must be an integer >= 3, got {d!r}")
    return int(d)


def threshold_interval(d: int, mu0: float) -> PInterval:
    """Exact L^p interval of the Riesz transform for a general potential.

    ``mu0`` is the bottom exponent sqrt(lambda_0(L_Y)) of the shifted
    cross-sectional operator.  Operator positivity means mu0 > 0; the
    critical value mu0 = 0 is accepted as the continuous limit of the
    formula (the interval degenerates to upper endpoint 2) even though
    kernel evaluation is impossible there.
    """
    d = _validate_d(d)
    mu0 = float(mu0)
    if not math.isfinite(mu0) or mu0 < 0.0:
        raise PositivityError(f"bottom exponent mu0 must be >= 0, got {mu0!r}")
    return _interval_from_mu(d, mu0, "general-V")


def threshold_interval_zero_v(d: int, mu1: float) -> PInterval:
    """Exact L^p interval when V0 == 0: lower endpoint 1, upper set by mu1.

    ``mu1`` is the exponent of the *second* cross-sectional mode (the
    first is the constant eigenfunction with mu = d/2 - 1).
    """
    d = _validate_d(d)
    mu1 = float(mu1)
    if not math.isfinite(mu1) or mu1 <= 0.5 * d - 1.0:
        raise DomainError(
            f"second exponent mu1 must exceed d/2 - 1 = {0.5 * d - 1.0}, got {mu1!r}"
        )
    hi_den = 0.5 * d - mu1
    p_hi = math.inf if hi_den <= 0.0 else d / hi_den
    return PInterval(1.0, p_hi, "zero-V", Fraction(1), None)


def _exact_mu(d: int, c) -> Fraction | None:
    """sqrt(c + (d-2)^2/4) as an exact Fraction, when it is one."""
    if isinstance(c, float):
        if not c.is_integer():
            return None
        c = int(c)
    try:
        c_frac = Fraction(c)
    except (TypeError, ValueError):
        return None
    val = c_frac + Fraction((d - 2) ** 2, 4)
    if val < 0:
        return None
    num, den = val.numerator, val.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


def threshold_interval_constant(d: int, c) -> PInterval:
    """Exact L^p interval for constant potential V0 = c (c != 0).

    Applies the general formula at mu0 = sqrt(c + (d-2)^2/4); when that
    is rational the endpoints come out as exact fractions.  c = 0 is the
    zero-potential case, which obeys the better zero-V formula: use
    :func:`threshold_interval_zero_v` for it.
    """
    d = _validate_d(d)
    c_float = float(c)
    if c_float == 0.0:
        raise DomainError(
            "c = 0 is the zero-potential case; use threshold_interval_zero_v"
        )
    shifted = c_float + 0.25 * (d - 2) ** 2
    if shifted < 0.0:
        raise PositivityError(
            f"c + (d-2)^2/4 = {shifted} must be >= 0 (operator positivity; "
            f"= 0 is the critical case)"
        )
    return _interval_from_mu(d, math.sqrt(shifted), "constant-c", _exact_mu(d, c))


@dataclass(frozen=True)
class L2Bound:
    """Operator bound ||grad H^{-1/2}||_{L^2} <= bound via Hardy absorption.

    For constant V0 = c < 0, epsilon is the largest number with
    c/(1 - epsilon) + (d-2)^2/4 >= 0, i.e. epsilon = mu0^2 / (mu0^2 - c),
    and the bound is epsilon^{-1/2}.  For c >= 0 no absorption is needed
    and the bound is 1.
    """

    epsilon: float
    bound: float
    c: float
    mu0: float


def l2_bound_constant(spectrum: CrossSectionSpectrum, epsilon_search: bool = False) -> L2Bound:
    """L^2 norm bound of the Riesz transform for a constant potential.

    With ``epsilon_search`` the feasibility condition is solved by
    bisection instead of the closed form (the two agree to roundoff);
    spectra without a recorded constant potential are rejected.
    """
    if spectrum.v0_constant is None:
        raise UnsupportedError(
            "L^2 bound requires a constant potential; this spectrum does not record one"
        )
    c = float(spectrum.v0_constant)
    d = spectrum.d
    q = 0.25 * (d - 2) ** 2
    mu0_sq = q + c
    if mu0_sq <= 0.0:
        raise PositivityError(f"c + (d-2)^2/4 = {mu0_sq} must be > 0")
    mu0 = math.sqrt(mu0_sq)
    if c >= 0.0:
        return L2Bound(epsilon=1.0, bound=1.0, c=c, mu0=mu0)
    if epsilon_search:
        # Largest eps in (0, 1) with c/(1-eps) + q >= 0, by bisection.
        lo, hi = 0.0, 1.0 - 1e-15
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if c / (1.0 - mid) + q >= 0.0:
                lo = mid
            else:
                hi = mid
        eps = lo
    else:
        eps = mu0_sq / (mu0_sq - c)
    return L2Bound(epsilon=eps, bound=eps ** -0.5, c=c, mu0=mu0)


@dataclass(frozen=True)
class RieszKernelValue:
    """One Riesz kernel evaluation T(z, z') = (2/pi) int grad_z G_lambda.

    ``d_r`` and ``angular`` are the two gradient components (see
    :class:`conekit.resolvent.GradientValue`); ``quad_error_est`` sums
    the quadrature error estimates of both components plus the
    truncation estimate at lambda_max; ``lambda_splits`` records the
    panel boundaries actually used; ``n_evals`` counts integrand calls.
    """

    d_r: float
    angular: float
    quad_error_est: float
    lambda_splits: tuple
    n_evals: int

    @property
    def magnitude(self) -> float:
        return math.hypot(self.d_r, self.angular)


def riesz_kernel(
    spectrum: CrossSectionSpectrum,
    z: ConePoint,
    zp: ConePoint,
    rel_tol: float = DEFAULTS.riesz_rel_tol,
) -> RieszKernelValue:
    """Evaluate the Riesz transform kernel at (z, z'), componentwise.

    The lambda integral is truncated where the integrand's guaranteed
    exponential decay e^{-lambda dist(z,z')} reaches rel_tol, padded by
    :data:`conekit.config.DEFAULTS.lambda_max_pad`; the neglected tail
    is estimated by |integrand(lambda_max)| / dist and included in
    ``quad_error_est``.
    """
    if not (0.0 < rel_tol <= 0.1):
        raise DomainError(f"rel_tol must lie in (0, 0.1], got {rel_tol!r}")
    cs = spectrum.cross_section
    if cs is None:
        raise DomainError("spectrum carries no cross-section; riesz kernel needs one")
    gamma = cs.distance(z.y, zp.y)
    dist = cone_distance(z.r, zp.r, gamma)
    if dist == 0.0:
        raise DomainError("riesz kernel is singular on the diagonal z = z'")

    lam_max = DEFAULTS.lambda_max_pad * math.log(1.0 / rel_tol) / dist
    grad_tol = min(DEFAULTS.kernel_rel_tol, 0.1 * rel_tol)
    b_hi, b_lo = 1.0 / min(z.r, zp.r), 1.0 / max(z.r, zp.r)
    edges = [0.0] + sorted(b for b in {b_lo, b_hi} if 0.0 < b < lam_max) + [lam_max]

    counter = [0]
    worst_rel_tail = [0.0]

    def grad_at(lam: float):
        counter[0] += 1
        req = ResolventRequest(spectrum, z, zp, lam=lam, rel_tol=grad_tol)
        g = resolvent_gradient(req)
        # Track the truncation the series actually achieved, not the one
        # requested: shallow mode tables near the diagonal may fall short.
        for comp in (g.d_r, g.angular):
            if comp.value != 0.0 and comp.rel_tail > worst_rel_tail[0]:
                worst_rel_tail[0] = comp.rel_tail
        return g.d_r.float_value(), g.angular.float_value()

    total = [0.0, 0.0]
    err = 0.0
    for comp in (0, 1):
        if comp == 1 and gamma == 0.0:
            continue  # angular component vanishes identically on the axis
        f = lambda lam, _c=comp: grad_at(lam)[_c]
        for a, b in zip(edges, edges[1:]):
            res = quad(f, a, b, epsabs=0.0, epsrel=0.3 * rel_tol, limit=100,
                       full_output=1)
            total[comp] += res[0]
            err += abs(res[1])
    # Truncation beyond lambda_max: the integrand decays like a low-degree
    # polynomial times e^{-lambda dist}, so twice the pure-exponential tail
    # integral |f(lambda_max)| / dist covers it.  The series truncation of
    # the integrand itself enters proportionally to the accumulated value,
    # at the worst relative tail any evaluation actually reported.
    tail_r, tail_a = grad_at(lam_max)
    err += 2.0 * (abs(tail_r) + abs(tail_a)) / dist
    err += worst_rel_tail[0] * (abs(total[0]) + abs(total[1]))

    scale = 2.0 / math.pi
    return RieszKernelValue(
        d_r=scale * total[0],
        angular=scale * total[1],
        quad_error_est=scale * err,
        lambda_splits=tuple(edges),
        n_evals=counter[0],
    )


_REGIONS = ("far-right", "far-left")
_MODELS = ("general", "zero-v-leading")


@dataclass(frozen=True)
class OffdiagReport:
    """Riesz kernel magnitudes against an off-diagonal model bound.

    ``ratios[i] = magnitudes[i] / model_values[i]``; the check passes
    when the ratios stay bounded (``c_sup`` finite) and stable under
    grid refinement.  ``region`` says which side of the diagonal was
    probed and ``model`` which envelope was used.
    """

    region: str
    model: str
    rprimes: tuple
    r_values: tuple
    magnitudes: tuple
    model_values: tuple
    ratios: tuple

    @property
    def c_sup(self) -> float:
        return max(self.ratios)

    @property
    def c_min(self) -> float:
        return min(self.ratios)


def offdiag_bound_check(
    spectrum: CrossSectionSpectrum,
    region: str = "far-right",
    model: str = "general",
    ratio: float = 0.125,
    rprimes=None,
    separation: float = 0.7,
    rel_tol: float = 1e-4,
) -> OffdiagReport:
    """Probe the Riesz kernel against its off-diagonal model envelope.

    ``far-right`` walks r' over a grid with r = ratio * r' (kernel point
    far inside); ``far-left`` mirrors it with r = r' / ratio.  The
    ``zero-v-leading`` model applies to the bottom-mode subkernel of a
    zero-potential cone, whose leading term cancels in the gradient and
    improves the far-right envelope to r * r'^{-1-d}.
    """
    if region not in _REGIONS:
        raise DomainError(f"region must be one of {_REGIONS}, got {region!r}")
    if model not in _MODELS:
        raise DomainError(f"model must be one of {_MODELS}, got {model!r}")
    if not (0.0 < ratio <= 0.25):
        raise DomainError(f"ratio must lie in (0, 1/4] for the off-diagonal regime, got {ratio!r}")
    cs = spectrum.cross_section
    if cs is None:
        raise DomainError("spectrum carries no cross-section")
    if rprimes is None:
        rprimes = np.geomspace(1.0, 8.0, 7)
    rprimes = tuple(float(v) for v in rprimes)
    d, mu0 = spectrum.d, spectrum.mu0

    if model == "zero-v-leading":
        if region != "far-right":
            raise DomainError("the zero-v-leading model applies to the far-right region only")
        if abs(mu0 - (0.5 * d - 1.0)) > 1e-12:
            raise DomainError(
                "the zero-v-leading model needs the constant bottom mode mu0 = d/2 - 1 "
                f"(zero potential); this spectrum has mu0 = {mu0}"
            )
        spectrum = leading_modes(spectrum, 1)

    y, yp = cs.points_at_separation(separation)
    r_values, mags, models = [], [], []
    for rp_val in rprimes:
        if region == "far-right":
            r_val = ratio * rp_val
            z, zp_ = ConePoint(r_val, y), ConePoint(rp_val, yp)
            if model == "zero-v-leading":
                env = r_val * rp_val ** (-1.0 - d)
            else:
                env = (r_val / rp_val) ** (mu0 - 0.5 * d) * rp_val ** (-float(d))
        else:
            r_val = rp_val / ratio
            z, zp_ = ConePoint(r_val, y), ConePoint(rp_val, yp)
            env = (rp_val / r_val) ** (mu0 - 0.5 * d + 1.0) * r_val ** (-float(d))
        kv = riesz_kernel(spectrum, z, zp_, rel_tol=rel_tol)
        r_values.append(r_val)
        mags.append(kv.magnitude)
        models.append(env)
    ratios = tuple(m / e for m, e in zip(mags, models))
    return OffdiagReport(
        region=region,
        model=model,
        rprimes=rprimes,
        r_values=tuple(r_values),
        magnitudes=tuple(mags),
        model_values=tuple(models),
        ratios=ratios,
    )
