"""Self-contained verification suites over closed-form references.

Each suite runs a family of checks whose expected values come from
independent mathematics (flat-space closed forms, generating functions,
exact Schur integrals), not from this package's own machinery, and
returns one :class:`CheckResult` per check.  The command-line ``verify``
subcommand prints one PASS/FAIL line per result.

Suites
------
``euclid``
    The d = 3, V0 = 0 cone is flat R^3:  the resolvent kernel must match
    e^{-lambda R}/(4 pi R), the Riesz kernel -grad R/(pi^2 R^3), and the
    indicial kernel the Legendre generating function.
``bessel``
    Uniform bound-family fits, Wronskian residuals, half-integer closed
    forms.
``compatibility``
    Zero-front limits against the indicial kernel, with convergence
    rates min(2, 2 mu0).
``boundary``
    Fitted decay exponents toward each boundary face.
``offdiag``
    Riesz kernel magnitudes against the off-diagonal models, stable
    under grid refinement.
``schur``
    Exact Schur norms, duality, and the model-interval identity.
``thresholds``
    Threshold spot values, ordering relations in the sign of c, and
    monotonicity/saturation in mu0.
``all``
    Every suite above.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass

import numpy as np

from .bessel import bessel_i, bessel_k, check_uniform_bounds, wronskian_residual
from .errors import DomainError
from .geometry import ConePoint, cone_distance
from .lpcheck import HomogeneousKernelSpec, riesz_model_intervals, schur_norm
from .resolvent import (
    ResolventRequest,
    boundary_order_probe,
    indicial_kernel,
    resolvent_kernel,
    zf_compatibility_check,
)
from .riesz import (
    offdiag_bound_check,
    riesz_kernel,
    threshold_interval,
    threshold_interval_constant,
    threshold_interval_zero_v,
)
from .spectrum import sphere_spectrum

__all__ = ["CheckResult", "SuiteReport", "SUITES", "run_suite"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    elapsed: float


@dataclass(frozen=True)
class SuiteReport:
    suite: str
    results: tuple

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)


def _timed(name, fn):
    t0 = time.perf_counter()
    try:
        passed, detail = fn()
    except Exception as exc:  # a crashed check is a failed check
        return CheckResult(name, False, f"raised {type(exc).__name__}: {exc}", time.perf_counter() - t0)
    return CheckResult(name, passed, detail, time.perf_counter() - t0)


# ----------------------------------------------------------------------
# euclid: flat R^3 closed forms
# ----------------------------------------------------------------------

def _suite_euclid(seed: int = 1234):
    spec = sphere_spectrum(3)
    cs = spec.cross_section

    def kernel_points():
        rng = random.Random(seed)
        worst = 0.0
        n_cert = 0
        for _ in range(50):
            rp = 10.0 ** rng.uniform(-1.5, 1.5)
            s = 10.0 ** rng.uniform(-3, math.log10(0.25))
            gam = rng.uniform(0.1, 3.0)
            lam = 10.0 ** rng.uniform(-0.5, 0.5)
            y, yp = cs.points_at_separation(gam)
            kv = resolvent_kernel(
                ResolventRequest(spec, ConePoint(s * rp, y), ConePoint(rp, yp),
                                 lam=lam, rel_tol=1e-8)
            )
            n_cert += kv.certified
            big_r = cone_distance(s * rp, rp, gam)
            want = math.exp(-lam * big_r) / (4.0 * math.pi * big_r)
            worst = max(worst, abs(kv.float_value() - want) / want)
        ok = worst < 1e-6 and n_cert == 50
        return ok, f"50 certified points vs e^-lR/4piR: worst rel err {worst:.2e}, certified {n_cert}/50"

    def riesz_points():
        pts = [(0.2, 1.0, 1.0), (0.5, 4.0, 0.4), (2.0, 0.3, 2.2), (0.05, 1.0, 2.8), (1.0, 6.0, 0.9)]
        worst = 0.0
        for r, rp, gam in pts:
            y, yp = cs.points_at_separation(gam)
            kv = riesz_kernel(spec, ConePoint(r, y), ConePoint(rp, yp), rel_tol=1e-6)
            big_r = cone_distance(r, rp, gam)
            want_dr = -((r - rp * math.cos(gam)) / big_r) / (math.pi ** 2 * big_r ** 3)
            want_ang = -(rp * math.sin(gam) / big_r) / (math.pi ** 2 * big_r ** 3)
            mag = math.hypot(want_dr, want_ang)
            worst = max(worst, abs(kv.d_r - want_dr) / mag, abs(kv.angular - want_ang) / mag)
        return worst < 1e-4, f"5 points vs -grad R/(pi^2 R^3): worst rel err {worst:.2e}"

    def indicial_legendre():
        # t = 0.9 needs a mode table far past the default cutoff: the
        # neglected remainder is of order t^mu_cutoff.
        deep = sphere_spectrum(3, mu_cutoff=260.0)
        worst = 0.0
        for t in (0.1, 0.5, 0.9):
            for gam in (0.3, 1.2, 2.9):
                y, yp = cs.points_at_separation(gam)
                got = indicial_kernel(deep, t, y, yp)
                want = math.sqrt(t) / (4.0 * math.pi * math.sqrt(1.0 - 2.0 * t * math.cos(gam) + t * t))
                worst = max(worst, abs(got - want) / want)
        return worst < 1e-9, f"indicial vs Legendre generating function: worst rel err {worst:.2e}"

    return [
        _timed("euclid.resolvent-yukawa", kernel_points),
        _timed("euclid.riesz-closed-form", riesz_points),
        _timed("euclid.indicial-legendre", indicial_legendre),
    ]


# ----------------------------------------------------------------------
# bessel: bound families, Wronskian, half-integer forms
# ----------------------------------------------------------------------

def _suite_bessel(seed: int = 1234):
    def bounds():
        rep = check_uniform_bounds()
        worst = max(f.max_violation_ratio for f in rep.fits)
        cs = ", ".join(f"{f.bound_id}={f.c_fit:.3g}" for f in rep.fits)
        return rep.passed, f"5 bound families fit with finite constants ({cs}); worst refine ratio {worst:.3f}"

    def wronskian():
        rng = random.Random(seed)
        worst = 0.0
        for _ in range(1000):
            nu = 10.0 ** rng.uniform(-1, math.log10(150))
            r = 10.0 ** rng.uniform(-5, 2.5)
            worst = max(worst, wronskian_residual(nu, r))
        return worst < 1e-10, f"Wronskian residual at 1000 points: worst {worst:.2e}"

    def half_integer():
        worst = 0.0
        for r in (0.3, 1.0, 4.7, 20.0):
            i_want = math.sqrt(2.0 / (math.pi * r)) * math.sinh(r)
            k_want = math.sqrt(math.pi / (2.0 * r)) * math.exp(-r)
            worst = max(
                worst,
                abs(bessel_i(0.5, r).float_value() - i_want) / i_want,
                abs(bessel_k(0.5, r).float_value() - k_want) / k_want,
            )
        return worst < 1e-12, f"half-integer closed forms: worst rel err {worst:.2e}"

    return [
        _timed("bessel.uniform-bounds", bounds),
        _timed("bessel.wronskian", wronskian),
        _timed("bessel.half-integer", half_integer),
    ]


# ----------------------------------------------------------------------
# compatibility: zero-front limits vs the indicial kernel
# ----------------------------------------------------------------------

def _suite_compatibility(seed: int = 1234):
    results = []
    for c in (0.0, -0.24, 1.0):
        def check(c=c):
            spec = sphere_spectrum(3, c=c)
            y, yp = spec.cross_section.points_at_separation(1.0)
            rep = zf_compatibility_check(spec, 0.2, y, yp)
            want_rate = min(2.0, 2.0 * spec.mu0)
            ok = abs(rep.rate - want_rate) <= 0.15
            return ok, (
                f"rate {rep.rate:.3f} vs min(2, 2 mu0) = {want_rate:.3f}; "
                f"|ratio-1| at r'=1e-3: {rep.final_deviation:.2e}"
            )
        results.append(_timed(f"compatibility.rate[c={c}]", check))
    return results


# ----------------------------------------------------------------------
# boundary: decay exponents toward each face
# ----------------------------------------------------------------------

def _suite_boundary(seed: int = 1234):
    results = []
    for c in (0.0, -0.24, 1.0):
        def check(c=c):
            spec = sphere_spectrum(3, c=c)
            zf = boundary_order_probe(spec, "zf")
            lbz = boundary_order_probe(spec, "lbz")
            rbz = boundary_order_probe(spec, "rbz")
            want_zf, want_b = 2.0 - 3.0, 1.0 - 1.5 + spec.mu0
            ok = (
                abs(zf - want_zf) <= 0.05
                and abs(lbz - want_b) <= 0.05
                and abs(rbz - want_b) <= 0.05
            )
            return ok, (
                f"zf {zf:.4f} (want {want_zf}); lbz {lbz:.4f}, rbz {rbz:.4f} "
                f"(want {want_b:.4f})"
            )
        results.append(_timed(f"boundary.faces[c={c}]", check))

    def infinity():
        spec = sphere_spectrum(3)
        sl = boundary_order_probe(spec, "rbi")
        return sl < -20.0, f"rbi slope {sl:.1f} (exponential decay, want < -20)"

    results.append(_timed("boundary.rbi", infinity))
    return results


# ----------------------------------------------------------------------
# offdiag: Riesz kernel vs model envelopes
# ----------------------------------------------------------------------

def _suite_offdiag(seed: int = 1234):
    def run(region, model="general", c=0.0):
        spec = sphere_spectrum(3, c=c)
        coarse = offdiag_bound_check(spec, region, model=model)
        fine = offdiag_bound_check(
            spec, region, model=model, rprimes=np.geomspace(1.0, 8.0, 13)
        )
        drift = abs(fine.c_sup - coarse.c_sup) / coarse.c_sup
        ok = math.isfinite(coarse.c_sup) and drift <= 0.10
        return ok, f"c_sup {coarse.c_sup:.4g}, refine drift {drift:.2%}"

    return [
        _timed("offdiag.far-right", lambda: run("far-right")),
        _timed("offdiag.far-left", lambda: run("far-left")),
        _timed("offdiag.zero-v-leading", lambda: run("far-right", model="zero-v-leading")),
    ]


# ----------------------------------------------------------------------
# schur: exact norms and the model-interval identity
# ----------------------------------------------------------------------

def _suite_schur(seed: int = 1234):
    def spot():
        n = schur_norm(HomogeneousKernelSpec(3, 1.0, "upper"), 2.0)
        return math.isclose(n, 2.0, rel_tol=1e-14), f"d=3 alpha=1 upper at p=2: norm {n} (exact 2)"

    def duality():
        rng = random.Random(seed)
        worst = 0.0
        for _ in range(50):
            d = rng.choice((3, 4, 5, 7))
            alpha = rng.uniform(-1.0, d + 1.0)
            p = rng.uniform(1.05, 20.0)
            up = schur_norm(HomogeneousKernelSpec(d, alpha, "upper"), p)
            lo = schur_norm(HomogeneousKernelSpec(d, d - alpha, "lower"), p / (p - 1.0))
            if math.isinf(up) != math.isinf(lo):
                return False, f"duality broken at d={d} alpha={alpha} p={p}"
            if math.isfinite(up):
                worst = max(worst, abs(up - lo) / up)
        return worst < 1e-10, f"adjoint symmetry over 50 random kernels: worst rel dev {worst:.2e}"

    def identity():
        rng = random.Random(seed + 1)
        for _ in range(100):
            d = rng.choice((3, 4, 5, 6, 9))
            mu0 = rng.uniform(0.0, d)
            if riesz_model_intervals(d, mu0) != threshold_interval(d, mu0):
                return False, f"mismatch at d={d} mu0={mu0}"
        return True, "model-implied intervals == threshold intervals at 100 random (d, mu0)"

    return [
        _timed("schur.spot-norm", spot),
        _timed("schur.duality", duality),
        _timed("schur.model-interval-identity", identity),
    ]


# ----------------------------------------------------------------------
# thresholds: spot values, sign ordering, monotonicity
# ----------------------------------------------------------------------

def _suite_thresholds(seed: int = 1234):
    def spots():
        a = threshold_interval_constant(4, -1)
        b = threshold_interval_zero_v(3, 1.5)
        c = threshold_interval_constant(3, -0.24)
        ok = (
            math.isclose(a.p_lo, 4.0 / 3.0) and a.p_hi == 2.0
            and b.p_lo == 1.0 and b.p_hi == math.inf
            and math.isclose(c.p_lo, 3.0 / 2.6) and math.isclose(c.p_hi, 3.0 / 1.4)
        )
        return ok, (
            f"(4,-1)->({a.p_lo:.6g},{a.p_hi:.6g}); zero-V d=3->(1,inf); "
            f"(3,-0.24)->({c.p_lo:.6g},{c.p_hi:.6g})"
        )

    def ordering():
        for d in (3, 4, 5, 8):
            q = 0.25 * (d - 2) ** 2
            for c in np.linspace(-0.95 * q, -0.05 * q, 7):
                iv = threshold_interval_constant(d, float(c))
                if not (1.0 < iv.p_lo < 2.0 < iv.p_hi < d):
                    return False, f"c<0 ordering broken at d={d} c={c}: ({iv.p_lo}, {iv.p_hi})"
            for c in (0.3, 1.0, 4.0):
                iv = threshold_interval_constant(d, c)
                if not (iv.p_lo == 1.0 and iv.p_hi > d):
                    return False, f"c>0 ordering broken at d={d} c={c}: ({iv.p_lo}, {iv.p_hi})"
        return True, "c<0: 1<p_lo<2<p_hi<d; c>0: p_lo=1, p_hi>d (d in {3,4,5,8})"

    def monotone():
        d = 5
        mus = np.linspace(0.0, 0.5 * d, 41)
        ivs = [threshold_interval(d, float(m)) for m in mus]
        los = [iv.p_lo for iv in ivs]
        his = [iv.p_hi for iv in ivs]
        if any(b > a for a, b in zip(los, los[1:])):
            return False, "p_lo not non-increasing in mu0"
        if any(b < a for a, b in zip(his, his[1:])):
            return False, "p_hi not non-decreasing in mu0"
        sat = threshold_interval(d, 0.5 * d - 1.0)
        if sat.p_lo != 1.0:
            return False, f"p_lo saturation at mu0 = d/2-1 gives {sat.p_lo}"
        if threshold_interval(d, 0.5 * d).p_hi != math.inf:
            return False, "p_hi not infinite at mu0 = d/2"
        return True, "monotone endpoints; p_lo saturates to 1 exactly at mu0 = d/2 - 1"

    return [
        _timed("thresholds.spot-values", spots),
        _timed("thresholds.sign-ordering", ordering),
        _timed("thresholds.monotonicity", monotone),
    ]


SUITES = {
    "euclid": _suite_euclid,
    "bessel": _suite_bessel,
    "compatibility": _suite_compatibility,
    "boundary": _suite_boundary,
    "offdiag": _suite_offdiag,
    "schur": _suite_schur,
    "thresholds": _suite_thresholds,
}


def run_suite(name: str, seed: int = 1234) -> SuiteReport:
    """Run one named suite (or "all") and collect its check results."""
    if name == "all":
        results = []
        for key in SUITES:
            results.extend(SUITES[key](seed=seed))
        return SuiteReport("all", tuple(results))
    if name not in SUITES:
        raise DomainError(f"unknown suite {name!r}; choose from {('all', *SUITES)}")
    return SuiteReport(name, tuple(SUITES[name](seed=seed)))
