"""Metric-cone geometry.

A cone point is a pair (r, y): a radius r > 0 and a point y on the
cross-section Y.  The cone metric distance between z = (r, y) and
z' = (r', y') is

    d(z, z')^2 = r^2 + r'^2 - 2 r r' cos(d_Y(y, y'))   if d_Y(y, y') <= pi,
    d(z, z')   = r + r'                                 otherwise,

where d_Y is the intrinsic cross-section distance.  Past separation pi the
minimizing path passes through the cone tip, hence the second branch.

Three cross-sections are provided: round spheres of any radius, flat tori
(products of circles), and an abstract one-coordinate "separation"
cross-section used by spectra loaded from files, where a point is simply a
real separation coordinate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError

__all__ = [
    "ConePoint",
    "CrossSection",
    "SphereCrossSection",
    "TorusCrossSection",
    "SeparationCrossSection",
    "ConeGeometry",
    "cone_distance",
    "diag_defining",
    "log_radial_grid",
]


@dataclass(frozen=True)
class ConePoint:
    """A point (r, y) of the cone: radius r > 0 and cross-section point y."""

    r: float
    y: object

    def __post_init__(self):
        r = float(self.r)
        if not math.isfinite(r) or r <= 0.0:
            raise DomainError(f"cone radius must be finite and > 0, got {self.r!r}")
        object.__setattr__(self, "r", r)


class CrossSection:
    """Interface every cross-section implements.

    Attributes
    ----------
    dim : int or None
        Intrinsic dimension, when known.  The cone built on a cross-section
        of dimension n has total dimension d = n + 1.
    volume : float or None
        Total Riemannian volume, when known.
    """

    dim: int | None = None
    volume: float | None = None

    def distance(self, y, yp) -> float:
        raise NotImplementedError

    def points_at_separation(self, s: float):
        """Return a concrete pair (y, y') at intrinsic distance s."""
        raise NotImplementedError

    def descriptor(self) -> str:
        raise NotImplementedError


class SphereCrossSection(CrossSection):
    """Round sphere of dimension ``dim`` and radius ``radius``.

    Points are ambient vectors in R^{dim+1} of length ``radius`` (validated
    to 1e-9 relative and renormalized before use).
    """

    def __init__(self, dim: int, radius: float = 1.0):
        if int(dim) != dim or dim < 1:
            raise DomainError(f"sphere dimension must be a positive integer, got {dim!r}")
        radius = float(radius)
        if not math.isfinite(radius) or radius <= 0.0:
            raise DomainError(f"sphere radius must be finite and > 0, got {radius!r}")
        self.dim = int(dim)
        self.radius = radius
        n = self.dim
        self.volume = radius**n * 2.0 * math.pi ** ((n + 1) / 2.0) / math.gamma((n + 1) / 2.0)

    def _unit(self, y) -> np.ndarray:
        v = np.asarray(y, dtype=float)
        if v.shape != (self.dim + 1,):
            raise DomainError(
                f"sphere point must be a vector of length {self.dim + 1}, got shape {v.shape}"
            )
        norm = float(np.linalg.norm(v))
        if norm == 0.0 or abs(norm - self.radius) > 1e-9 * self.radius:
            raise DomainError(
                f"sphere point must have length {self.radius} (got {norm})"
            )
        return v / norm

    def distance(self, y, yp) -> float:
        u, v = self._unit(y), self._unit(yp)
        c = float(np.dot(u, v))
        # Stable at both ends: use the rejection norm rather than arccos.
        perp = v - c * u
        angle = math.atan2(float(np.linalg.norm(perp)), c)
        return self.radius * angle

    def points_at_separation(self, s: float):
        u = float(s) / self.radius
        if not 0.0 <= u <= math.pi:
            raise DomainError(
                f"separation {s} outside [0, {math.pi * self.radius}] for this sphere"
            )
        y = np.zeros(self.dim + 1)
        y[0] = self.radius
        yp = np.zeros(self.dim + 1)
        yp[0] = math.cos(u) * self.radius
        yp[1] = math.sin(u) * self.radius
        return y, yp

    def descriptor(self) -> str:
        return f"sphere(dim={self.dim}, radius={self.radius:g})"


class TorusCrossSection(CrossSection):
    """Flat torus: product of circles of radii ``radii``.

    Points are angle vectors theta in R^len(radii); the metric is
    ds^2 = sum (a_i d theta_i)^2 with each angle taken mod 2 pi.
    """

    def __init__(self, radii: Sequence[float]):
        radii = tuple(float(a) for a in radii)
        if not radii or any(not math.isfinite(a) or a <= 0.0 for a in radii):
            raise DomainError(f"torus radii must be finite and > 0, got {radii!r}")
        self.radii = radii
        self.dim = len(radii)
        self.volume = math.prod(2.0 * math.pi * a for a in radii)

    def _angles(self, y) -> np.ndarray:
        v = np.asarray(y, dtype=float)
        if v.shape != (self.dim,):
            raise DomainError(
                f"torus point must be a vector of {self.dim} angles, got shape {v.shape}"
            )
        return v

    @staticmethod
    def _wrap(delta: np.ndarray) -> np.ndarray:
        """Reduce angle differences to [-pi, pi]."""
        return np.mod(delta + math.pi, 2.0 * math.pi) - math.pi

    def distance(self, y, yp) -> float:
        delta = self._wrap(self._angles(y) - self._angles(yp))
        return float(np.linalg.norm(np.asarray(self.radii) * delta))

    def points_at_separation(self, s: float):
        s = float(s)
        a1 = self.radii[0]
        if not 0.0 <= s <= math.pi * a1:
            raise DomainError(
                f"separation {s} outside [0, {math.pi * a1}] along the first circle"
            )
        y = np.zeros(self.dim)
        yp = np.zeros(self.dim)
        yp[0] = s / a1
        return y, yp

    def descriptor(self) -> str:
        return f"torus(radii={tuple(round(a, 12) for a in self.radii)})"


class SeparationCrossSection(CrossSection):
    """Abstract cross-section known only through a separation coordinate.

    Used by spectra loaded from files: a point is a real number and the
    distance between two points is |y - y'|.  Dimension and volume are
    unknown.
    """

    dim = None
    volume = None

    def distance(self, y, yp) -> float:
        d = abs(float(y) - float(yp))
        if not math.isfinite(d):
            raise DomainError("separation coordinates must be finite")
        return d

    def points_at_separation(self, s: float):
        s = float(s)
        if s < 0.0:
            raise DomainError(f"separation must be >= 0, got {s}")
        return 0.0, s

    def descriptor(self) -> str:
        return "separation"


@dataclass(frozen=True)
class ConeGeometry:
    """The cone over a given cross-section, of total dimension d >= 3."""

    d: int
    cross_section: CrossSection

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 3:
            raise DomainError(f"cone dimension d must be an integer >= 3, got {self.d!r}")
        object.__setattr__(self, "d", int(self.d))
        n = self.cross_section.dim
        if n is not None and n != self.d - 1:
            raise DomainError(
                f"cross-section dimension {n} inconsistent with cone dimension {self.d}"
            )

    def separation(self, y, yp) -> float:
        return self.cross_section.distance(y, yp)

    def distance(self, z: ConePoint, zp: ConePoint) -> float:
        return cone_distance(z.r, zp.r, self.cross_section.distance(z.y, zp.y))


def cone_distance(r: float, rp: float, d_y: float) -> float:
    """Metric distance on the cone between (r, y) and (r', y').

    ``d_y`` is the intrinsic cross-section distance between y and y'.
    For d_y <= pi the law of cosines in the spanned flat sector applies;
    past pi every minimizing path runs through the tip, giving r + r'.
    The two branches agree at d_y = pi.
    """
    r, rp, d_y = float(r), float(rp), float(d_y)
    if r <= 0.0 or rp <= 0.0:
        raise DomainError("cone_distance needs positive radii")
    if d_y < 0.0 or not math.isfinite(d_y):
        raise DomainError(f"cross-section distance must be finite and >= 0, got {d_y}")
    if d_y >= math.pi:
        return r + rp
    # Law of cosines, written as a sum of two nonnegative pieces so the
    # result stays accurate when r ~ r' and d_y ~ 0.
    s2 = (r - rp) ** 2 + 4.0 * r * rp * math.sin(0.5 * d_y) ** 2
    return math.sqrt(s2)


def _phi(x: float) -> float:
    """Smooth increasing cutoff: phi(x) = x for x <= 1/2, 1 for x >= 1.

    On [1/2, 1] a quintic bridge g(u) = u + 4u^3 - 7u^4 + 3u^5 in
    u = 2x - 1 joins the two branches with matching value, slope and
    curvature at both ends; g' = (1-u)(1 + u + 13u^2 - 15u^3) is strictly
    positive on [0, 1), so phi is strictly increasing below 1.
    """
    if x <= 0.5:
        return x
    if x >= 1.0:
        return 1.0
    u = 2.0 * x - 1.0
    g = u + u**3 * (4.0 - 7.0 * u + 3.0 * u * u)
    return 0.5 + 0.5 * g


def diag_defining(z: ConePoint, zp: ConePoint, geometry: ConeGeometry) -> float:
    """Diagonal-region defining function a(z, z') = d(z, z')^2 / phi(r')^2.

    Small values mean z is deep in the near-diagonal regime relative to the
    scale of z'; the gluing scale phi freezes at 1 once r' >= 1 so that far
    from the tip the plain squared distance rules.
    """
    dist = geometry.distance(z, zp)
    scale = _phi(zp.r)
    return (dist / scale) ** 2


def log_radial_grid(r_min: float, r_max: float, n: int) -> np.ndarray:
    """Logarithmically equispaced radii from r_min to r_max inclusive."""
    r_min, r_max = float(r_min), float(r_max)
    if not (0.0 < r_min < r_max) or not math.isfinite(r_max):
        raise DomainError(f"need 0 < r_min < r_max, got ({r_min}, {r_max})")
    if int(n) != n or n < 2:
        raise DomainError(f"grid size must be an integer >= 2, got {n!r}")
    return np.geomspace(r_min, r_max, int(n))
