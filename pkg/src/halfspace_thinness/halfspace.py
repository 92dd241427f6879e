"""Half-space geometry and two-sided Green / Martin kernel bounds.

Points of ``H = {x_d > 0}`` are :class:`HPoint`; boundary points are
:class:`BoundaryPoint`; ``INFINITY`` stands for the point at infinity of the
Martin boundary.  Comparability constants are plain parameters: the
existence-only constants of the two-sided estimates are never made explicit,
so callers pass the multiplicative slack they want and regression baselines
record what was observed.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DomainError, PreconditionError

# comparability window radius
R = 1.0


class RangeWarning(UserWarning):
    """Arguments lie outside the window where the two-sided estimate is stated."""


@dataclass(frozen=True)
class HPoint:
    x_tilde: tuple
    x_d: float

    def __post_init__(self):
        object.__setattr__(self, "x_tilde", tuple(float(v) for v in np.atleast_1d(self.x_tilde)))
        object.__setattr__(self, "x_d", float(self.x_d))
        if not self.x_d > 0:
            raise DomainError("HPoint requires x_d > 0")

    @classmethod
    def from_array(cls, x):
        x = np.asarray(x, dtype=float)
        return cls(tuple(x[:-1]), float(x[-1]))

    @property
    def dimension(self):
        return len(self.x_tilde) + 1

    @property
    def delta(self):
        """Distance to the boundary of ``H``."""
        return self.x_d

    def as_array(self):
        return np.array(self.x_tilde + (self.x_d,))


@dataclass(frozen=True)
class BoundaryPoint:
    z_tilde: tuple

    def __post_init__(self):
        object.__setattr__(self, "z_tilde", tuple(float(v) for v in np.atleast_1d(self.z_tilde)))

    @property
    def dimension(self):
        return len(self.z_tilde) + 1

    def as_array(self):
        return np.array(self.z_tilde + (0.0,))


class _Infinity:
    def __repr__(self):
        return "INFINITY"


INFINITY = _Infinity()


def origin(d):
    return BoundaryPoint((0.0,) * (d - 1))


def x0(d):
    """Normalisation point ``(0, ..., 0, 1)`` of the Martin kernel."""
    return HPoint((0.0,) * (d - 1), 1.0)


@dataclass(frozen=True)
class KernelBounds:
    center: float
    comparability_constant: float

    def __post_init__(self):
        if not self.comparability_constant >= 1:
            raise DomainError("comparability constant must be >= 1")

    @property
    def lower(self):
        return self.center / self.comparability_constant

    @property
    def upper(self):
        return self.center * self.comparability_constant

    def contains(self, value):
        return self.lower <= value <= self.upper


def _same_dim(*pts):
    dims = {p.dimension for p in pts}
    if len(dims) != 1:
        raise DomainError("points have different dimensions")
    return dims.pop()


def green_halfspace_bounds(spec, x, y, c, q=kernels.DEFAULT_QUAD):
    """Two-sided bounds for the killed Green function ``G^H(x, y)``.

    The center value is
    ``(1 ^ V(x_d)/V(|x-y|)) (1 ^ V(y_d)/V(|x-y|)) G(|x-y|)`` with the
    renewal surrogate for ``V``.  Outside ``|x-y| < R`` or
    ``min(x_d, y_d) < R`` a :class:`RangeWarning` is issued.
    """
    d = _same_dim(x, y)
    if d != spec.dimension:
        raise DomainError("point dimension does not match the process")
    dist = float(np.linalg.norm(x.as_array() - y.as_array()))
    if dist == 0.0:
        raise DomainError("green_halfspace_bounds requires x != y")
    if not (dist < R and min(x.delta, y.delta) < R):
        warnings.warn("points outside the comparability window", RangeWarning, stacklevel=2)
    v = kernels.renewal_surrogate(spec, np.array([x.delta, y.delta, dist]))
    fx = min(1.0, v[0] / v[2])
    fy = min(1.0, v[1] / v[2])
    g, _ = kernels.green_radial(spec, dist, q)
    # product in a fixed order keeps the result symmetric bit-for-bit
    lo_f, hi_f = sorted((fx, fy))
    return KernelBounds(lo_f * hi_f * g, float(c))


def martin_center(spec, x, z):
    """``V(x_d) |x - z|^-d (1 + |z|^2)^(d/2)``, the Martin kernel profile."""
    d = _same_dim(x, z)
    diff = x.as_array() - z.as_array()
    dist = float(np.linalg.norm(diff))
    if dist == 0.0 or not np.isfinite(dist):
        raise DomainError("x and z must be distinct finite points")
    z2 = float(np.dot(z.z_tilde, z.z_tilde))
    return kernels.renewal_surrogate(spec, x.delta) * dist ** -d * (1.0 + z2) ** (d / 2)


def martin_kernel_bounds(spec, x, z, c):
    """Two-sided bounds for ``M^H(x, z)`` around :func:`martin_center`."""
    if _same_dim(x, z) != spec.dimension:
        raise DomainError("point dimension does not match the process")
    z_norm = math.sqrt(float(np.dot(z.z_tilde, z.z_tilde)))
    dist = float(np.linalg.norm(x.as_array() - z.as_array()))
    if not (z_norm < R and dist < R / 2):
        warnings.warn("points outside the comparability window", RangeWarning, stacklevel=2)
    return KernelBounds(martin_center(spec, x, z), float(c))


def stable_martin_kernel(alpha, d, x, z):
    """Explicit Martin kernel of the killed isotropic alpha-stable process.

    ``alpha = 2`` gives the Brownian kernel.  ``z`` may be :data:`INFINITY`.
    """
    if not 0 < alpha <= 2:
        raise DomainError("alpha out of range (0,2]")
    if not isinstance(x, HPoint):
        raise DomainError("x must be a point of H")
    if x.dimension != d:
        raise DomainError("x has the wrong dimension")
    if z is INFINITY:
        return x.delta ** (alpha / 2)
    if z.dimension != d:
        raise DomainError("z has the wrong dimension")
    dist = float(np.linalg.norm(x.as_array() - z.as_array()))
    z2 = float(np.dot(z.z_tilde, z.z_tilde))
    return x.delta ** (alpha / 2) * dist ** -d * (1.0 + z2) ** (d / 2)


@dataclass(frozen=True)
class BhpReport:
    max_ratio: float
    bound: float
    n_samples: int

    @property
    def passed(self):
        return self.max_ratio <= self.bound


def bhp_ratio_check(spec, h_samples, c):
    """Boundary Harnack ratio check on samples ``[(HPoint, h(x)), ...]``.

    The largest pairwise ratio of ``h(x) / V(x_d)`` equals the ratio of the
    extreme normalised values, so no pairwise loop is needed.
    """
    if len(h_samples) == 0:
        raise PreconditionError("need at least one sample")
    deltas = np.array([p.delta for p, _ in h_samples])
    vals = np.array([float(h) for _, h in h_samples])
    if np.any(vals <= 0):
        raise DomainError("sample values must be positive")
    normed = vals / kernels.renewal_surrogate(spec, deltas)
    return BhpReport(float(normed.max() / normed.min()), float(c), len(h_samples))


def sample_half_ball(center, radius, n, rng):
    """Uniform points of ``B(center, radius) ∩ H`` by rejection."""
    center = np.asarray(center.as_array() if hasattr(center, "as_array") else center, dtype=float)
    d = center.size
    pts = []
    while len(pts) < n:
        cand = center + radius * rng.uniform(-1, 1, size=(4 * n, d))
        ok = (np.linalg.norm(cand - center, axis=1) < radius) & (cand[:, -1] > 0)
        pts.extend(cand[ok])
    return [HPoint.from_array(p) for p in itertools.islice(pts, n)]
