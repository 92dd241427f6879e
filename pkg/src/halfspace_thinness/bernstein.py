"""Catalog of complete Bernstein Laplace exponents.

Every catalog member is a drift plus a finite sum of (possibly exponentially
tempered) stable components,

    phi(lam) = a * lam + sum_i w_i * ((lam + mu_i) ** k_i - mu_i ** k_i),

with ``k_i in (0, 1)`` and ``mu_i >= 0``.  The matching Levy density is

    eta(t) = sum_i w_i * k_i / Gamma(1 - k_i) * t ** (-1 - k_i) * exp(-mu_i t),

which is what makes the uniform treatment of tails and small-time behaviour
below possible.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import mpmath
import numpy as np
from scipy import special

from . import laplace
from .errors import DomainError, InversionError, PreconditionError
from .quadrature import integrate

# Multiplies every potential density value; tests flip it to check that the
# verification suite notices a perturbed density.
_POTENTIAL_SCALE = 1.0


class Kind(str, enum.Enum):
    STABLE = "Stable"
    RELATIVISTIC_STABLE = "RelativisticStable"
    STABLE_MIX = "StableMix"
    BROWNIAN_PLUS_STABLE = "BrownianPlusStable"


@dataclass(frozen=True)
class Component:
    """One tempered-stable piece ``w * ((lam + mu)**k - mu**k)``."""

    weight: float
    index: float
    tempering: float = 0.0

    @property
    def density_coef(self):
        return self.weight * self.index / special.gamma(1.0 - self.index)


@dataclass(frozen=True)
class ExponentSpec:
    """A catalog Laplace exponent together with the ambient dimension.

    Use the named constructors (:meth:`stable`, :meth:`relativistic`,
    :meth:`mix`, :meth:`brownian_plus_stable`) rather than filling the
    parameter dictionary by hand.
    """

    kind: Kind
    params: tuple
    dimension: int = 3
    components: tuple = field(init=False, repr=False, compare=False)
    drift: float = field(init=False, repr=False, compare=False)
    alpha_index: float = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        kind = Kind(self.kind)
        object.__setattr__(self, "kind", kind)
        p = dict(self.params)
        d = self.dimension
        if not isinstance(d, (int, np.integer)) or d < 2:
            raise DomainError("dimension must be an integer >= 2")
        if kind is Kind.STABLE:
            alpha = _check_open(p, "alpha", 0.0, 2.0)
            comps = (Component(1.0, alpha / 2),)
            drift, index = 0.0, alpha
        elif kind is Kind.RELATIVISTIC_STABLE:
            alpha = _check_open(p, "alpha", 0.0, 2.0)
            m = _check_positive(p, "m")
            if d == 2:
                # phi(lam) ~ lam near 0, so the d=2 transience condition fails
                raise DomainError("RelativisticStable requires dimension >= 3 "
                                  "(recurrent in the plane)")
            comps = (Component(1.0, alpha / 2, m ** (2.0 / alpha)),)
            drift, index = 0.0, alpha
        elif kind is Kind.STABLE_MIX:
            alpha = _check_open(p, "alpha", 0.0, 2.0)
            beta = _check_open(p, "beta", 0.0, 2.0)
            if not beta < alpha:
                raise DomainError("StableMix requires 0 < beta < alpha < 2")
            comps = (Component(1.0, alpha / 2), Component(1.0, beta / 2))
            drift, index = 0.0, alpha
        elif kind is Kind.BROWNIAN_PLUS_STABLE:
            a = _check_positive(p, "a")
            b = _check_positive(p, "b")
            beta = _check_open(p, "beta", 0.0, 2.0)
            if d < 3:
                raise DomainError("BrownianPlusStable requires dimension >= 3")
            comps = (Component(b ** beta, beta / 2),)
            drift, index = a, 2.0
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "drift", float(drift))
        object.__setattr__(self, "alpha_index", float(index))

    # -- constructors -----------------------------------------------------
    @classmethod
    def stable(cls, alpha, dimension=3):
        return cls(Kind.STABLE, (("alpha", float(alpha)),), dimension)

    @classmethod
    def relativistic(cls, alpha, m, dimension=3):
        return cls(Kind.RELATIVISTIC_STABLE, (("alpha", float(alpha)), ("m", float(m))), dimension)

    @classmethod
    def mix(cls, alpha, beta, dimension=3):
        return cls(Kind.STABLE_MIX, (("alpha", float(alpha)), ("beta", float(beta))), dimension)

    @classmethod
    def brownian_plus_stable(cls, a, b, beta, dimension=3):
        return cls(Kind.BROWNIAN_PLUS_STABLE,
                   (("a", float(a)), ("b", float(b)), ("beta", float(beta))), dimension)

    def with_dimension(self, dimension):
        return ExponentSpec(self.kind, self.params, dimension)

    def param(self, name):
        return dict(self.params)[name]

    @property
    def small_index(self):
        """Exponent ``g`` with ``phi(lam) ~ c * lam**g`` as ``lam -> 0``."""
        if any(c.tempering > 0 for c in self.components):
            return 1.0
        return min(c.index for c in self.components)

    def __str__(self):
        args = ", ".join(f"{k}={v:g}" for k, v in self.params)
        return f"{self.kind.value}{{{args}}}, d={self.dimension}"


def _check_open(p, name, lo, hi):
    try:
        v = float(p[name])
    except KeyError:
        raise DomainError(f"missing parameter {name!r}") from None
    if not lo < v < hi:
        raise DomainError(f"{name} out of range ({lo:g},{hi:g})")
    return v


def _check_positive(p, name):
    try:
        v = float(p[name])
    except KeyError:
        raise DomainError(f"missing parameter {name!r}") from None
    if not v > 0:
        raise DomainError(f"{name} must be positive")
    return v


def catalog(dimension=3):
    """Default catalog instances, one per kind."""
    return [
        ExponentSpec.stable(1.0, dimension),
        ExponentSpec.relativistic(1.0, 1.0, max(dimension, 3)),
        ExponentSpec.mix(1.5, 0.5, dimension),
        ExponentSpec.brownian_plus_stable(1.0, 1.0, 1.0, max(dimension, 3)),
    ]


# -- pointwise functions -------------------------------------------------------

def _positive_array(x, name):
    arr = np.asarray(x, dtype=float)
    if not np.all(arr > 0):
        raise DomainError(f"{name} must be positive")
    return arr


def _scalar_or_array(arr, like):
    return float(arr) if np.ndim(like) == 0 else arr


def phi(spec, lam):
    """Laplace exponent of the subordinator at ``lam > 0`` (vectorised)."""
    lam_arr = _positive_array(lam, "lambda")
    out = spec.drift * lam_arr
    for c in spec.components:
        if c.tempering == 0.0:
            out = out + c.weight * lam_arr ** c.index
        else:
            mu = c.tempering
            out = out + c.weight * mu ** c.index * np.expm1(c.index * np.log1p(lam_arr / mu))
    return _scalar_or_array(out, lam)


def _log1p_complex(z):
    # numpy's complex log1p loses all accuracy for |z| << 1
    w = 1.0 + z
    small = np.abs(z) < 1e-4
    out = np.empty_like(z)
    zs = z[small]
    out[small] = zs - zs ** 2 / 2 + zs ** 3 / 3 - zs ** 4 / 4
    out[~small] = np.log(w[~small])
    return out


def _expm1_complex(z):
    small = np.abs(z) < 1e-4
    out = np.empty_like(z)
    zs = z[small]
    out[small] = zs + zs ** 2 / 2 + zs ** 3 / 6 + zs ** 4 / 24
    out[~small] = np.exp(z[~small]) - 1.0
    return out


def phi_complex(spec, s):
    """Analytic continuation of ``phi`` to ``C \\ (-inf, 0]``."""
    s = np.asarray(s, dtype=complex)
    out = spec.drift * s
    for c in spec.components:
        if c.tempering == 0.0:
            out = out + c.weight * np.exp(c.index * np.log(s))
        else:
            mu = c.tempering
            out = out + c.weight * mu ** c.index * _expm1_complex(c.index * _log1p_complex(s / mu))
    return out


def _phi_mp(spec, s):
    out = spec.drift * s
    for c in spec.components:
        if c.tempering == 0.0:
            out += c.weight * s ** c.index
        else:
            out += c.weight * ((s + c.tempering) ** c.index - mpmath.mpf(c.tempering) ** c.index)
    return out


def levy_density(spec, t):
    """Density of the subordinator's Levy measure at ``t > 0``."""
    t_arr = _positive_array(t, "t")
    out = np.zeros_like(t_arr)
    for c in spec.components:
        out = out + c.density_coef * t_arr ** (-1.0 - c.index) * np.exp(-c.tempering * t_arr)
    return _scalar_or_array(out, t)


def potential_density(spec, t):
    """Density ``u`` of the subordinator's potential measure.

    Characterised by ``int_0^inf exp(-lam t) u(t) dt = 1 / phi(lam)``.  The
    pure stable case has the closed form ``t**(k-1) / Gamma(k)``; every other
    kind is obtained by numerical inversion of ``1 / phi``.

    Raises
    ------
    DomainError
        If any ``t <= 0``.
    InversionError
        If the inversion cannot be certified; carries the residual.
    """
    t_arr = _positive_array(t, "t")
    if spec.kind is Kind.STABLE:
        k = spec.components[0].index
        out = t_arr ** (k - 1.0) / special.gamma(k)
    else:
        out = laplace.invert(lambda s: 1.0 / phi_complex(spec, s), t_arr,
                             transform_mp=lambda s: 1 / _phi_mp(spec, s))
    out = out * _POTENTIAL_SCALE
    return _scalar_or_array(out, t)


def potential_head(spec, eps):
    """``int_0^eps u(t) dt``, the potential of ``[0, eps]``.

    Closed form for the stable kind; otherwise the inverse transform of
    ``1 / (s phi(s))`` evaluated at ``eps``.
    """
    if spec.kind is Kind.STABLE:
        k = spec.components[0].index
        return eps ** k / special.gamma(k + 1.0)
    val = laplace.invert(lambda s: 1.0 / (s * phi_complex(spec, s)), np.array([float(eps)]),
                         transform_mp=lambda s: 1 / (s * _phi_mp(spec, s)))
    return float(val[0])


# -- verifiers -----------------------------------------------------------------

@dataclass
class GridReport:
    """Per-grid-point deviations of a numerical identity."""

    name: str
    grid: np.ndarray
    deviations: np.ndarray
    tol: float
    failures: dict = field(default_factory=dict)

    @property
    def max_deviation(self):
        if len(self.failures) == len(self.grid):
            return float("inf")
        ok = np.isfinite(self.deviations)
        return float(np.max(self.deviations[ok])) if ok.any() else float("inf")

    @property
    def passed(self):
        return not self.failures and self.max_deviation <= self.tol


def _check_grid(grid):
    arr = np.atleast_1d(np.asarray(grid, dtype=float))
    if arr.size == 0:
        raise PreconditionError("grid must be nonempty")
    if not np.all(arr > 0):
        raise DomainError("grid values must be positive")
    return arr


def reconstruct_phi(spec, lam, abs_tol=1e-10, rel_tol=1e-8):
    """Evaluate ``a*lam + int (1 - e^{-lam t}) eta(t) dt`` by quadrature.

    The integral is split at ``t = 1/lam`` and taken in ``s = log t``; the
    pieces below ``t = 1e-12 / lam`` and beyond the last tempering/decay
    scale are added in closed form from the component representation.
    """
    lo = math.log(1e-12 / lam)
    far = 50.0 / lam
    temp = [c.tempering for c in spec.components if c.tempering > 0]
    if temp:
        far = max(far, 50.0 / min(temp))
    hi = math.log(far)
    split = math.log(1.0 / lam)

    def integrand(s):
        t = np.exp(s)
        return -np.expm1(-lam * t) * levy_density(spec, t) * t

    res1 = integrate(integrand, lo, split, abs_tol=abs_tol, rel_tol=rel_tol)
    res2 = integrate(integrand, split, hi, abs_tol=abs_tol, rel_tol=rel_tol)
    eps = math.exp(lo)
    head = sum(lam * c.density_coef * eps ** (1 - c.index) / (1 - c.index)
               for c in spec.components)
    tail = sum(c.density_coef * far ** (-c.index) / c.index * math.exp(-c.tempering * far)
               for c in spec.components)
    return spec.drift * lam + head + res1.value + res2.value + tail, res1.error + res2.error


def verify_levy_khintchine(spec, lambda_grid, tol=1e-6):
    """Compare ``phi`` with its Levy-Khintchine reconstruction on a grid.

    Returns a :class:`GridReport` of relative deviations; points where the
    quadrature fails are listed in ``failures`` instead of raising.
    """
    grid = _check_grid(lambda_grid)
    devs = np.full(grid.shape, np.nan)
    failures = {}
    for i, lam in enumerate(grid):
        try:
            val, _ = reconstruct_phi(spec, float(lam))
        except ArithmeticError as exc:
            failures[float(lam)] = str(exc)
            continue
        ref = phi(spec, float(lam))
        devs[i] = abs(val - ref) / ref
    return GridReport("levy_khintchine", grid, devs, tol, failures)


def laplace_of_potential(spec, lam, rel_tol=1e-9):
    """``int_0^inf exp(-lam t) u(t) dt`` by quadrature in ``log t``."""
    eps = 1e-12 / lam
    lo, hi = math.log(eps), math.log(60.0 / lam)

    def integrand(s):
        t = np.exp(s)
        return np.exp(-lam * t) * potential_density(spec, t) * t

    res = integrate(integrand, lo, hi, abs_tol=0.0, rel_tol=rel_tol)
    head = potential_head(spec, eps) * _POTENTIAL_SCALE
    return res.value + head, res.error


def verify_transform_identity(spec, lambda_grid, tol=1e-6):
    """Check ``|phi(lam) * L[u](lam) - 1| <= tol`` on a grid."""
    grid = _check_grid(lambda_grid)
    devs = np.full(grid.shape, np.nan)
    failures = {}
    for i, lam in enumerate(grid):
        try:
            val, _ = laplace_of_potential(spec, float(lam))
        except (ArithmeticError, InversionError) as exc:
            failures[float(lam)] = str(exc)
            continue
        devs[i] = abs(phi(spec, float(lam)) * val - 1.0)
    return GridReport("transform_identity", grid, devs, tol, failures)


def doubling_constant(spec, t_max=10.0, n=400):
    """Observed ``max eta(t) / eta(2t)`` over a geometric grid in ``(0, t_max]``."""
    t = np.geomspace(1e-6 * t_max, t_max, n)
    return float(np.max(levy_density(spec, t) / levy_density(spec, 2 * t)))
