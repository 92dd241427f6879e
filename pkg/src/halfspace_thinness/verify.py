"""Property suite behind ``halfspace-thinness verify``.

Each check returns a :class:`PropertyResult`; the suite is quick (a few
seconds) and deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import bernstein, halfspace, kernels, thinness
from .halfspace import HPoint, BoundaryPoint


@dataclass
class PropertyResult:
    name: str
    passed: bool
    detail: str


def _transform_identities(dimension):
    grid = np.geomspace(1e-2, 1e4, 25)
    out = []
    for spec in bernstein.catalog(dimension):
        rep = bernstein.verify_transform_identity(spec, grid)
        out.append(PropertyResult(f"transform_identity[{spec.kind.value}]", rep.passed,
                                  f"max |phi L[u] - 1| = {rep.max_deviation:.3g}"))
        rep = bernstein.verify_levy_khintchine(spec, grid)
        out.append(PropertyResult(f"levy_khintchine[{spec.kind.value}]", rep.passed,
                                  f"max rel dev = {rep.max_deviation:.3g}"))
    return out


def _stable_scalings(rng):
    worst = 0.0
    for alpha in (0.5, 1.0, 1.5):
        for d in (2, 3):
            spec = bernstein.ExponentSpec.stable(alpha, d)
            for _ in range(3):
                r = float(rng.uniform(0.05, 1.0))
                lam = float(rng.uniform(0.1, 10.0))
                g = kernels.green_radial(spec, lam * r)[0] / kernels.green_radial(spec, r)[0]
                j = kernels.jump_density(spec, lam * r)[0] / kernels.jump_density(spec, r)[0]
                worst = max(worst, abs(g / lam ** (alpha - d) - 1), abs(j / lam ** (-alpha - d) - 1))
    return PropertyResult("stable_scaling", worst <= 1e-8, f"max rel dev = {worst:.3g}")


def _riesz():
    spec = bernstein.ExponentSpec.stable(1.0, 3)
    c = kernels.riesz_constant(1.0, 3)
    worst = max(abs(kernels.green_radial(spec, r)[0] * r ** 2 / c - 1) for r in (0.01, 0.1, 1.0))
    return PropertyResult("riesz_constant", worst <= 1e-6, f"max rel dev = {worst:.3g}")


def _containment(rng, dimension):
    """The explicit stable Martin kernel lies in its own two-sided bounds."""
    ok = True
    worst = 0.0
    for alpha in (0.5, 1.0, 1.5):
        spec = bernstein.ExponentSpec.stable(alpha, dimension)
        for _ in range(10):
            x = HPoint(tuple(rng.uniform(-0.2, 0.2, dimension - 1)), float(rng.uniform(0.01, 0.4)))
            z = BoundaryPoint(tuple(rng.uniform(-0.05, 0.05, dimension - 1)))
            exact = halfspace.stable_martin_kernel(alpha, dimension, x, z)
            center = halfspace.martin_center(spec, x, z)
            worst = max(worst, abs(exact / center - 1))
            ok &= halfspace.KernelBounds(center, 1.0 + 1e-12).contains(exact)
    return PropertyResult("martin_containment", bool(ok), f"max rel dev = {worst:.3g}")


def _bhp(rng, dimension):
    """Boundary Harnack: ``h / V`` stays within ``4^d`` on a half ball.

    For a half ball of radius 1/4 at distance 1/2 from the pole the exact
    ratio spread is at most ``3^d``.
    """
    spec = bernstein.ExponentSpec.stable(1.0, dimension)
    z = halfspace.origin(dimension)
    # half ball around the boundary point (0.5, 0, ..., 0), away from the pole z
    w = np.zeros(dimension)
    w[0] = 0.5
    pts = halfspace.sample_half_ball(w, 0.25, 200, rng)
    samples = [(p, halfspace.stable_martin_kernel(1.0, dimension, p, z)) for p in pts]
    rep = halfspace.bhp_ratio_check(spec, samples, c=4.0 ** dimension)
    return PropertyResult("boundary_harnack", rep.passed,
                          f"max ratio {rep.max_ratio:.3g} (bound {rep.bound:.3g})")


def _localization(dimension):
    """Verdicts depend only on the profile near the origin."""
    base = thinness.ProfileSpec.power_law(1.0, 1.5)
    # same as ``base`` on (0, 1), constant beyond
    altered = thinness.ProfileSpec.power_log(1.0, 1.5, 0.0)
    a = thinness.burdzy_integral(base, dimension)
    b = thinness.burdzy_integral(altered, dimension)
    ok = a.status == b.status == thinness.Status.CONVERGES
    return PropertyResult("localization", bool(ok), f"{a.status.value} vs {b.status.value}")


def run_property_suite(dimension=3, seed=0):
    """Run every property; returns a list of :class:`PropertyResult`."""
    rng = np.random.default_rng(seed)
    results = _transform_identities(dimension)
    results.append(_stable_scalings(rng))
    results.append(_riesz())
    results.append(_containment(rng, dimension))
    results.append(_bhp(rng, dimension))
    results.append(_localization(dimension))
    return results


def format_table(results):
    width = max(len(r.name) for r in results)
    lines = [f"{'property':<{width}}  result  detail"]
    for r in results:
        lines.append(f"{r.name:<{width}}  {'PASS' if r.passed else 'FAIL':<6}  {r.detail}")
    return "\n".join(lines)
