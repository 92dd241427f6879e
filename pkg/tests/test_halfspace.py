import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from halfspace_thinness import bernstein as b
from halfspace_thinness import halfspace as hs
from halfspace_thinness import kernels as k
from halfspace_thinness.errors import DomainError, PreconditionError
from halfspace_thinness.halfspace import INFINITY, BoundaryPoint, HPoint

STABLE1 = b.ExponentSpec.stable(1.0)


def test_points():
    x = HPoint((1.0, 2.0), 0.5)
    assert x.dimension == 3 and x.delta == 0.5
    np.testing.assert_array_equal(x.as_array(), [1, 2, 0.5])
    assert HPoint.from_array([1, 2, 0.5]) == x
    with pytest.raises(DomainError):
        HPoint((0.0,), 0.0)
    assert hs.x0(3) == HPoint((0.0, 0.0), 1.0)
    assert hs.origin(2).dimension == 2


def test_kernel_bounds():
    kb = hs.KernelBounds(2.0, 4.0)
    assert kb.lower == 0.5 and kb.upper == 8.0 and kb.contains(1.0) and not kb.contains(9.0)
    with pytest.raises(DomainError):
        hs.KernelBounds(1.0, 0.5)


def test_green_bounds_equal_truncation():
    x = HPoint((0.0, 0.0), 0.3)
    y = HPoint((0.3, 0.0), 0.3)
    kb = hs.green_halfspace_bounds(STABLE1, x, y, 2.0)
    assert kb.center == pytest.approx(k.green_radial(STABLE1, 0.3)[0], rel=1e-14)


def test_green_bounds_stable_example_and_symmetry():
    x = HPoint((0.0, 0.0), 0.1)
    y = HPoint((0.5, 0.0), 0.1)
    kb = hs.green_halfspace_bounds(STABLE1, x, y, 3.0)
    assert kb.center == pytest.approx(0.2 * k.green_radial(STABLE1, 0.5)[0], rel=1e-13)
    assert hs.green_halfspace_bounds(STABLE1, y, x, 3.0) == kb


def test_green_bounds_errors_and_warning():
    x = HPoint((0.0, 0.0), 0.1)
    with pytest.raises(DomainError):
        hs.green_halfspace_bounds(STABLE1, x, x, 2.0)
    with pytest.raises(DomainError):
        hs.green_halfspace_bounds(STABLE1, x, HPoint((0.0,), 0.2), 2.0)
    with pytest.warns(hs.RangeWarning):
        hs.green_halfspace_bounds(STABLE1, x, HPoint((3.0, 0.0), 0.1), 2.0)


def test_martin_center_examples():
    h = 0.3
    assert hs.martin_center(STABLE1, HPoint((0.0, 0.0), h), hs.origin(3)) == pytest.approx(h ** 0.5 / h ** 3)
    spec2 = b.ExponentSpec.stable(1.0, 2)
    # |x - z| = R/2 sits on the edge of the window
    with pytest.warns(hs.RangeWarning):
        val = hs.martin_kernel_bounds(spec2, HPoint((0.3,), 0.4), hs.origin(2), 1.0).center
    assert val == pytest.approx(0.4 ** 0.5 / 0.25, rel=1e-14)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.2, 1.8), st.floats(0.1, 5.0), st.floats(-0.3, 0.3), st.floats(0.05, 0.4),
       st.floats(-0.3, 0.3))
def test_martin_center_scaling(alpha, lam, xt, xd, zt):
    spec = b.ExponentSpec.stable(alpha, 2)
    x, z = HPoint((xt,), xd), BoundaryPoint((zt,))
    xs, zs = HPoint((lam * xt,), lam * xd), BoundaryPoint((lam * zt,))
    lhs = hs.martin_center(spec, xs, zs) * lam ** (2 - alpha / 2)
    rhs = hs.martin_center(spec, x, z) * ((1 + (lam * zt) ** 2) / (1 + zt ** 2))
    assert lhs == pytest.approx(rhs, rel=1e-12)


def test_stable_martin_kernel_examples():
    assert hs.stable_martin_kernel(1.0, 2, HPoint((0.0,), 1.0), hs.origin(2)) == pytest.approx(1.0)
    assert hs.stable_martin_kernel(1.0, 2, HPoint((0.0,), 1.0), BoundaryPoint((1.0,))) == pytest.approx(1.0)
    assert hs.stable_martin_kernel(1.4, 2, HPoint((0.0,), 1.0), INFINITY) == 1.0
    assert hs.stable_martin_kernel(2.0, 2, HPoint((0.0,), 4.0), INFINITY) == 4.0
    with pytest.raises(DomainError):
        hs.stable_martin_kernel(2.5, 2, HPoint((0.0,), 1.0), INFINITY)
    with pytest.raises(DomainError):
        hs.stable_martin_kernel(1.0, 3, HPoint((0.0,), 1.0), INFINITY)


def test_containment_random_pairs():
    rng = np.random.default_rng(3)
    for alpha in (0.5, 1.0, 1.5):
        for d in (2, 3):
            spec = b.ExponentSpec.stable(alpha, d)
            n_ok = 0
            while n_ok < 1000 // 6 + 1:
                z = BoundaryPoint(tuple(rng.uniform(-0.7, 0.7, d - 1)))
                if np.linalg.norm(z.z_tilde) >= hs.R:
                    continue
                x = HPoint.from_array(z.as_array() + rng.uniform(-0.5, 0.5, d) * np.r_[np.ones(d - 1), 0]
                                      + np.r_[np.zeros(d - 1), rng.uniform(1e-4, 0.5)])
                if np.linalg.norm(x.as_array() - z.as_array()) >= hs.R / 2:
                    continue
                with warnings.catch_warnings():
                    warnings.simplefilter("error")
                    kb = hs.martin_kernel_bounds(spec, x, z, 1.0 + 1e-12)
                assert kb.contains(hs.stable_martin_kernel(alpha, d, x, z))
                n_ok += 1


def test_bhp_examples():
    spec = b.ExponentSpec.stable(1.0, 2)
    rng = np.random.default_rng(0)
    pts = hs.sample_half_ball(np.zeros(2), 0.25, 100, rng)
    assert len(pts) == 100 and all(np.linalg.norm(p.as_array()) < 0.25 for p in pts)
    far = BoundaryPoint((3.0,))
    rep = hs.bhp_ratio_check(spec, [(p, hs.stable_martin_kernel(1.0, 2, p, far)) for p in pts], 50.0)
    assert rep.passed and rep.n_samples == 100
    # exact spread of |x - z0|^-2 over the quarter ball
    assert rep.max_ratio <= (3.25 / 2.75) ** 2
    own = hs.bhp_ratio_check(spec, [(p, k.renewal_surrogate(spec, p.delta)) for p in pts], 1.0)
    assert own.max_ratio == pytest.approx(1.0, abs=1e-14)
    assert hs.bhp_ratio_check(spec, pts[:1] and [(pts[0], 2.0)], 1.0).max_ratio == 1.0
    with pytest.raises(PreconditionError):
        hs.bhp_ratio_check(spec, [], 1.0)
    with pytest.raises(DomainError):
        hs.bhp_ratio_check(spec, [(pts[0], -1.0)], 1.0)


def test_martin_kernel_integrable_profile():
    # the kernel over a boundary-parallel slice decays like |x|^-d
    z = hs.origin(3)
    near = hs.martin_center(STABLE1, HPoint((0.0, 0.0), 0.1), z)
    farther = hs.martin_center(STABLE1, HPoint((0.0, 0.0), 0.2), z)
    assert near / farther == pytest.approx(2 ** (3 - 0.5), rel=1e-13)
    assert math.isfinite(near)
