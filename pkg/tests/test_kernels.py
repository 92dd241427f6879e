import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate as spi
from scipy import special

from halfspace_thinness import bernstein as b
from halfspace_thinness import kernels as k
from halfspace_thinness.errors import DomainError, PreconditionError

STABLE1 = b.ExponentSpec.stable(1.0)
MIX = b.ExponentSpec.mix(1.5, 0.5)
REL = b.ExponentSpec.relativistic(1.0, 1.0)
BPS = b.ExponentSpec.brownian_plus_stable(1.0, 1.0, 1.0)


def heat(t, r, d):
    return (4 * math.pi * t) ** (-d / 2) * math.exp(-r * r / (4 * t))


def subordination_quad(density, r, d):
    """Independent oracle: scipy quad of int heat(t, r) density(t) dt split at r^2/4."""
    f = lambda t: heat(t, r, d) * density(t)  # noqa: E731
    s = r * r / 4
    parts = [spi.quad(f, 0, s, epsabs=0, epsrel=1e-11, limit=400)[0],
             spi.quad(f, s, 100 * s, epsabs=0, epsrel=1e-11, limit=400)[0],
             spi.quad(f, 100 * s, np.inf, epsabs=0, epsrel=1e-11, limit=400)[0]]
    return sum(parts)


# -- Green function --------------------------------------------------------------

@pytest.mark.parametrize("r", [0.01, 0.1, 1.0])
def test_green_stable_matches_riesz_and_quad(r):
    g, err = k.green_radial(STABLE1, r)
    riesz = k.riesz_constant(1.0, 3) * r ** -2
    oracle = subordination_quad(lambda t: t ** -0.5 / math.sqrt(math.pi), r, 3)
    assert g == pytest.approx(riesz, rel=1e-10)
    assert g == pytest.approx(oracle, rel=1e-8)
    assert 0 <= err < 1e-8 * g


def test_green_riesz_value_at_one():
    # Gamma(1) / (2 pi^(3/2) Gamma(1/2)) = 1 / (2 pi^2)
    assert k.green_radial(STABLE1, 1.0)[0] == pytest.approx(1 / (2 * math.pi ** 2), rel=1e-12)


@pytest.mark.parametrize("r", [1e-3, 0.05, 1.0])
def test_green_bps_against_closed_form_density(r):
    oracle = subordination_quad(lambda t: special.erfcx(math.sqrt(t)), r, 3)
    assert k.green_radial(BPS, r)[0] == pytest.approx(oracle, rel=1e-7)


@pytest.mark.parametrize("r", [1e-3, 0.1, 1.0])
def test_green_relativistic_against_closed_form_density(r):
    u = lambda t: 1 + special.erf(math.sqrt(t)) + math.exp(-t) / math.sqrt(math.pi * t)  # noqa: E731
    assert k.green_radial(REL, r)[0] == pytest.approx(subordination_quad(u, r, 3), rel=1e-7)


def test_green_scaling_examples():
    g1 = k.green_radial(STABLE1, 0.3)[0]
    assert k.green_radial(STABLE1, 0.6)[0] / g1 == pytest.approx(0.25, rel=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([0.5, 1.0, 1.5]), st.sampled_from([2, 3]),
       st.floats(1e-3, 1.0), st.floats(0.1, 10.0))
def test_stable_exact_scalings(alpha, d, r, lam):
    spec = b.ExponentSpec.stable(alpha, d)
    g = k.green_radial(spec, lam * r)[0] / k.green_radial(spec, r)[0]
    j = k.jump_density(spec, lam * r)[0] / k.jump_density(spec, r)[0]
    assert g == pytest.approx(lam ** (alpha - d), rel=1e-8)
    assert j == pytest.approx(lam ** (-alpha - d), rel=1e-8)


@pytest.mark.parametrize("fn", [k.green_radial, k.jump_density, k.ball_mass])
@pytest.mark.parametrize("r", [0.0, -1.0])
def test_nonpositive_radius(fn, r):
    with pytest.raises(DomainError):
        fn(STABLE1, r)


# -- jump kernel -----------------------------------------------------------------

def test_jump_stable_planar_value():
    spec = b.ExponentSpec.stable(1.0, 2)
    assert k.stable_jump_constant(1.0, 2) == pytest.approx(0.15915494309189535, rel=1e-14)
    assert k.jump_density(spec, 1.0)[0] == pytest.approx(1 / (2 * math.pi), rel=1e-10)
    j1 = k.jump_density(STABLE1, 0.4)[0]
    assert k.jump_density(STABLE1, 0.8)[0] / j1 == pytest.approx(1 / 16, rel=1e-12)


@pytest.mark.parametrize("spec", [MIX, REL, BPS])
def test_jump_against_quad(spec):
    for r in (0.01, 0.5):
        oracle = subordination_quad(lambda t: b.levy_density(spec, t), r, 3)
        assert k.jump_density(spec, r)[0] == pytest.approx(oracle, rel=1e-8)


# -- renewal surrogate and ball mass ---------------------------------------------

def test_renewal_surrogate_examples():
    assert k.renewal_surrogate(STABLE1, 0.25) == pytest.approx(0.5, rel=1e-15)
    assert k.renewal_surrogate(BPS, 0.01) == pytest.approx((1e4 + 1e2) ** -0.5, rel=1e-14)
    with pytest.raises(DomainError):
        k.renewal_surrogate(STABLE1, 0.0)


def test_ball_mass_stable_closed_form():
    # int_{B(0,t)} c r^-2 = 4 pi c t with c = 1/(2 pi^2)
    for t in (1e-3, 0.5, 1.0):
        assert k.ball_mass(STABLE1, t)[0] == pytest.approx(2 * t / math.pi, rel=1e-8)


def test_ball_mass_matches_radial_integral():
    g = lambda r: k.green_radial(MIX, r)[0] * 4 * math.pi * r * r  # noqa: E731
    oracle = spi.quad(g, 0, 0.3, epsrel=1e-9, limit=200)[0]
    assert k.ball_mass(MIX, 0.3)[0] == pytest.approx(oracle, rel=1e-6)


# -- tables ------------------------------------------------------------------------

def test_table_csv_roundtrip(tmp_path):
    grid = k.log_grid(1e-2, 1.0, 5)
    table = k.RadialKernelTable.build(MIX, grid, workers=2)
    assert table.is_monotone()
    path = tmp_path / "k.csv"
    table.to_csv(path)
    raw = path.read_bytes()
    assert raw.startswith(b"r,g,g_err,j,j_err,v\n") and b"\r" not in raw
    back = k.RadialKernelTable.from_csv(path)
    for name in ("r_grid", "g_values", "g_errors", "j_values", "j_errors", "v_values"):
        np.testing.assert_array_equal(getattr(back, name), getattr(table, name))


def test_table_rejects_bad_grid():
    with pytest.raises(PreconditionError):
        k.RadialKernelTable([1.0, 0.5], [1, 1], [0, 0], [1, 1], [0, 0], [1, 1])


def test_monotonicity_on_catalog():
    grid = k.log_grid(1e-3, 1.0, 4)
    for spec in b.catalog():
        g = [k.green_radial(spec, r)[0] for r in grid]
        j = [k.jump_density(spec, r)[0] for r in grid]
        assert np.all(np.diff(g) < 0) and np.all(np.diff(j) < 0)
        assert np.all(np.diff(k.renewal_surrogate(spec, grid)) > 0)


# -- sweeps -------------------------------------------------------------------------

def test_stable_sweeps_constant():
    grid = k.log_grid(1e-3, 1.0, 5)
    for rep in (k.verify_green_asymptotics(STABLE1, grid), k.verify_j_asymptotics(STABLE1.with_dimension(2), grid),
                k.verify_green_mass_ratio(STABLE1, [0.5, 0.1, 0.01])):
        assert rep.passed and rep.spread == pytest.approx(1.0, abs=1e-8)


def test_j_doubling_stable_exact():
    rep = k.verify_j_asymptotics(b.ExponentSpec.stable(1.5, 3), [0.1, 0.2])
    assert rep.extra["doubling_constant"] == pytest.approx(2 ** 4.5, rel=1e-9)


def test_mix_planar_j_sweep():
    rep = k.verify_j_asymptotics(MIX.with_dimension(2), k.log_grid(1e-3, 0.5, 5))
    assert rep.passed and rep.spread <= 20


def test_bps_sharp_constant():
    rep = k.verify_green_asymptotics(BPS, [1e-3, 1e-2, 0.1])
    assert rep.extra["sharp_constant_passed"]
    assert rep.extra["sharp_constant_ratio"] == pytest.approx(1.0, abs=0.05)
    j = k.verify_j_asymptotics(BPS, [1e-3, 1e-2])
    assert not j.asserted and j.passed


def test_spread_bound_failure():
    rep = k.verify_green_asymptotics(MIX, [1e-3, 1e-2, 0.1, 1.0], bound=1.0)
    assert rep.spread > 1 and not rep.passed


@pytest.mark.parametrize("sweep", [k.verify_green_asymptotics, k.verify_j_asymptotics,
                                   k.verify_green_mass_ratio, k.verify_green_renewal_ratio])
def test_empty_grid(sweep):
    with pytest.raises(PreconditionError):
        sweep(STABLE1, [])


def test_quadrature_config_validation():
    with pytest.raises(DomainError):
        k.QuadratureConfig(rel_tol=0.0)
