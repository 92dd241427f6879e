import math

import mpmath
import numpy as np
import pytest
from scipy import special

from halfspace_thinness import laplace
from halfspace_thinness.errors import InversionError


@pytest.mark.parametrize("t", [0.01, 0.5, 3.0, 40.0])
def test_talbot_power(t):
    # L^-1[s^-1/2] = t^-1/2 / sqrt(pi)
    val = laplace.talbot(lambda s: s ** -0.5, np.array([t]))[0]
    assert val == pytest.approx(1 / math.sqrt(math.pi * t), rel=1e-10)


def test_talbot_erfcx_oracle():
    # 1/(s + sqrt(s)) inverts to erfcx(sqrt(t))
    t = np.geomspace(1e-3, 50, 20)
    val = laplace.talbot(lambda s: 1.0 / (s + np.sqrt(s)), t)
    np.testing.assert_allclose(val, special.erfcx(np.sqrt(t)), rtol=1e-9)


def test_invert_passes_through_good_values():
    t = np.array([0.1, 1.0])
    np.testing.assert_allclose(laplace.invert(lambda s: 1 / (s + 1), t), np.exp(-t), rtol=1e-10)


def test_invert_falls_back_to_stehfest():
    bad = lambda s: np.full(np.shape(s), np.nan, dtype=complex)  # noqa: E731
    val = laplace.invert(bad, np.array([1.0]), transform_mp=lambda s: 1 / (s + 1))
    assert val[0] == pytest.approx(math.exp(-1), rel=1e-7)


def test_invert_reports_residual():
    bad = lambda s: np.full(np.shape(s), np.nan, dtype=complex)  # noqa: E731
    with pytest.raises(InversionError) as info:
        laplace.invert(bad, np.array([1.0]))
    assert info.value.residual > 0


def test_stehfest_precision():
    val = laplace.stehfest_mp(lambda s: 1 / mpmath.sqrt(s), 2.0, dps=40)
    assert val == pytest.approx(1 / math.sqrt(2 * math.pi), rel=1e-10)
