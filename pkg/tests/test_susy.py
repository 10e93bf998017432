import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from bohmchaos import susy
from bohmchaos.errors import InvalidDeformation, NodeDivision

PI_M14 = math.pi ** -0.25

admissible = st.one_of(st.floats(1e-3, 1e6), st.floats(-1e6, -1.0 - 1e-3))


def quad_cumulative(x):
    # independent of erf: direct quadrature of the Gaussian density
    val, _ = integrate.quad(lambda u: math.exp(-u * u) / math.sqrt(math.pi), 0.0, x,
                            epsabs=1e-14, epsrel=1e-14)
    return 0.5 + val


def test_cumulative_values():
    assert susy.gaussian_cumulative(0.0) == 0.5
    assert abs(susy.gaussian_cumulative(40.0) - 1.0) <= 1e-15
    assert susy.gaussian_cumulative(-40.0) >= 0.0


@pytest.mark.parametrize("x", [-3.0, -1.0, -0.2, 0.7, 1.0, 2.5])
def test_cumulative_against_quadrature(x):
    assert susy.gaussian_cumulative(x) == pytest.approx(quad_cumulative(x), abs=1e-12)


@given(st.floats(-5.5, 4.0), st.floats(1e-3, 1.0))
def test_cumulative_strictly_increasing(x, h):
    lo, hi = susy.gaussian_cumulative(x), susy.gaussian_cumulative(x + h)
    assert 0.0 < lo < hi < 1.0


def test_deformation_param_rejects_forbidden_interval():
    for bad in (-1.0, -0.5, 0.0, math.nan, -math.inf):
        with pytest.raises(InvalidDeformation):
            susy.DeformationParam(bad)
    assert float(susy.DeformationParam(20)) == 20.0
    assert float(susy.DeformationParam(-1.5)) == -1.5
    with pytest.raises(InvalidDeformation):
        susy.phi_hat(0.3, -0.2)
    with pytest.raises(InvalidDeformation):
        susy.deformed_potential(0.3, 0.0)
    with pytest.raises(InvalidDeformation):
        susy.isospectral_ground(0.3, -1.0)


def test_ground_values():
    assert susy.isospectral_ground(0.0, 1e8) == pytest.approx(PI_M14, abs=1e-6)
    assert susy.isospectral_ground(0.0, 20) == pytest.approx(math.sqrt(420) / 20.5 * PI_M14, rel=1e-14)


@pytest.mark.parametrize("lam", [1.0, 5.0, 20.0, -1.5, -7.0])
def test_ground_normalized(lam):
    val, _ = integrate.quad(lambda x: susy.isospectral_ground(x, lam) ** 2, -math.inf, math.inf,
                            epsabs=1e-13, epsrel=1e-13)
    assert abs(val - 1) <= 1e-8


def test_excited_values():
    psi1, psi0 = susy.HARMONIC_FIRST, susy.HARMONIC_GROUND
    assert susy.isospectral_excited(psi1, psi0, 1e8, 1.0) == pytest.approx(psi1.value(1.0), abs=1e-6)
    expected = math.pi ** -0.75 / (math.sqrt(2) * 20.5)
    assert susy.isospectral_excited(psi1, psi0, 20, 0.0) == pytest.approx(expected, rel=1e-14)
    assert expected == pytest.approx(0.01462, abs=1e-5)


@pytest.mark.parametrize("lam", [1.0, 2.0, 20.0])
def test_excited_matches_ratio_form(lam):
    for x in np.linspace(-5, 5, 201):
        lhs = susy.isospectral_excited(susy.HARMONIC_FIRST, susy.HARMONIC_GROUND, lam, x)
        rhs = math.sqrt(2) * susy.phi_hat(x, lam) * susy.isospectral_ground(x, lam)
        assert abs(lhs - rhs) <= 1e-8


def test_excited_rejects_node_and_ordering():
    with pytest.raises(NodeDivision):
        susy.isospectral_excited(susy.HARMONIC_FIRST, susy.HARMONIC_GROUND, 2.0, 40.0)
    with pytest.raises(ValueError):
        susy.isospectral_excited(susy.HARMONIC_GROUND, susy.HARMONIC_FIRST, 2.0, 0.5)


@pytest.mark.parametrize("wf", [susy.HARMONIC_GROUND, susy.HARMONIC_FIRST])
def test_wavefunction_derivatives(wf):
    h = 1e-5
    for x in np.linspace(-3, 3, 25):
        fd = (wf.value(x + h) - wf.value(x - h)) / (2 * h)
        assert fd == pytest.approx(wf.derivative(x), rel=1e-6, abs=1e-9)


def test_phi_hat_values():
    assert susy.phi_hat(1.0, 1e8) == pytest.approx(1.0, abs=1e-6)
    assert susy.phi_hat(0.0, 20) == pytest.approx(1 / (2 * math.sqrt(420 * math.pi)), rel=1e-14)
    assert susy.phi_hat(0.0, 20) == pytest.approx(0.013765, abs=1e-6)


def test_phi_hat_derivative_finite_difference():
    h = 1e-5
    for lam in (1.0, 20.0, -1.5):
        for x in np.linspace(-4, 4, 41):
            fd = (susy.phi_hat(x + h, lam) - susy.phi_hat(x - h, lam)) / (2 * h)
            assert abs(fd - susy.phi_hat_derivative(x, lam)) <= 1e-6


def test_potential_values():
    assert susy.deformed_potential(1.0, 1e8) == pytest.approx(0.5, abs=1e-7)
    assert susy.deformed_potential(0.0, 1.0) == pytest.approx(4 / (9 * math.pi), rel=1e-14)


def five_point_d2(f, x, h):
    return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) / (12 * h * h)


@pytest.mark.parametrize("lam", [1.0, 5.0, 20.0])
def test_schroedinger_residual(lam):
    h = 1e-3
    f = lambda x: susy.isospectral_ground(x, lam)  # noqa: E731
    xs = np.arange(-6, 6 + h / 2, h)
    res = [-0.5 * five_point_d2(f, x, h) + (susy.deformed_potential(x, lam) - 0.5) * f(x) for x in xs]
    assert np.max(np.abs(res)) <= 1e-4


def test_excited_state_also_solves_deformed_equation():
    # the partner of psi_1 keeps E = 3/2
    lam, h = 3.0, 1e-3
    f = lambda x: susy.isospectral_excited(susy.HARMONIC_FIRST, susy.HARMONIC_GROUND, lam, x)  # noqa: E731
    for x in np.linspace(-5, 5, 101):
        r = -0.5 * five_point_d2(f, x, h) + (susy.deformed_potential(x, lam) - 1.5) * f(x)
        assert abs(r) <= 1e-4


def test_isospectral_limit():
    for x in np.linspace(-4, 4, 81):
        assert abs(susy.phi_hat(x, 1e8) - x) < 1e-6
        assert abs(susy.deformed_potential(x, 1e8) - x * x / 2) < 1e-6
    assert susy.phi_hat(0.4, math.inf) == 0.4


@settings(max_examples=60)
@given(admissible, st.floats(-4, 4))
def test_all_operations_finite(lam, x):
    for f in (susy.phi_hat, susy.phi_hat_derivative, susy.deformed_potential, susy.isospectral_ground):
        assert math.isfinite(f(x, lam))
