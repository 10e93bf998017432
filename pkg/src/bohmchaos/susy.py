"""Strictly isospectral (q = 0) SUSY partners of the 1D harmonic oscillator.

Units are hbar = m = omega = 1, so the oscillator has E_n = n + 1/2 and
H = -1/2 d^2/dx^2 + V.  The deformation parameter ``lam`` must satisfy
``lam > 0`` or ``lam < -1``; as ``lam -> inf`` every hatted object reduces
to its undeformed partner.

The scalar kernels (``_cumulative``, ``_phi_hat`` and friends) are numba
compiled so the field kernels can inline them.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from numba import njit

from .errors import InvalidDeformation, NodeDivision

SQRT_PI = math.sqrt(math.pi)
PI_M14 = math.pi ** -0.25
NODE_EPS = 1e-300


@dataclass(frozen=True)
class DeformationParam:
    value: float

    def __post_init__(self):
        check_deformation(self.value)

    def __float__(self):
        return float(self.value)


def check_deformation(lam) -> float:
    lam = float(lam)
    # +inf is the undeformed oscillator
    if math.isnan(lam) or -1.0 <= lam <= 0.0 or lam == -math.inf:
        raise InvalidDeformation(f"deformation parameter {lam!r} must be > 0 or < -1")
    return lam


@dataclass(frozen=True)
class WaveFunction1D:
    value: Callable[[float], float]
    derivative: Callable[[float], float]
    energy: float


def _psi0(x):
    return PI_M14 * math.exp(-0.5 * x * x)


def _dpsi0(x):
    return -x * _psi0(x)


def _psi1(x):
    return math.sqrt(2.0) * PI_M14 * x * math.exp(-0.5 * x * x)


def _dpsi1(x):
    return math.sqrt(2.0) * PI_M14 * (1.0 - x * x) * math.exp(-0.5 * x * x)


HARMONIC_GROUND = WaveFunction1D(_psi0, _dpsi0, 0.5)
HARMONIC_FIRST = WaveFunction1D(_psi1, _dpsi1, 1.5)


# ---------------------------------------------------------------- kernels


@njit(cache=True)
def _cumulative(x):
    # erfc keeps full relative accuracy in the left tail
    return 0.5 * math.erfc(-x)


@njit(cache=True)
def _phi_hat(x, lam):
    # ((I + lam) x + e^{-x^2} / (2 sqrt(pi))) / sqrt(lam (1 + lam))
    s = math.sqrt(lam * (1.0 + lam))
    return ((_cumulative(x) + lam) * x + math.exp(-x * x) / (2.0 * SQRT_PI)) / s


@njit(cache=True)
def _dphi_hat(x, lam):
    # the x I'(x) terms cancel exactly
    return (_cumulative(x) + lam) / math.sqrt(lam * (1.0 + lam))


@njit(cache=True)
def _d2phi_hat(x, lam):
    return math.exp(-x * x) / (SQRT_PI * math.sqrt(lam * (1.0 + lam)))


# ------------------------------------------------------------- public API


def gaussian_cumulative(x: float) -> float:
    """I(x) = pi^{-1/2} * integral_{-inf}^{x} exp(-u^2) du."""
    return 0.5 * math.erfc(-x)


def isospectral_ground(x: float, lam) -> float:
    """Normalized ground state of the deformed potential."""
    lam = check_deformation(lam)
    if math.isinf(lam):
        return _psi0(x)
    return math.sqrt(lam * (1.0 + lam)) / (gaussian_cumulative(x) + lam) * _psi0(x)


def isospectral_excited(psi_next: WaveFunction1D, psi0: WaveFunction1D, lam, x: float) -> float:
    """Deformed partner of an excited state ``psi_next`` (q = 0 transform).

    ``psi0`` must be the nodeless ground state whose squared modulus
    integrates to the cumulative I(x) used by the deformation.
    """
    lam = check_deformation(lam)
    if psi_next.energy <= psi0.energy:
        raise ValueError("psi_next must lie above the ground state")
    p0 = psi0.value(x)
    if abs(p0) < NODE_EPS:
        raise NodeDivision(f"ground state vanishes numerically at x={x!r}")
    p = psi_next.value(x)
    if math.isinf(lam):
        return p
    dI = p0 * p0
    log_deriv = psi0.derivative(x) / p0
    corr = 0.5 / (psi_next.energy - psi0.energy) * dI / (gaussian_cumulative(x) + lam)
    return p + corr * (psi_next.derivative(x) - log_deriv * p)


def phi_hat(x: float, lam) -> float:
    """Ratio of the deformed first-excited to ground state, sqrt(2) absorbed."""
    lam = check_deformation(lam)
    if math.isinf(lam):
        return x
    return _phi_hat(x, lam)


def phi_hat_derivative(x: float, lam) -> float:
    lam = check_deformation(lam)
    if math.isinf(lam):
        return 1.0
    return _dphi_hat(x, lam)


def deformed_potential(x: float, lam) -> float:
    """V_hat(x; lam) = x^2/2 - d^2/dx^2 ln(I(x) + lam)."""
    lam = check_deformation(lam)
    if math.isinf(lam):
        return 0.5 * x * x
    w = lam + gaussian_cumulative(x)
    g = math.exp(-x * x)
    return 0.5 * x * x + (2.0 / SQRT_PI * x * g * w + g * g / math.pi) / (w * w)
