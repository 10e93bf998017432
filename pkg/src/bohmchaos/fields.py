"""Bohmian velocity fields of a two-state superposition with a degenerate
excited level.

With phi = psi_k / psi_n along each axis, c = cos(eps t), s = sin(eps t),

    P = c + a0 phi(x),  Q = s + a1 phi(y),  M = P^2 + Q^2
    vx = -a0 phi'(x) Q / M,   vy = a1 phi'(y) P / M.

Normalisation constants of phi (sqrt(2) for the oscillator and its SUSY
partner, 2 for the square well) are absorbed into a0 and a1, so parameter
values can be compared directly with published figure captions.

Variants:

``harmonic``           phi(z) = z, eps = 1
``isospectral``        phi = phi_hat(.; lam) on x, phi_hat(.; mu) on y, eps = 1
``square_well``        phi(z) = cos z on (0, pi), eps = 3/2
``harmonic_limit``     a0 = r0 A, a1 = r1 A with A -> inf (autonomous)
``square_well_limit``  same limit for the well

The limit forms divide numerator and denominator by A^2 before taking
A -> inf, which leaves vx = -r0 r1 phi'(x) phi(y) / D, vy = r0 r1 phi'(y)
phi(x) / D with D = r0^2 phi(x)^2 + r1^2 phi(y)^2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from numba import njit

from . import susy
from .errors import DomainEscape, IncompatibleProbe, SingularityEncountered

HARMONIC = 0
ISOSPECTRAL = 1
SQUARE_WELL = 2
HARMONIC_LIMIT = 3
SQUARE_WELL_LIMIT = 4

KINDS = {
    "harmonic": HARMONIC,
    "isospectral": ISOSPECTRAL,
    "square_well": SQUARE_WELL,
    "harmonic_limit": HARMONIC_LIMIT,
    "square_well_limit": SQUARE_WELL_LIMIT,
}

M_MIN = 1e-10
WALL_DELTA = 1e-12

# kernel status codes
OK = 0
SINGULAR = 1
ESCAPED = 2


class Point2(NamedTuple):
    x: float
    y: float


@dataclass(frozen=True)
class FieldModel:
    """Immutable description of one velocity field.

    For the limit variants ``a0`` and ``a1`` hold the ratios r0, r1.
    ``lam`` and ``mu`` are only meaningful for ``isospectral``.
    """

    kind: str
    a0: float
    a1: float
    lam: float = math.inf
    mu: float = math.inf

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown field kind {self.kind!r}")
        object.__setattr__(self, "a0", float(self.a0))
        object.__setattr__(self, "a1", float(self.a1))
        if not (math.isfinite(self.a0) and math.isfinite(self.a1)):
            raise ValueError("a0 and a1 must be finite")
        if self.is_limit:
            if self.a0 * self.a1 == 0.0:
                raise ValueError("limit fields need r0 * r1 != 0")
        elif self.a0 == 0.0 and self.a1 == 0.0:
            raise ValueError("(a0, a1) = (0, 0) gives a stationary state")
        if self.kind == "isospectral":
            object.__setattr__(self, "lam", susy.check_deformation(self.lam))
            object.__setattr__(self, "mu", susy.check_deformation(self.mu))

    # constructors mirroring the figure captions
    @classmethod
    def harmonic(cls, a0, a1):
        return cls("harmonic", a0, a1)

    @classmethod
    def isospectral(cls, a0, a1, lam, mu):
        return cls("isospectral", a0, a1, float(lam), float(mu))

    @classmethod
    def square_well(cls, a0, a1):
        return cls("square_well", a0, a1)

    @classmethod
    def harmonic_limit(cls, r0, r1):
        return cls("harmonic_limit", r0, r1)

    @classmethod
    def square_well_limit(cls, r0, r1):
        return cls("square_well_limit", r0, r1)

    @property
    def code(self) -> int:
        return KINDS[self.kind]

    @property
    def is_limit(self) -> bool:
        return self.kind.endswith("_limit")

    @property
    def is_well(self) -> bool:
        return self.kind.startswith("square_well")

    @property
    def epsilon(self) -> float:
        return 1.5 if self.is_well else 1.0

    @property
    def strobe_period(self) -> float:
        return 2.0 * math.pi / self.epsilon

    def kernel_args(self):
        return (self.code, self.a0, self.a1, self.lam, self.mu, self.epsilon)

    def as_dict(self) -> dict:
        d = {"model": self.kind, "a0": self.a0, "a1": self.a1}
        if self.kind == "isospectral":
            d.update(lam=self.lam, mu=self.mu)
        return d


# ---------------------------------------------------------------- kernels


@njit(cache=True)
def _axis(kind, z, lam):
    """phi, phi', phi'' along one axis."""
    if kind == SQUARE_WELL or kind == SQUARE_WELL_LIMIT:
        c = math.cos(z)
        return c, -math.sin(z), -c
    if kind == ISOSPECTRAL and not math.isinf(lam):
        return susy._phi_hat(z, lam), susy._dphi_hat(z, lam), susy._d2phi_hat(z, lam)
    return z, 1.0, 0.0


@njit(cache=True)
def _outside(kind, x, y):
    if kind == SQUARE_WELL or kind == SQUARE_WELL_LIMIT:
        hi = math.pi - WALL_DELTA
        return not (WALL_DELTA <= x <= hi and WALL_DELTA <= y <= hi)
    return False


@njit(cache=True)
def field_kernel(kind, a0, a1, lam, mu, eps, x, y, t):
    """Return (vx, vy, status)."""
    if _outside(kind, x, y):
        return 0.0, 0.0, ESCAPED
    return raw_field_kernel(kind, a0, a1, lam, mu, eps, x, y, t)


@njit(cache=True)
def raw_field_kernel(kind, a0, a1, lam, mu, eps, x, y, t):
    """field_kernel without the square-well domain guard."""
    fx, dfx, _ = _axis(kind, x, lam)
    fy, dfy, _ = _axis(kind, y, mu)
    if kind == HARMONIC_LIMIT or kind == SQUARE_WELL_LIMIT:
        d = a0 * a0 * fx * fx + a1 * a1 * fy * fy
        if not d >= M_MIN:
            return 0.0, 0.0, SINGULAR
        k = a0 * a1 / d
        return -k * dfx * fy, k * dfy * fx, OK
    p = math.cos(eps * t) + a0 * fx
    q = math.sin(eps * t) + a1 * fy
    m = p * p + q * q
    if not m >= M_MIN:
        return 0.0, 0.0, SINGULAR
    return -a0 * dfx * q / m, a1 * dfy * p / m, OK


@njit(cache=True)
def divergence_kernel(kind, a0, a1, lam, mu, eps, x, y, t):
    """Return (div v, status) from closed-form partial derivatives."""
    if _outside(kind, x, y):
        return 0.0, ESCAPED
    fx, dfx, d2fx = _axis(kind, x, lam)
    fy, dfy, d2fy = _axis(kind, y, mu)
    if kind == HARMONIC_LIMIT or kind == SQUARE_WELL_LIMIT:
        d = a0 * a0 * fx * fx + a1 * a1 * fy * fy
        if not d >= M_MIN:
            return 0.0, SINGULAR
        k = a0 * a1
        dxx = -k * d2fx * fy / d + 2.0 * k * a0 * a0 * fx * dfx * dfx * fy / (d * d)
        dyy = k * d2fy * fx / d - 2.0 * k * a1 * a1 * fy * dfy * dfy * fx / (d * d)
        return dxx + dyy, OK
    p = math.cos(eps * t) + a0 * fx
    q = math.sin(eps * t) + a1 * fy
    m = p * p + q * q
    if not m >= M_MIN:
        return 0.0, SINGULAR
    lin = (-a0 * d2fx * q + a1 * d2fy * p) / m
    quad = 2.0 * p * q * (a0 * a0 * dfx * dfx - a1 * a1 * dfy * dfy) / (m * m)
    return lin + quad, OK


def _raise_for(status, x, y, t):
    if status == SINGULAR:
        raise SingularityEncountered(f"near-node evaluation at (x, y, t) = ({x!r}, {y!r}, {t!r})")
    if status == ESCAPED:
        raise DomainEscape(f"point ({x!r}, {y!r}) outside the square well at t={t!r}")


# ------------------------------------------------------------- public API


def velocity(model: FieldModel, p, t: float) -> tuple[float, float]:
    x, y = float(p[0]), float(p[1])
    vx, vy, status = field_kernel(*model.kernel_args(), x, y, float(t))
    _raise_for(status, x, y, t)
    return vx, vy


def divergence(model: FieldModel, p, t: float) -> float:
    x, y = float(p[0]), float(p[1])
    div, status = divergence_kernel(*model.kernel_args(), x, y, float(t))
    _raise_for(status, x, y, t)
    return div


def _harmonic_m(a, x, y, t):
    p = math.cos(t) + a * x
    q = math.sin(t) + a * y
    m = p * p + q * q
    if m <= 1e-300:
        raise SingularityEncountered(f"M vanishes at ({x!r}, {y!r}, {t!r})")
    return p, q, m


def integral_of_motion_C(a: float, p, t: float) -> float:
    """Conserved quantity of the harmonic field with a0 = a1 = a."""
    x, y = p
    _, _, m = _harmonic_m(a, x, y, t)
    return m - a * a * math.log(m) - 2.0 * a * (x * math.cos(t) + y * math.sin(t))


def stream_function_H(a: float, p, t: float) -> float:
    x, y = p
    _, _, m = _harmonic_m(a, x, y, t)
    return 0.5 * math.log(m)


def stream_function_gradient(a: float, p, t: float) -> tuple[float, float]:
    """(dH/dx, dH/dy) in closed form."""
    x, y = p
    pp, qq, m = _harmonic_m(a, x, y, t)
    return a * pp / m, a * qq / m


def well_invariant_delta(p) -> float:
    return math.sin(p[0]) * math.sin(p[1])


def check_probe(model: FieldModel, probe: str) -> None:
    if probe in ("C", "H"):
        if model.kind != "harmonic" or model.a0 != model.a1:
            raise IncompatibleProbe(f"probe {probe} needs a harmonic field with a0 = a1")
    elif probe == "Delta":
        if not model.is_well:
            raise IncompatibleProbe("probe Delta needs a square-well field")
    else:
        raise IncompatibleProbe(f"unknown probe {probe!r}")
