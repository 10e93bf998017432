"""Fixed-step RK4 integration of the non-autonomous planar fields.

Time is always reconstructed as ``t0 + i * dt`` from an integer step
counter. A step whose stages exceed ``max_speed`` is retried as 2, 4, ...
64 equal substeps; the substep of size h is accepted once every stage
speed satisfies ``|v| * h <= max_speed * dt``.  Failing that at dt/64 the
run stops with a singularity.  Setting ``max_speed`` to 0 or inf turns
refinement off.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .errors import DomainEscape, SingularityEncountered
from .fields import ESCAPED, OK, SINGULAR, FieldModel, Point2, field_kernel

MAX_HALVINGS = 6

TERMINATIONS = {OK: "completed", SINGULAR: "singularity", ESCAPED: "domain_escape"}


@dataclass(frozen=True)
class IntegratorConfig:
    dt_requested: float
    t_end: float
    strobe_align: bool = False
    max_speed: float = 1e3
    stride: int = 1

    def __post_init__(self):
        if not self.dt_requested > 0:
            raise ValueError("dt_requested must be positive")
        if not self.t_end > 0:
            raise ValueError("t_end must be positive")
        if self.stride < 1:
            raise ValueError("stride must be >= 1")
        if self.max_speed < 0:
            raise ValueError("max_speed must be >= 0")


@dataclass
class TrajectoryRecord:
    t: np.ndarray
    x: np.ndarray
    y: np.ndarray
    dt_actual: float
    termination: str = "completed"
    fail_step: int | None = None
    fail_time: float | None = None
    meta: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.t)

    @property
    def completed(self) -> bool:
        return self.termination == "completed"

    @property
    def samples(self):
        return [(t, Point2(x, y)) for t, x, y in zip(self.t, self.x, self.y)]


# ---------------------------------------------------------------- kernels


@njit(cache=True)
def _rk4(kind, a0, a1, lam, mu, eps, x, y, t, h):
    """One classical RK4 step; returns (x', y', status, max stage speed)."""
    k1x, k1y, s = field_kernel(kind, a0, a1, lam, mu, eps, x, y, t)
    if s != OK:
        return x, y, s, 0.0
    th = t + 0.5 * h
    k2x, k2y, s = field_kernel(kind, a0, a1, lam, mu, eps, x + 0.5 * h * k1x, y + 0.5 * h * k1y, th)
    if s != OK:
        return x, y, s, 0.0
    k3x, k3y, s = field_kernel(kind, a0, a1, lam, mu, eps, x + 0.5 * h * k2x, y + 0.5 * h * k2y, th)
    if s != OK:
        return x, y, s, 0.0
    k4x, k4y, s = field_kernel(kind, a0, a1, lam, mu, eps, x + h * k3x, y + h * k3y, t + h)
    if s != OK:
        return x, y, s, 0.0
    v2 = max(k1x * k1x + k1y * k1y, k2x * k2x + k2y * k2y, k3x * k3x + k3y * k3y, k4x * k4x + k4y * k4y)
    nx = x + h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
    ny = y + h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
    return nx, ny, OK, math.sqrt(v2)


@njit(cache=True)
def _step(kind, a0, a1, lam, mu, eps, x, y, t, dt, max_speed):
    """Advance t -> t + dt with the step-halving ladder; returns (x', y', status)."""
    refine = max_speed > 0.0 and not math.isinf(max_speed)
    level = 0
    while True:
        n = 1 << level
        h = dt / n
        cx = x
        cy = y
        status = OK
        for j in range(n):
            nx, ny, status, vmax = _rk4(kind, a0, a1, lam, mu, eps, cx, cy, t + j * h, h)
            if status != OK:
                break
            if refine and vmax > max_speed * n:
                status = SINGULAR
                break
            cx = nx
            cy = ny
        if status == OK:
            return cx, cy, OK
        if not refine or level == MAX_HALVINGS:
            return x, y, status
        level += 1


@njit(cache=True)
def _integrate(kind, a0, a1, lam, mu, eps, x0, y0, t0, dt, nsteps, stride, max_speed, out):
    """Fill ``out`` with (t, x, y) every ``stride`` steps.

    Returns (rows written, status, failing step index).
    """
    x = x0
    y = y0
    out[0, 0] = t0
    out[0, 1] = x
    out[0, 2] = y
    rows = 1
    for i in range(nsteps):
        t = t0 + i * dt
        x, y, status = _step(kind, a0, a1, lam, mu, eps, x, y, t, dt, max_speed)
        if status != OK:
            return rows, status, i
        if (i + 1) % stride == 0:
            out[rows, 0] = t0 + (i + 1) * dt
            out[rows, 1] = x
            out[rows, 2] = y
            rows += 1
    return rows, OK, -1


# ------------------------------------------------------------- public API


def _raise_status(status, what):
    if status == SINGULAR:
        raise SingularityEncountered(what)
    if status == ESCAPED:
        raise DomainEscape(what)


def rk4_step(model: FieldModel, p, t: float, dt: float) -> Point2:
    """Plain RK4 update without refinement."""
    nx, ny, status, _ = _rk4(*model.kernel_args(), float(p[0]), float(p[1]), float(t), float(dt))
    _raise_status(status, f"RK4 stage failed from {tuple(p)} at t={t!r}")
    return Point2(nx, ny)


def propagate(model: FieldModel, p, t0: float, dt: float, nsteps: int, max_speed: float = 1e3) -> Point2:
    """Final point after ``nsteps`` steps of signed size ``dt``."""
    out = np.empty((2, 3))
    rows, status, i = _integrate(*model.kernel_args(), float(p[0]), float(p[1]), float(t0), float(dt),
                                 int(nsteps), max(int(nsteps), 1), float(max_speed), out)
    _raise_status(status, f"integration stopped at step {i}")
    return Point2(out[rows - 1, 1], out[rows - 1, 2])


def step_count(t_end: float, dt: float) -> int:
    """Number of whole steps of size dt within t_end (tolerant to rounding)."""
    q = t_end / dt
    n = round(q)
    if abs(q - n) <= 1e-9 * max(1.0, q):
        return int(n)
    return int(math.floor(q))


def aligned_dt(period: float, dt_requested: float) -> tuple[float, int]:
    """(dt_actual, steps per period) so strobe instants land on the grid."""
    n = max(1, round(period / dt_requested))
    return period / n, n


def integrate(model: FieldModel, p0, cfg: IntegratorConfig) -> TrajectoryRecord:
    """Uniform-step RK4 trajectory; failures end the record early."""
    if cfg.strobe_align:
        dt, _ = aligned_dt(model.strobe_period, cfg.dt_requested)
    else:
        dt = cfg.dt_requested
    nsteps = step_count(cfg.t_end, dt)
    out = np.empty((nsteps // cfg.stride + 1, 3))
    rows, status, fail = _integrate(*model.kernel_args(), float(p0[0]), float(p0[1]), 0.0, dt,
                                    nsteps, cfg.stride, float(cfg.max_speed), out)
    rec = TrajectoryRecord(out[:rows, 0].copy(), out[:rows, 1].copy(), out[:rows, 2].copy(), dt,
                           TERMINATIONS[status])
    if status != OK:
        rec.fail_step = int(fail)
        rec.fail_time = fail * dt
    return rec
