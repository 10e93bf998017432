"""Diagnostics built on top of the integrator: stroboscopic sections,
Benettin estimates of the largest Lyapunov exponent, the time-averaged
divergence and drift of conserved quantities."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from . import fields
from .dynamics import TERMINATIONS, IntegratorConfig, TrajectoryRecord, _step, aligned_dt, integrate, step_count
from .fields import OK, FieldModel, divergence_kernel


@dataclass
class StrobeMap:
    points: np.ndarray  # shape (K, 2), state at t = k T for k = 1..K
    period: float
    params: dict
    dt_actual: float
    termination: str = "completed"

    def __len__(self):
        return len(self.points)


@dataclass
class LyapunovEstimate:
    lambda_max: float
    running: np.ndarray  # shape (K, 2): (t, partial lambda)
    d0: float
    renorm_interval: float
    termination: str = "completed"

    @property
    def reliable(self) -> bool:
        return self.termination == "completed" and len(self.running) > 0

    @property
    def tail_spread(self) -> float:
        """Peak-to-peak of the running estimate over its last 10%."""
        if len(self.running) == 0:
            return math.nan
        tail = self.running[-max(1, len(self.running) // 10):, 1]
        return float(tail.max() - tail.min())


@dataclass
class DivergenceAverage:
    value: float
    t_total: float
    termination: str = "completed"


def stroboscopic_map(model: FieldModel, p0, t_end: float, dt: float,
                     max_speed: float = 1e3) -> StrobeMap:
    period = model.strobe_period
    if t_end < period:
        raise ValueError("t_end shorter than one strobe period")
    dt_actual, per = aligned_dt(period, dt)
    k = int(math.floor(t_end / period + 1e-12))
    cfg = IntegratorConfig(dt_actual, k * period, max_speed=max_speed, stride=per)
    rec = integrate(model, p0, cfg)
    pts = np.column_stack([rec.x[1:], rec.y[1:]])
    return StrobeMap(pts, period, model.as_dict(), dt_actual, rec.termination)


@njit(cache=True)
def _benettin(kind, a0, a1, lam, mu, eps, x0, y0, dt, per_block, nblocks, d0, max_speed, running):
    x = x0
    y = y0
    xc = x0 + d0
    yc = y0
    total = 0.0
    i = 0
    for k in range(nblocks):
        for _ in range(per_block):
            t = i * dt
            x, y, s = _step(kind, a0, a1, lam, mu, eps, x, y, t, dt, max_speed)
            if s != OK:
                return k, s
            xc, yc, s = _step(kind, a0, a1, lam, mu, eps, xc, yc, t, dt, max_speed)
            if s != OK:
                return k, s
            i += 1
        dx = xc - x
        dy = yc - y
        d = math.sqrt(dx * dx + dy * dy)
        if d == 0.0:
            # companion collapsed onto the reference; restart along x
            dx = d0
            dy = 0.0
            d = d0
            total += math.log(1e-300 / d0)
        else:
            total += math.log(d / d0)
        xc = x + d0 * dx / d
        yc = y + d0 * dy / d
        running[k] = total
    return nblocks, OK


def lyapunov_benettin(model: FieldModel, p0, t_end: float, dt: float = 1e-3, d0: float = 1e-9,
                      renorm_interval: float = 1.0, max_speed: float = 1e3) -> LyapunovEstimate:
    """Two-trajectory Benettin estimate of the largest Lyapunov exponent.

    The companion starts at p0 + (d0, 0) and is pulled back to distance d0
    along the current separation every ``renorm_interval`` time units.
    """
    if not 0 < d0 < 1:
        raise ValueError("d0 must be small and positive")
    per = round(renorm_interval / dt)
    if per < 1 or abs(per * dt - renorm_interval) > 1e-9 * renorm_interval:
        raise ValueError("renorm_interval must be a multiple of dt")
    nblocks = int(math.floor(t_end / renorm_interval + 1e-12))
    sums = np.zeros(nblocks)
    done, status = _benettin(*model.kernel_args(), float(p0[0]), float(p0[1]), float(dt), per,
                             nblocks, float(d0), float(max_speed), sums)
    tk = renorm_interval * np.arange(1, done + 1)
    running = np.column_stack([tk, sums[:done] / tk])
    lam_max = float(running[-1, 1]) if done else math.nan
    return LyapunovEstimate(lam_max, running, d0, renorm_interval, TERMINATIONS[status])


@njit(cache=True)
def _div_average(kind, a0, a1, lam, mu, eps, x0, y0, dt, nsteps, max_speed):
    x = x0
    y = y0
    f, s = divergence_kernel(kind, a0, a1, lam, mu, eps, x, y, 0.0)
    if s != OK:
        return 0.0, 0, s
    acc = 0.5 * f
    for i in range(nsteps):
        x, y, s = _step(kind, a0, a1, lam, mu, eps, x, y, i * dt, dt, max_speed)
        if s != OK:
            return acc - 0.5 * f, i, s
        fn, s = divergence_kernel(kind, a0, a1, lam, mu, eps, x, y, (i + 1) * dt)
        if s != OK:
            return acc - 0.5 * f, i, s
        f = fn
        acc += f
    return acc - 0.5 * f, nsteps, OK


def divergence_time_average(model: FieldModel, p0, t_end: float, dt: float,
                            max_speed: float = 1e3) -> DivergenceAverage:
    """Trapezoidal (1/T) * integral of div v along the trajectory from p0."""
    n = step_count(t_end, dt)
    acc, done, status = _div_average(*model.kernel_args(), float(p0[0]), float(p0[1]), float(dt),
                                     n, float(max_speed))
    t_total = done * dt
    value = acc * dt / t_total if t_total > 0 else math.nan
    return DivergenceAverage(value, t_total, TERMINATIONS[status])


def _probe_values(model: FieldModel, probe: str, traj: TrajectoryRecord) -> np.ndarray:
    t, x, y = traj.t, traj.x, traj.y
    if probe == "C":
        a = model.a0
        m = (np.cos(t) + a * x) ** 2 + (np.sin(t) + a * y) ** 2
        return m - a * a * np.log(m) - 2 * a * (x * np.cos(t) + y * np.sin(t))
    if probe == "H":
        # H itself is time dependent; what is conserved is the
        # Hamiltonian structure, so report the worst residual instead
        res = np.empty(len(t))
        for i in range(len(t)):
            vx, vy = fields.velocity(model, (x[i], y[i]), t[i])
            hx, hy = fields.stream_function_gradient(model.a0, (x[i], y[i]), t[i])
            res[i] = max(abs(vx + hy), abs(vy - hx))
        return res
    return np.sin(x) * np.sin(y)


def invariant_drift(model: FieldModel, probe: str, traj: TrajectoryRecord) -> float:
    """max |Q(t) - Q(0)| / max(|Q(0)|, 1e-12) along a stored trajectory.

    ``probe`` is ``"C"``, ``"H"`` (a0 = a1 harmonic only) or ``"Delta"``
    (square-well variants).
    """
    fields.check_probe(model, probe)
    q = _probe_values(model, probe, traj)
    if probe == "H":
        return float(q.max())
    return float(np.max(np.abs(q - q[0])) / max(abs(q[0]), 1e-12))
