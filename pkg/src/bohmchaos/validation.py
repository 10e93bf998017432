"""Fast self-checks behind ``bohmchaos validate``.

Each check returns ``(ok, detail)``.  Horizons are cut down so the whole
suite stays well under a minute once the numba cache is warm.
"""
from __future__ import annotations

import math
import time

import numpy as np
from scipy import integrate as quad

from . import susy
from .analysis import lyapunov_benettin, stroboscopic_map
from .dynamics import IntegratorConfig, aligned_dt, integrate, propagate
from .fields import (FieldModel, divergence, integral_of_motion_C, raw_field_kernel, stream_function_gradient,
                     velocity, well_invariant_delta)

CHECKS = []


def check(fn):
    CHECKS.append(fn)
    return fn


def fd_divergence(model, p, t, h=1e-6):
    x, y = p
    vxp, _ = velocity(model, (x + h, y), t)
    vxm, _ = velocity(model, (x - h, y), t)
    _, vyp = velocity(model, (x, y + h), t)
    _, vym = velocity(model, (x, y - h), t)
    return (vxp - vxm) / (2 * h) + (vyp - vym) / (2 * h)


def five_point_d2(f, x, h):
    return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) / (12 * h * h)


@check
def cumulative_vs_quadrature():
    half, _ = quad.quad(lambda u: math.exp(-u * u) / math.sqrt(math.pi), 0.0, 1.0,
                        epsabs=1e-14, epsrel=1e-14)
    err = abs(susy.gaussian_cumulative(1.0) - (0.5 + half))
    return err <= 1e-12, f"|I(1) - quad| = {err:.2e}"


@check
def cumulative_monotone():
    # beyond x ~ 5.9 the value rounds to 1.0 in double precision
    xs = np.linspace(-8, 5, 2001)
    v = np.array([susy.gaussian_cumulative(x) for x in xs])
    ok = bool(np.all(np.diff(v) > 0) and v.min() > 0 and v.max() < 1)
    return ok, f"range ({v.min():.3e}, {1 - v.max():.3e} below 1)"


@check
def ground_normalization():
    worst = 0.0
    for lam in (1.0, 5.0, 20.0, -1.5):
        val, _ = quad.quad(lambda x: susy.isospectral_ground(x, lam) ** 2, -math.inf, math.inf,
                           epsabs=1e-13, epsrel=1e-13)
        worst = max(worst, abs(val - 1))
    return worst <= 1e-8, f"max |norm - 1| = {worst:.2e}"


@check
def excited_ratio_consistency():
    xs = np.linspace(-5, 5, 401)
    worst = 0.0
    for lam in (1.0, 2.0, 20.0):
        for x in xs:
            lhs = susy.isospectral_excited(susy.HARMONIC_FIRST, susy.HARMONIC_GROUND, lam, x)
            rhs = math.sqrt(2) * susy.phi_hat(x, lam) * susy.isospectral_ground(x, lam)
            worst = max(worst, abs(lhs - rhs))
    return worst <= 1e-8, f"max |psi1_hat - sqrt2 phi_hat psi0_hat| = {worst:.2e}"


@check
def schroedinger_residual():
    xs = np.arange(-6, 6 + 1e-9, 1e-3)
    h = 1e-3
    worst = 0.0
    for lam in (1.0, 5.0, 20.0):
        f = lambda x: susy.isospectral_ground(x, lam)  # noqa: E731
        for x in xs[::7]:
            r = -0.5 * five_point_d2(f, x, h) + (susy.deformed_potential(x, lam) - 0.5) * f(x)
            worst = max(worst, abs(r))
    return worst <= 1e-4, f"max residual = {worst:.2e}"


@check
def isospectral_limit():
    xs = np.linspace(-4, 4, 81)
    e1 = max(abs(susy.phi_hat(x, 1e8) - x) for x in xs)
    e2 = max(abs(susy.deformed_potential(x, 1e8) - x * x / 2) for x in xs)
    return max(e1, e2) < 1e-6, f"phi {e1:.1e}, V {e2:.1e}"


@check
def negative_branch_finite():
    xs = np.linspace(-4, 4, 81)
    vals = [f(x, -1.5) for x in xs for f in (susy.phi_hat, susy.deformed_potential, susy.isospectral_ground)]
    return bool(np.all(np.isfinite(vals))), "lambda = -1.5"


@check
def isospectral_to_harmonic():
    rng = np.random.default_rng(1)
    pts = rng.uniform(-2, 2, size=(50, 3))
    harm = FieldModel.harmonic(1.3, 0.7)
    sups = []
    for k in range(2, 9):
        iso = FieldModel.isospectral(1.3, 0.7, 10.0 ** k, 10.0 ** k)
        sups.append(max(np.hypot(*np.subtract(velocity(iso, p[:2], p[2]), velocity(harm, p[:2], p[2])))
                        for p in pts))
    ok = all(b < a for a, b in zip(sups, sups[1:])) and sups[-1] <= 1e-6
    return ok, f"sup errors {sups[0]:.1e} .. {sups[-1]:.1e}"


@check
def limit_circle_identity():
    rng = np.random.default_rng(2)
    m = FieldModel.harmonic_limit(1.015, 0.985)
    worst = 0.0
    for x, y in rng.uniform(-3, 3, size=(200, 2)):
        vx, vy = velocity(m, (x, y), 0.0)
        worst = max(worst, abs(2 * x * vx + 2 * y * vy))
    return worst <= 1e-14, f"max |d(r^2)/dt| = {worst:.1e}"


@check
def divergence_free_when_equal():
    rng = np.random.default_rng(3)
    samples = rng.uniform(-3, 3, size=(1000, 3))
    eq = max(abs(divergence(FieldModel.harmonic(1.4, 1.4), s[:2], s[2])) for s in samples)
    ne = max(abs(divergence(FieldModel.harmonic(2.03, 1.97), s[:2], s[2])) for s in samples)
    return eq <= 1e-14 and ne > 0, f"a0=a1: {eq:.1e}, a0!=a1: {ne:.1e}"


@check
def divergence_vs_finite_difference():
    rng = np.random.default_rng(4)
    models = [FieldModel.harmonic(2.03, 1.97), FieldModel.isospectral(0.8, 1.3, 20, 3),
              FieldModel.square_well(1.2, 0.7), FieldModel.harmonic_limit(1.015, 0.985),
              FieldModel.square_well_limit(1.1, 0.9)]
    worst = 0.0
    for m in models:
        lo, hi = (0.3, math.pi - 0.3) if m.is_well else (-2.0, 2.0)
        for _ in range(30):
            p = rng.uniform(lo, hi, size=2)
            t = rng.uniform(0, 10)
            try:
                exact = divergence(m, p, t)
                approx = fd_divergence(m, p, t)
            except ArithmeticError:
                continue
            worst = max(worst, abs(exact - approx) / max(1.0, abs(exact)))
    return worst <= 1e-6, f"max rel error = {worst:.1e}"


@check
def hamiltonian_structure():
    rng = np.random.default_rng(5)
    worst = 0.0
    for a in (0.5, 1.0, 2.0):
        m = FieldModel.harmonic(a, a)
        for x, y, t in rng.uniform(-3, 3, size=(100, 3)):
            vx, vy = velocity(m, (x, y), t)
            hx, hy = stream_function_gradient(a, (x, y), t)
            worst = max(worst, abs(vx + hy), abs(vy - hx))
    return worst <= 1e-10, f"max residual = {worst:.1e}"


@check
def well_boundary_tangency():
    worst = 0.0
    for kind in ("square_well", "square_well_limit"):
        m = FieldModel(kind, 1.3, 0.8)
        for s in np.linspace(0.2, 3.0, 15):
            for px, py in ((0.0, s), (math.pi, s), (s, 0.0), (s, math.pi)):
                vx, vy, _ = raw_field_kernel(*m.kernel_args(), px, py, 0.3)
                worst = max(worst, abs(vx) if px in (0.0, math.pi) else abs(vy))
    # sin(pi) is ~1.2e-16, not 0
    return worst <= 1e-15, f"max normal speed = {worst:.1e}"


@check
def axis_switch_off():
    rng = np.random.default_rng(6)
    worst = 0.0
    for x, y, t in rng.uniform(-2, 2, size=(200, 3)):
        worst = max(worst, abs(velocity(FieldModel.harmonic(0.0, 1.2), (x, y), t)[0]),
                    abs(velocity(FieldModel.harmonic(1.2, 0.0), (x, y), t)[1]))
    return worst == 0.0, "vx(a0=0) = vy(a1=0) = 0"


@check
def rk4_order():
    m = FieldModel.harmonic(1.0, 1.0)
    ref = np.array(propagate(m, (2.0, 0.0), 0.0, 1e-5, 1_000_000))
    e1 = np.linalg.norm(np.array(propagate(m, (2.0, 0.0), 0.0, 0.01, 1000, max_speed=0)) - ref)
    e2 = np.linalg.norm(np.array(propagate(m, (2.0, 0.0), 0.0, 0.005, 2000, max_speed=0)) - ref)
    r = e1 / e2
    return 12 <= r <= 20, f"error ratio = {r:.2f}"


@check
def time_reversal():
    m = FieldModel.harmonic(1.0, 1.0)
    q = propagate(m, (2.0, 0.0), 0.0, 1e-3, 10_000)
    b = propagate(m, q, 10.0, -1e-3, 10_000)
    err = math.hypot(b[0] - 2.0, b[1])
    return err <= 1e-8, f"return error = {err:.1e}"


@check
def c_conservation():
    m = FieldModel.harmonic(1.0, 1.0)
    rec = integrate(m, (2.0, 0.0), IntegratorConfig(1e-3, 1000.0, stride=10))
    c = np.array([integral_of_motion_C(1.0, (x, y), t) for t, x, y in zip(rec.t, rec.x, rec.y)])
    drift = float(np.max(np.abs(c - c[0])) / abs(c[0]))
    return rec.completed and drift <= 1e-6, f"relative C drift = {drift:.1e}"


@check
def delta_conservation():
    m = FieldModel.square_well_limit(1.0, 1.0)
    rec = integrate(m, (math.pi / 2, 1.0), IntegratorConfig(1e-3, 1000.0, stride=10))
    d = np.array([well_invariant_delta(p) for p in zip(rec.x, rec.y)])
    drift = float(np.max(np.abs(d - d[0])))
    return rec.completed and drift <= 1e-8, f"Delta drift = {drift:.1e}"


@check
def strobe_alignment():
    m = FieldModel.harmonic(2.03, 1.97)
    dt, n = aligned_dt(m.strobe_period, 1e-3)
    rec = integrate(m, (1.98, 0.0), IntegratorConfig(1e-3, 50 * m.strobe_period, strobe_align=True, stride=n))
    k = np.arange(len(rec.t))
    err = np.abs(rec.t - k * m.strobe_period)
    ok = n == 6283 and bool(np.all(err <= 1e-9 * (k + 1)))
    return ok, f"N = {n}, max |t - kT| = {err.max():.1e}"


@check
def strobe_count():
    m = FieldModel.harmonic_limit(1.015, 0.985)
    s = stroboscopic_map(m, (1.0, 0.0), 500.0, 1e-3)
    k = math.floor(500.0 / (2 * math.pi))
    r = np.abs(np.hypot(s.points[:, 0], s.points[:, 1]) ** 2 - 1)
    return len(s) == k and r.max() <= 1e-6, f"K = {len(s)} (expected {k}), circle error {r.max():.1e}"


@check
def lyapunov_discrimination():
    chaos = lyapunov_benettin(FieldModel.harmonic(2.03, 1.97), (1.98, 0.0), 3000.0)
    regular = lyapunov_benettin(FieldModel.harmonic(1.0, 1.0), (1.98, 0.0), 3000.0)
    ok = chaos.reliable and chaos.lambda_max > 5 * regular.lambda_max
    return ok, f"chaotic {chaos.lambda_max:.4f} vs integrable {regular.lambda_max:.4f}"


@check
def determinism():
    m = FieldModel.isospectral(0.5, 0.5, 20, 20)
    cfg = IntegratorConfig(5e-3, 200.0, stride=50)
    a = integrate(m, (1.98, 0.0), cfg)
    b = integrate(m, (1.98, 0.0), cfg)
    ok = np.array_equal(a.x, b.x) and np.array_equal(a.y, b.y)
    return ok, "bit-identical repeat"


def run_all():
    results = []
    for fn in CHECKS:
        start = time.perf_counter()
        try:
            ok, detail = fn()
        except Exception as exc:
            ok, detail = False, f"raised {type(exc).__name__}: {exc}"
        results.append((fn.__name__, bool(ok), f"{detail} ({time.perf_counter() - start:.2f}s)"))
    return results
