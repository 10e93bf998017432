import math

import numpy as np
import pytest

from bohmchaos.analysis import (divergence_time_average, invariant_drift, lyapunov_benettin,
                                stroboscopic_map)
from bohmchaos.dynamics import IntegratorConfig, integrate
from bohmchaos.errors import IncompatibleProbe
from bohmchaos.fields import FieldModel

CHAOTIC = FieldModel.harmonic(2.03, 1.97)
REGULAR = FieldModel.harmonic(1.0, 1.0)
SEED = (1.98, 0.0)


def test_strobe_count_and_period():
    m = FieldModel.harmonic_limit(1.015, 0.985)
    s = stroboscopic_map(m, (1.0, 0.0), 1000.0, 1e-3)
    assert len(s) == math.floor(1000 / (2 * math.pi))
    assert s.period == pytest.approx(2 * math.pi)
    assert np.all(np.abs(s.points[:, 0] ** 2 + s.points[:, 1] ** 2 - 1) <= 1e-6)
    w = stroboscopic_map(FieldModel.square_well(2.0, 2.0), (1.5, 1.2), 100.0, 1e-3)
    assert w.period == pytest.approx(4 * math.pi / 3)
    assert len(w) == math.floor(100 / (4 * math.pi / 3))


def test_strobe_points_match_direct_integration():
    s = stroboscopic_map(CHAOTIC, SEED, 20 * math.pi, 1e-3)
    rec = integrate(CHAOTIC, SEED, IntegratorConfig(1e-3, 20 * math.pi, strobe_align=True))
    n = round(2 * math.pi / 1e-3)
    assert np.array_equal(s.points[:, 0], rec.x[n::n])
    assert np.array_equal(s.points[:, 1], rec.y[n::n])


def test_strobe_rejects_short_horizon():
    with pytest.raises(ValueError):
        stroboscopic_map(CHAOTIC, SEED, 1.0, 1e-3)


def test_strobe_partial_on_singularity():
    s = stroboscopic_map(CHAOTIC, (-1 / 2.03, 0.0), 100.0, 1e-3)
    assert s.termination == "singularity"
    assert len(s) == 0


def test_lyapunov_series_shape():
    est = lyapunov_benettin(CHAOTIC, SEED, 50.0, 1e-3, renorm_interval=0.5)
    assert est.running.shape == (100, 2)
    assert est.running[-1, 0] == pytest.approx(50.0)
    assert est.lambda_max == est.running[-1, 1]
    assert est.reliable
    with pytest.raises(ValueError):
        lyapunov_benettin(CHAOTIC, SEED, 50.0, 1e-3, renorm_interval=0.00125)
    with pytest.raises(ValueError):
        lyapunov_benettin(CHAOTIC, SEED, 50.0, 1e-3, d0=0.0)


def test_lyapunov_on_linear_shear_is_zero():
    # a0 = 1, a1 = 0: vy = 0 and x rotates with a y-independent rate, so
    # separations along x stay bounded
    est = lyapunov_benettin(FieldModel.harmonic(1.0, 0.0), (0.5, 0.3), 500.0)
    assert abs(est.lambda_max) < 0.02


def test_lyapunov_unreliable_when_singular():
    est = lyapunov_benettin(CHAOTIC, (-1 / 2.03, 0.0), 10.0)
    assert not est.reliable
    assert math.isnan(est.lambda_max)


def test_lyapunov_regular_decreases():
    short = lyapunov_benettin(REGULAR, SEED, 1e4)
    long = lyapunov_benettin(REGULAR, SEED, 5e4)
    assert long.lambda_max < short.lambda_max
    assert long.lambda_max < 5e-3


def test_lyapunov_robust_to_d0_and_interval():
    base = lyapunov_benettin(CHAOTIC, SEED, 2e4, d0=1e-9)
    for kw in (dict(d0=1e-8), dict(d0=1e-10), dict(renorm_interval=0.5), dict(renorm_interval=2.0)):
        other = lyapunov_benettin(CHAOTIC, SEED, 2e4, **kw)
        assert abs(other.lambda_max - base.lambda_max) < 0.2 * base.lambda_max, kw


def test_divergence_average_zero_when_integrable():
    d = divergence_time_average(REGULAR, (2.0, 0.0), 100.0, 1e-3)
    assert d.t_total == pytest.approx(100.0)
    assert abs(d.value) <= 1e-12


def test_divergence_average_decays_isospectral():
    m = FieldModel.isospectral(0.5, 0.5, 20, 20)
    short = divergence_time_average(m, SEED, 5e3, 5e-3)
    long = divergence_time_average(m, SEED, 5e4, 5e-3)
    assert long.termination == "completed"
    assert abs(long.value) < abs(short.value)
    # regression values from the first oracle run
    assert abs(short.value) < 1e-4 and abs(long.value) < 1e-5


def test_divergence_average_chaotic_bound():
    d = divergence_time_average(CHAOTIC, SEED, 5e4, 1e-3)
    assert d.termination == "completed"
    assert abs(d.value) <= 0.01


def test_divergence_average_matches_log_jacobian_oracle():
    # (1/T) ln det J over the flow equals the mean divergence; estimate the
    # Jacobian from a small square of neighbours
    m = FieldModel.harmonic(2.03, 1.97)
    T, h = 20.0, 1e-6
    p = np.array([1.98, 0.0])
    from bohmchaos.dynamics import propagate
    cx = (np.array(propagate(m, p + [h, 0], 0, 1e-3, 20000)) - propagate(m, p - [h, 0], 0, 1e-3, 20000)) / (2 * h)
    cy = (np.array(propagate(m, p + [0, h], 0, 1e-3, 20000)) - propagate(m, p - [0, h], 0, 1e-3, 20000)) / (2 * h)
    logdet = math.log(abs(cx[0] * cy[1] - cx[1] * cy[0]))
    d = divergence_time_average(m, p, T, 1e-3)
    assert d.value == pytest.approx(logdet / T, abs=1e-4)


def test_invariant_drift_probes():
    rec = integrate(REGULAR, (2.0, 0.0), IntegratorConfig(1e-3, 1e4, stride=100))
    assert invariant_drift(REGULAR, "C", rec) <= 1e-6
    assert invariant_drift(REGULAR, "H", rec) <= 1e-10
    lim = FieldModel.square_well_limit(1.0, 1.0)
    rec = integrate(lim, (math.pi / 2, 1.0), IntegratorConfig(1e-3, 2000.0, stride=100))
    assert invariant_drift(lim, "Delta", rec) <= 1e-8
    with pytest.raises(IncompatibleProbe):
        invariant_drift(CHAOTIC, "C", rec)
    with pytest.raises(IncompatibleProbe):
        invariant_drift(REGULAR, "Delta", rec)


def test_invariant_drift_finite_well():
    m = FieldModel.square_well(-100.0, -100.0)
    rec = integrate(m, (math.pi / 2, math.pi / 2 - 0.3), IntegratorConfig(1e-3, 5e4, stride=200))
    assert rec.completed
    assert invariant_drift(m, "Delta", rec) <= 1e-2
