import numpy as np
import pytest
from scipy.integrate import quad, trapezoid

from costcx import ConfigError
from costcx.cost_core import argmin_total
from costcx.exp_kde import (
    DEFAULT_TARGET,
    ReconstructionConfig,
    TargetFunction1D,
    gaussian_kernel,
    reconstruct,
    sweep_raw,
    sweep_samples,
)


def test_default_target_is_density():
    mass, _ = quad(DEFAULT_TARGET, -5, 5)
    assert mass == pytest.approx(1.0, abs=1e-4)


@pytest.mark.parametrize("sigma", [0.005, 0.1, 2.0])
def test_kernel_mass(sigma):
    u = np.linspace(-8 * sigma, 8 * sigma, 20001)
    mass = trapezoid(gaussian_kernel(u, sigma), u)
    assert 0.999 <= mass <= 1.001


def test_more_samples_less_error():
    assert reconstruct(n_samples=10_000).quadratic_error < reconstruct(n_samples=10).quadratic_error


def test_error_convergence_chain():
    e = [reconstruct(n_samples=n).quadratic_error for n in (10, 100, 2000)]
    assert e[2] < e[1] < e[0]


def test_dense_single_gaussian():
    target = TargetFunction1D(((1.0, 0.0, 1.0),), (-5.0, 5.0))
    cfg = ReconstructionConfig(grid_points=2048, bandwidth_factor=0.5)
    rec = reconstruct(target, 2048, cfg)
    norm2 = float(np.sum(rec.target**2) * 10 / 2047)
    assert rec.quadratic_error < 1e-3 * norm2


def test_two_samples_on_flat_target():
    target = TargetFunction1D(((1.0, 0.0, 100.0),), (-5.0, 5.0))
    rec = reconstruct(target, 2, ReconstructionConfig())
    level = rec.target.mean()
    assert np.all(np.abs(rec.estimate - level) < 0.1 * level)
    norm2 = float(np.sum(rec.target**2) * 10 / 2047)
    assert rec.quadratic_error < 0.01 * norm2


def test_deterministic_mode_ignores_seed():
    a = reconstruct(n_samples=123, cfg=ReconstructionConfig(seed=1))
    b = reconstruct(n_samples=123, cfg=ReconstructionConfig(seed=999))
    assert np.array_equal(a.estimate, b.estimate)
    assert a.quadratic_error == b.quadratic_error


def test_random_draw_mode_seeded():
    cfg = ReconstructionConfig(mode="random_draw", seed=5)
    a = reconstruct(n_samples=400, cfg=cfg)
    b = reconstruct(n_samples=400, cfg=cfg)
    c = reconstruct(n_samples=400, cfg=ReconstructionConfig(mode="random_draw", seed=6))
    assert a.quadratic_error == b.quadratic_error
    assert a.quadratic_error != c.quadratic_error
    mass = np.sum(a.estimate) * 10 / 2047
    assert mass == pytest.approx(1.0, abs=0.02)


def test_random_draw_improves_with_samples():
    cfg = ReconstructionConfig(mode="random_draw", seed=3, bandwidth_factor=20.0)
    assert reconstruct(n_samples=5000, cfg=cfg).quadratic_error < reconstruct(n_samples=50, cfg=cfg).quadratic_error


def test_grid_refinement_consistency():
    e1 = reconstruct(n_samples=500).quadratic_error
    e2 = reconstruct(n_samples=500, cfg=ReconstructionConfig(grid_points=4096)).quadratic_error
    assert abs(e2 - e1) / e1 < 0.01


def test_sweep_channels():
    ns = [10, 50, 100, 200, 400, 800]
    raw = sweep_raw(DEFAULT_TARGET, ReconstructionConfig(), ns)
    assert raw.modeling == [float(n) for n in ns]
    assert all(b < a for a, b in zip(raw.operation, raw.operation[1:]))
    ops = sweep_raw(DEFAULT_TARGET, ReconstructionConfig(), ns, cost_model="operations")
    assert ops.modeling == [float(n * 2048) for n in ns]
    norm = sweep_samples(n_values=ns)
    assert norm.normalized
    assert min(norm.modeling) == 0.0 and max(norm.modeling) == 1.0
    assert argmin_total(norm).interior


def test_sweep_preconditions():
    with pytest.raises(ConfigError):
        sweep_samples(n_values=[10, 20])
    with pytest.raises(ConfigError):
        sweep_samples(n_values=[10, 30, 20])
    with pytest.raises(ConfigError):
        sweep_samples(n_values=[10, 20, 30], cost_model="runtime")


@pytest.mark.parametrize(
    "kwargs", [dict(grid_points=32), dict(bandwidth_factor=0.0), dict(mode="adaptive")]
)
def test_config_validation(kwargs):
    with pytest.raises(ConfigError):
        ReconstructionConfig(**kwargs)


def test_too_few_samples():
    with pytest.raises(ConfigError):
        reconstruct(n_samples=1)


def test_target_validation():
    with pytest.raises(ConfigError):
        TargetFunction1D(((1.0, 0.0, -1.0),), (-1, 1))
    with pytest.raises(ConfigError):
        TargetFunction1D(((1.0, 0.0, 1.0),), (1, -1))
