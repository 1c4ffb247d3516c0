import math

import numpy as np
import pytest

from costcx import ConfigError, DomainError
from costcx.measures import TrajectoryPair, iterate_map_pair, largest_lyapunov
from costcx.measures.lyapunov import logistic_lyapunov_oracle


def constructed_pair(rate, n=50, d0=1e-8):
    t = np.arange(n, dtype=float)
    a = np.zeros(n)
    return TrajectoryPair(a, a + d0 * np.exp(rate * t))


def test_logistic_r4_renormalized():
    pair = iterate_map_pair("logistic", 4.0, 0.3, 1e-9, 100_000, renormalize=True)
    lam = largest_lyapunov(pair)
    assert lam == pytest.approx(math.log(2), abs=0.02)
    assert logistic_lyapunov_oracle(4.0, 0.3, 100_000) == pytest.approx(math.log(2), abs=0.02)


def test_accumulated_growth_per_step():
    pair = iterate_map_pair("logistic", 4.0, 0.3, 1e-9, 100_000, renormalize=True)
    per_step = pair.log_growth[-1] / 100_000
    assert per_step == pytest.approx(logistic_lyapunov_oracle(4.0, 0.3, 100_000), abs=0.02)


def test_logistic_stable_fixed_point_negative():
    pair = iterate_map_pair("logistic", 2.5, 0.3, 1e-9, 2000, renormalize=True)
    assert largest_lyapunov(pair) < 0


@pytest.mark.parametrize("rate", [0.5, 0.1, -1.0, -0.25])
def test_constructed_exponential_separation(rate):
    assert largest_lyapunov(constructed_pair(rate)) == pytest.approx(rate, abs=1e-6)


def test_contracting_pair_negative():
    assert largest_lyapunov(constructed_pair(-1.0)) < 0


def test_identical_after_one_differing_step():
    t = np.arange(40, dtype=float)
    a = np.full(40, 0.5)
    b = a.copy()
    b[1:] = a[1:] + 1e-9 * np.exp(0.5 * t[1:])
    assert largest_lyapunov(TrajectoryPair(a, b), fit_start=1) == pytest.approx(0.5, abs=1e-6)


def test_zero_separation_is_domain_error():
    a = np.linspace(0, 1, 10)
    with pytest.raises(DomainError, match="renormalized"):
        largest_lyapunov(TrajectoryPair(a, a))


def test_range_closure():
    pair = iterate_map_pair("logistic", 4.0, 0.3, 1e-9, 1000, renormalize=False)
    assert len(pair) == 1001
    assert np.all((pair.series_a >= 0) & (pair.series_a <= 1))
    assert np.all((pair.series_b >= 0) & (pair.series_b <= 1))


def test_r_zero_collapses():
    pair = iterate_map_pair("logistic", 0.0, 0.3, 1e-9, 20, renormalize=False)
    assert np.all(pair.series_a[1:] == 0.0)
    assert np.all(pair.series_b[1:] == 0.0)


def test_vector_states():
    a = np.zeros((30, 3))
    b = np.zeros((30, 3))
    b[:, 0] = 3e-9 * np.exp(0.2 * np.arange(30))
    b[:, 2] = 4e-9 * np.exp(0.2 * np.arange(30))
    assert largest_lyapunov(TrajectoryPair(a, b)) == pytest.approx(0.2, abs=1e-9)


@pytest.mark.parametrize(
    "kwargs",
    [dict(x0=0.0), dict(x0=1.0), dict(delta0=1e-3), dict(delta0=0.0), dict(steps=5), dict(map_id="henon")],
)
def test_iterate_preconditions(kwargs):
    with pytest.raises(ConfigError):
        iterate_map_pair(**kwargs)


def test_escape_is_domain_error():
    with pytest.raises(DomainError):
        iterate_map_pair("logistic", 4.5, 0.3, 1e-9, 100)


def test_dt_scales_rate():
    pair = constructed_pair(0.5)
    slow = TrajectoryPair(pair.series_a, pair.series_b, dt=2.0)
    assert largest_lyapunov(slow) == pytest.approx(0.25, abs=1e-6)
