"""Largest Lyapunov exponent from a pair of nearby trajectories."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError, DomainError


@dataclass(frozen=True)
class TrajectoryPair:
    """Two trajectories sampled every `dt`.

    In renormalized runs `log_growth[t]` is the cumulative log of the
    separation growth relative to `delta0`, since the raw separation is
    reset every step and no longer carries the history.
    """

    series_a: np.ndarray
    series_b: np.ndarray
    dt: float = 1.0
    log_growth: np.ndarray | None = None
    delta0: float | None = None

    def __post_init__(self):
        a = np.atleast_1d(np.asarray(self.series_a, dtype=float))
        b = np.atleast_1d(np.asarray(self.series_b, dtype=float))
        if a.shape != b.shape:
            raise ConfigError(f"trajectory shapes differ: {a.shape} vs {b.shape}")
        if len(a) < 2:
            raise ConfigError("trajectories need at least 2 samples")
        if not self.dt > 0:
            raise ConfigError("dt must be positive")
        object.__setattr__(self, "series_a", a)
        object.__setattr__(self, "series_b", b)
        if self.log_growth is not None:
            object.__setattr__(self, "log_growth", np.asarray(self.log_growth, dtype=float))

    def __len__(self):
        return len(self.series_a)

    def separations(self) -> np.ndarray:
        d = self.series_b - self.series_a
        if d.ndim == 1:
            return np.abs(d)
        return np.linalg.norm(d.reshape(len(d), -1), axis=1)


def largest_lyapunov(pair: TrajectoryPair, fit_start: int = 0, fit_stop: int | None = None) -> float:
    """Slope of ln|D(t)| against t over samples [fit_start, fit_stop)."""
    n = len(pair)
    stop = n if fit_stop is None else fit_stop
    if not 0 <= fit_start < stop <= n or stop - fit_start < 2:
        raise ConfigError(f"fit window [{fit_start}, {stop}) invalid for {n} samples")
    t = np.arange(n, dtype=float)[fit_start:stop] * pair.dt
    if pair.log_growth is not None:
        y = pair.log_growth[fit_start:stop]
    else:
        sep = pair.separations()[fit_start:stop]
        if np.any(sep <= 0):
            bad = int(np.argmax(sep <= 0)) + fit_start
            raise DomainError(
                f"zero separation at step {bad}; use renormalized trajectories instead"
            )
        y = np.log(sep)
    slope = np.polyfit(t, y, 1)[0]
    return float(slope)


MAPS = {"logistic"}


def _logistic(r: float, x: float) -> float:
    return r * x * (1.0 - x)


def iterate_map_pair(
    map_id: str = "logistic",
    param: float = 4.0,
    x0: float = 0.3,
    delta0: float = 1e-9,
    steps: int = 1000,
    renormalize: bool = True,
) -> TrajectoryPair:
    """Iterate a map from x0 and x0 + delta0.

    With `renormalize`, the second trajectory is pulled back to distance
    delta0 from the first after every step and the log growth accumulated.
    """
    if map_id not in MAPS:
        raise ConfigError(f"unknown map {map_id!r}; choose from {sorted(MAPS)}")
    if not 0.0 < x0 < 1.0:
        raise ConfigError("x0 must lie in (0, 1)")
    if not 0.0 < delta0 <= 1e-6:
        raise ConfigError("delta0 must lie in (0, 1e-6]")
    if steps < 10:
        raise ConfigError("steps must be at least 10")
    if not 0.0 <= param <= 4.0:
        raise DomainError("logistic parameter outside [0, 4] escapes the unit interval")

    a = np.empty(steps + 1)
    b = np.empty(steps + 1)
    growth = np.zeros(steps + 1) if renormalize else None
    xa = x0
    xb = x0 + delta0 if x0 + delta0 < 1.0 else x0 - delta0
    a[0], b[0] = xa, xb
    acc = 0.0
    for i in range(1, steps + 1):
        xa = _logistic(param, xa)
        xb = _logistic(param, xb)
        if not (0.0 <= xa <= 1.0 and 0.0 <= xb <= 1.0):
            raise DomainError(f"trajectory left [0, 1] at step {i}")
        a[i], b[i] = xa, xb
        if renormalize:
            d = abs(xb - xa)
            if d == 0.0:
                # collapsed onto the same float; restart the perturbation
                d = delta0
            acc += math.log(d / delta0)
            growth[i] = acc
            step = delta0 if xb >= xa else -delta0
            xb = xa + step
            if not 0.0 <= xb <= 1.0:
                xb = xa - step
    return TrajectoryPair(a, b, 1.0, growth, delta0)


def logistic_lyapunov_oracle(r: float, x0: float, steps: int) -> float:
    """Mean of ln|f'(x_n)| along a logistic orbit (derivative average)."""
    x = x0
    total = 0.0
    for _ in range(steps):
        total += math.log(abs(r * (1.0 - 2.0 * x)))
        x = r * x * (1.0 - x)
    return total / steps
