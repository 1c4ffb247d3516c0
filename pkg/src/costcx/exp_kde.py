"""Function reconstruction by convolving a sample comb with a Gaussian kernel.

The sample count trades modeling cost (more samples) against operation
cost (quadratic reconstruction error).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .cost_core import UNIT, CostCombiner, CostCurve, normalize_curve
from .errors import ConfigError

_SQRT_2PI = math.sqrt(2.0 * math.pi)
_CHUNK = 512


@dataclass(frozen=True)
class TargetFunction1D:
    components: tuple[tuple[float, float, float], ...]
    domain: tuple[float, float]
    kind: str = "gaussian_mixture"

    def __post_init__(self):
        if self.kind != "gaussian_mixture":
            raise ConfigError(f"unsupported target kind {self.kind!r}")
        comps = tuple(tuple(float(v) for v in c) for c in self.components)
        if not comps:
            raise ConfigError("target needs at least one component")
        for w, _, sd in comps:
            if not (w > 0 and sd > 0):
                raise ConfigError("mixture weights and standard deviations must be positive")
        a, b = (float(v) for v in self.domain)
        if not a < b:
            raise ConfigError("target domain must satisfy a < b")
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "domain", (a, b))

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for w, mu, sd in self.components:
            out += w * np.exp(-0.5 * ((x - mu) / sd) ** 2) / (sd * _SQRT_2PI)
        return out

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        """Draw from the mixture treated as a density, truncated to the domain."""
        w = np.array([c[0] for c in self.components])
        w = w / w.sum()
        a, b = self.domain
        out = np.empty(0)
        while len(out) < n:
            k = rng.choice(len(w), size=n, p=w)
            mu = np.array([self.components[i][1] for i in k])
            sd = np.array([self.components[i][2] for i in k])
            x = rng.normal(mu, sd)
            out = np.concatenate([out, x[(x >= a) & (x <= b)]])
        return out[:n]


DEFAULT_TARGET = TargetFunction1D(((0.6, -1.0, 0.5), (0.4, 1.5, 0.8)), (-5.0, 5.0))

MODES = ("deterministic_weighted", "random_draw")
COST_MODELS = ("count", "operations")


@dataclass(frozen=True)
class ReconstructionConfig:
    grid_points: int = 2048
    bandwidth_factor: float = 1.0
    mode: str = "deterministic_weighted"
    seed: int = 0

    def __post_init__(self):
        if self.grid_points < 64:
            raise ConfigError("grid_points must be at least 64")
        if not self.bandwidth_factor > 0:
            raise ConfigError("bandwidth_factor must be positive")
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}")


@dataclass(frozen=True)
class Reconstruction:
    n_samples: int
    bandwidth: float
    x: np.ndarray = field(repr=False)
    target: np.ndarray = field(repr=False)
    estimate: np.ndarray = field(repr=False)
    quadratic_error: float


def gaussian_kernel(u: np.ndarray, sigma: float) -> np.ndarray:
    """Unit-integral Gaussian."""
    return np.exp(-0.5 * (u / sigma) ** 2) / (sigma * _SQRT_2PI)


def bandwidth(target: TargetFunction1D, n_samples: int, cfg: ReconstructionConfig) -> float:
    a, b = target.domain
    return cfg.bandwidth_factor * (b - a) / n_samples


def _convolve(x: np.ndarray, centers: np.ndarray, weights: np.ndarray, sigma: float) -> np.ndarray:
    out = np.zeros_like(x)
    # fixed chunking keeps the summation order independent of anything but N
    for s in range(0, len(centers), _CHUNK):
        c = centers[s:s + _CHUNK]
        out += gaussian_kernel(x[:, None] - c[None, :], sigma) @ weights[s:s + _CHUNK]
    return out


def reconstruct(
    target: TargetFunction1D = DEFAULT_TARGET,
    n_samples: int = 100,
    cfg: ReconstructionConfig = ReconstructionConfig(),
) -> Reconstruction:
    if n_samples < 2:
        raise ConfigError("need at least 2 samples")
    sigma = bandwidth(target, n_samples, cfg)
    if not sigma > 0:
        raise ConfigError("kernel bandwidth must be positive")
    a, b = target.domain
    x = np.linspace(a, b, cfg.grid_points)
    p = target(x)
    if cfg.mode == "deterministic_weighted":
        xs = np.linspace(a, b, n_samples)
        dx = (b - a) / (n_samples - 1)
        r = _convolve(x, xs, target(xs) * dx, sigma)
    else:
        rng = np.random.default_rng(cfg.seed)
        xs = target.sample(n_samples, rng)
        r = _convolve(x, xs, np.full(n_samples, 1.0 / n_samples), sigma)
    dgrid = (b - a) / (cfg.grid_points - 1)
    err = float(np.sum((r - p) ** 2) * dgrid)
    return Reconstruction(n_samples, sigma, x, p, r, err)


def modeling_cost(n_samples: int, cfg: ReconstructionConfig, cost_model: str) -> float:
    if cost_model == "count":
        return float(n_samples)
    if cost_model == "operations":
        return float(n_samples * cfg.grid_points)
    raise ConfigError(f"cost_model must be one of {COST_MODELS}")


def sweep_raw(
    target: TargetFunction1D,
    cfg: ReconstructionConfig,
    n_values: Sequence[int],
    cost_model: str = "count",
    combiner: CostCombiner = UNIT,
) -> CostCurve:
    """Un-normalized (modeling, operation) costs for each sample count."""
    n_values = [int(n) for n in n_values]
    if len(n_values) < 3:
        raise ConfigError("a sweep needs at least 3 sample counts")
    if any(b <= a for a, b in zip(n_values, n_values[1:])):
        raise ConfigError("sample counts must be strictly increasing")
    if cost_model not in COST_MODELS:
        raise ConfigError(f"cost_model must be one of {COST_MODELS}")
    errors = [reconstruct(target, n, cfg).quadratic_error for n in n_values]
    models = [modeling_cost(n, cfg, cost_model) for n in n_values]
    return CostCurve.from_channels(n_values, models, errors, combiner)


def sweep_samples(
    target: TargetFunction1D = DEFAULT_TARGET,
    cfg: ReconstructionConfig = ReconstructionConfig(),
    n_values: Sequence[int] = tuple(range(10, 2001, 10)),
    cost_model: str = "count",
    combiner: CostCombiner = UNIT,
) -> CostCurve:
    """Normalized cost curve over sample counts."""
    return normalize_curve(sweep_raw(target, cfg, n_values, cost_model, combiner))


DEFAULT_SWEEP = tuple(range(10, 2001, 10))
