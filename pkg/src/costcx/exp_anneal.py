"""Multi-agent annealed gradient descent on a Gaussian-mixture landscape.

Agent count trades modeling cost (summed agent steps) against operation
cost (distance from the best agent's answer to the known global minimum).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numba
import numpy as np
from scipy.optimize import minimize

from .cost_core import UNIT, CostCombiner, CostCurve, min_max
from .errors import ConfigError, DomainError, InternalError


@dataclass(frozen=True)
class GaussianSurface2D:
    """f(x, y) = sum of A * exp(-|p - c|^2 / (2 s^2)) over (A, cx, cy, s)."""

    components: tuple[tuple[float, float, float, float], ...]
    size: float = 10.0

    def __post_init__(self):
        comps = tuple(tuple(float(v) for v in c) for c in self.components)
        if not comps:
            raise ConfigError("surface needs at least one component")
        for a, _, _, s in comps:
            if not (a < 0 and s > 0):
                raise ConfigError("components need negative amplitude and positive width")
        if not self.size > 0:
            raise ConfigError("domain size must be positive")
        object.__setattr__(self, "components", comps)

    @property
    def params(self) -> np.ndarray:
        return np.array(self.components, dtype=np.float64)

    def value(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        out = np.zeros(np.broadcast(x, y).shape)
        for a, cx, cy, s in self.components:
            out = out + a * np.exp(-((x - cx) ** 2 + (y - cy) ** 2) / (2 * s * s))
        return out

    def gradient(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        gx = np.zeros(np.broadcast(x, y).shape)
        gy = np.zeros_like(gx)
        for a, cx, cy, s in self.components:
            e = a * np.exp(-((x - cx) ** 2 + (y - cy) ** 2) / (2 * s * s)) / (s * s)
            gx = gx - e * (x - cx)
            gy = gy - e * (y - cy)
        return gx, gy

    @cached_property
    def global_minimum(self) -> tuple[float, float, float]:
        return grid_search_minimum(self)


def grid_search_minimum(surface: GaussianSurface2D, points: int = 2001) -> tuple[float, float, float]:
    """Global minimum by dense grid search refined with bounded local descent."""
    axis = np.linspace(0.0, surface.size, points)
    best = (math.inf, 0.0, 0.0)
    # row blocks keep memory flat
    for s in range(0, points, 200):
        xx, yy = np.meshgrid(axis[s:s + 200], axis, indexing="ij")
        f = surface.value(xx, yy)
        k = int(np.argmin(f))
        if f.flat[k] < best[0]:
            best = (float(f.flat[k]), float(xx.flat[k]), float(yy.flat[k]))
    res = minimize(
        lambda p: float(surface.value(p[0], p[1])),
        x0=[best[1], best[2]],
        jac=lambda p: np.array([float(g) for g in surface.gradient(p[0], p[1])]),
        bounds=[(0.0, surface.size)] * 2,
        method="L-BFGS-B",
        options={"ftol": 1e-15, "gtol": 1e-12},
    )
    if res.fun <= best[0]:
        return float(res.x[0]), float(res.x[1]), float(res.fun)
    return best[1], best[2], best[0]


DEFAULT_SURFACE_SEED = 1


def default_surface(seed: int = DEFAULT_SURFACE_SEED, n_components: int = 8, size: float = 10.0) -> GaussianSurface2D:
    rng = np.random.default_rng(seed)
    amp = rng.uniform(-1.0, -0.2, n_components)
    centers = rng.uniform(1.0, 9.0, (n_components, 2))
    widths = rng.uniform(0.4, 1.2, n_components)
    return GaussianSurface2D(
        tuple((float(a), float(c[0]), float(c[1]), float(w)) for a, c, w in zip(amp, centers, widths)),
        size,
    )


@dataclass(frozen=True)
class AnnealSchedule:
    """Temperature drops by the factor `decay` every `period` steps."""

    T0: float = 1.0
    decay: float = 0.9
    period: int = 100
    T_min: float = 1e-3

    def __post_init__(self):
        if not (self.T0 > 0 and self.T_min > 0):
            raise ConfigError("temperatures must be positive")
        if not 0 < self.decay < 1:
            raise ConfigError("decay must lie in (0, 1)")
        if self.period < 1:
            raise ConfigError("period must be at least 1")

    def temperature(self, step: int) -> float:
        return self.T0 * self.decay ** (step // self.period)


@dataclass(frozen=True)
class AgentConfig:
    step_size: float = 0.05
    noise_scale: float = 1.0
    max_steps: int = 5000
    k_boltzmann: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if not self.step_size > 0:
            raise ConfigError("step_size must be positive")
        if not self.noise_scale >= 0:
            raise ConfigError("noise_scale must be non-negative")
        if self.max_steps < 1:
            raise ConfigError("max_steps must be at least 1")
        if not self.k_boltzmann > 0:
            raise ConfigError("k_boltzmann must be positive")


def accept_probability(delta_e: float, T: float, k: float = 1.0) -> float:
    """Metropolis acceptance min(1, exp(-dE / kT))."""
    if not T > 0:
        raise DomainError(f"temperature must be positive, got {T}")
    if not k > 0:
        raise DomainError(f"Boltzmann constant must be positive, got {k}")
    if delta_e <= 0:
        return 1.0
    return math.exp(-delta_e / (k * T))


@numba.njit(cache=True)
def _eval(params, x, y):
    f = 0.0
    gx = 0.0
    gy = 0.0
    for i in range(params.shape[0]):
        a = params[i, 0]
        dx = x - params[i, 1]
        dy = y - params[i, 2]
        s2 = params[i, 3] * params[i, 3]
        e = a * math.exp(-(dx * dx + dy * dy) / (2.0 * s2))
        f += e
        gx -= e * dx / s2
        gy -= e * dy / s2
    return f, gx, gy


@numba.njit(cache=True)
def _anneal(params, size, x0, y0, noise, uniforms, eta, alpha, k, T0, decay, period, T_min,
            max_steps, record, log):
    x = x0
    y = y0
    f, gx, gy = _eval(params, x, y)
    steps = 0
    T = T0
    for t in range(max_steps):
        if t % period == 0:
            T = T0 * decay ** (t // period)
        nx = x - eta * gx + alpha * T * noise[t, 0]
        ny = y - eta * gy + alpha * T * noise[t, 1]
        nx = min(max(nx, 0.0), size)
        ny = min(max(ny, 0.0), size)
        nf, ngx, ngy = _eval(params, nx, ny)
        if not (math.isfinite(nf) and math.isfinite(ngx) and math.isfinite(ngy)):
            return x, y, f, -1
        de = nf - f
        if de <= 0.0 or uniforms[t] < math.exp(-de / (k * T)):
            x = nx
            y = ny
            f = nf
            gx = ngx
            gy = ngy
        steps = t + 1
        if record:
            log[t, 0] = steps
            log[t, 1] = x
            log[t, 2] = y
            log[t, 3] = f
            log[t, 4] = T
        if T < T_min and math.sqrt(gx * gx + gy * gy) < 1e-6:
            break
    return x, y, f, steps


@dataclass(frozen=True)
class AgentResult:
    position: tuple[float, float]
    value: float
    steps_used: int
    trajectory: np.ndarray | None = field(default=None, repr=False)
    seconds: float = 0.0


TRAJECTORY_COLUMNS = ("step", "x", "y", "f", "T")


def agent_streams(seed: np.random.SeedSequence | int, max_steps: int):
    """Independent start point, proposal noise and acceptance draws for one agent."""
    rng = np.random.default_rng(seed)
    start = rng.uniform(0.0, 1.0, 2)
    noise = rng.standard_normal((max_steps, 2))
    uniforms = rng.random(max_steps)
    return start, noise, uniforms


def _run(surface, schedule, cfg, seed, record, start=None) -> AgentResult:
    u0, noise, uniforms = agent_streams(seed, cfg.max_steps)
    if start is None:
        start = u0 * surface.size
    log = np.zeros((cfg.max_steps if record else 1, 5))
    t0 = time.perf_counter()
    x, y, f, steps = _anneal(
        surface.params, surface.size, float(start[0]), float(start[1]), noise, uniforms,
        cfg.step_size, cfg.noise_scale, cfg.k_boltzmann, schedule.T0, schedule.decay,
        schedule.period, schedule.T_min, cfg.max_steps, record, log,
    )
    elapsed = time.perf_counter() - t0
    if steps < 0:
        raise InternalError("surface evaluation produced a non-finite value")
    traj = log[:steps].copy() if record else None
    return AgentResult((x, y), f, steps, traj, elapsed)


def run_agent(
    surface: GaussianSurface2D,
    schedule: AnnealSchedule = AnnealSchedule(),
    agent_cfg: AgentConfig = AgentConfig(),
    start: tuple[float, float] | None = None,
    record: bool = True,
    seed: np.random.SeedSequence | None = None,
) -> AgentResult:
    """One annealed descent from a seeded random start (or `start`).

    Each step proposes x - eta * grad f + noise (stddev alpha * T), clamped
    to the domain, and accepts it with the Metropolis rule. Stops after
    max_steps, or once T < T_min and the gradient has vanished.
    `seed` overrides the stream derived from agent_cfg.seed.
    """
    if seed is None:
        seed = np.random.SeedSequence(agent_cfg.seed)
    return _run(surface, schedule, agent_cfg, seed, record, start)


def agent_seed(master: int, repetition: int, agent: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(master, spawn_key=(repetition, agent))


COST_MODES = ("steps", "wallclock")


@dataclass(frozen=True)
class AnnealSweep:
    curve: CostCurve
    raw_modeling: tuple[float, ...]
    raw_operation: tuple[float, ...]
    per_rep_modeling: np.ndarray = field(repr=False)
    per_rep_operation: np.ndarray = field(repr=False)
    minimum: tuple[float, float, float]


def sweep_agents(
    surface: GaussianSurface2D,
    schedule: AnnealSchedule = AnnealSchedule(),
    agent_cfg: AgentConfig = AgentConfig(),
    n_agents_values: Sequence[int] = tuple(range(1, 11)),
    repetitions: int = 30,
    combiner: CostCombiner = UNIT,
    cost_mode: str = "steps",
) -> AnnealSweep:
    """Normalized cost curve over agent counts, with a `stddev_total` column.

    Agent i of repetition r always uses the stream seeded by
    (agent_cfg.seed, r, i), so a team of n agents is the first n of a fixed
    pool and per-point results do not depend on execution order.
    """
    ns = [int(n) for n in n_agents_values]
    if len(ns) < 3:
        raise ConfigError("a sweep needs at least 3 agent counts")
    if any(n < 1 for n in ns) or any(b <= a for a, b in zip(ns, ns[1:])):
        raise ConfigError("agent counts must be positive and strictly increasing")
    if repetitions < 1:
        raise ConfigError("repetitions must be at least 1")
    if cost_mode not in COST_MODES:
        raise ConfigError(f"cost_mode must be one of {COST_MODES}")

    gx, gy, _ = surface.global_minimum
    pool = max(ns)
    cost = np.zeros((repetitions, pool))
    dist = np.zeros((repetitions, pool))
    for r in range(repetitions):
        for a in range(pool):
            res = _run(surface, schedule, agent_cfg, agent_seed(agent_cfg.seed, r, a), False)
            cost[r, a] = res.steps_used if cost_mode == "steps" else res.seconds
            dist[r, a] = math.hypot(res.position[0] - gx, res.position[1] - gy)

    model = np.array([[cost[r, :n].sum() for n in ns] for r in range(repetitions)])
    oper = np.array([[dist[r, :n].min() for n in ns] for r in range(repetitions)])
    mean_m = model.mean(axis=0)
    mean_o = oper.mean(axis=0)
    norm_m = min_max(list(mean_m))
    norm_o = min_max(list(mean_o))

    def scale(rows, means, normed):
        lo, hi = means.min(), means.max()
        return np.zeros_like(rows) if hi == lo else (rows - lo) / (hi - lo)

    rep_total = combiner.w_model * scale(model, mean_m, norm_m) + combiner.w_oper * scale(oper, mean_o, norm_o)
    sd = rep_total.std(axis=0, ddof=1) if repetitions > 1 else np.zeros(len(ns))
    curve = CostCurve.from_channels(ns, norm_m, norm_o, combiner, normalized=True,
                                    extras={"stddev_total": sd})
    return AnnealSweep(curve, tuple(mean_m), tuple(mean_o), model, oper, surface.global_minimum)
