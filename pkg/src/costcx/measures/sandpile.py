"""Bak-Tang-Wiesenfeld sandpile with open (dissipative) boundaries."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numba
import numpy as np

from ..errors import ConfigError

DEFAULT_THRESHOLD = 4

_NEIGHBOURS = ((-1, 0), (1, 0), (0, -1), (0, 1))


@dataclass
class SandpileState:
    heights: np.ndarray
    threshold: int = DEFAULT_THRESHOLD
    lost: int = 0

    def __post_init__(self):
        self.heights = np.asarray(self.heights, dtype=np.int64)
        if self.heights.ndim != 2:
            raise ConfigError("sandpile heights must be 2-D")
        if np.any(self.heights < 0):
            raise ConfigError("sandpile heights must be non-negative")
        if self.threshold < 1:
            raise ConfigError("threshold must be positive")

    @classmethod
    def empty(cls, width: int, height: int, threshold: int = DEFAULT_THRESHOLD) -> "SandpileState":
        return cls(np.zeros((height, width), dtype=np.int64), threshold)

    @property
    def width(self) -> int:
        return self.heights.shape[1]

    @property
    def height(self) -> int:
        return self.heights.shape[0]

    def is_stable(self) -> bool:
        return bool(np.all(self.heights < self.threshold))


def relax(state: SandpileState, order: str = "stack") -> int:
    """Topple until stable; returns the number of topple events.

    `order` picks which unstable site fires next ("stack", "queue" or
    "sweep"). By the abelian property the final state does not depend on it.
    """
    h = state.heights
    th = state.threshold
    rows, cols = h.shape
    topples = 0
    if order == "sweep":
        while True:
            unstable = np.argwhere(h >= th)
            if len(unstable) == 0:
                return topples
            for r, c in unstable:
                while h[r, c] >= th:
                    topples += 1
                    state.lost += _fire(h, th, r, c, rows, cols)
    if order not in ("stack", "queue"):
        raise ConfigError(f"unknown topple order {order!r}")
    pending = deque(map(tuple, np.argwhere(h >= th)))
    pop = pending.pop if order == "stack" else pending.popleft
    while pending:
        r, c = pop()
        if h[r, c] < th:
            continue
        topples += 1
        state.lost += _fire(h, th, r, c, rows, cols)
        if h[r, c] >= th:
            pending.append((r, c))
        for dr, dc in _NEIGHBOURS:
            nr, nc = r + dr, c + dc
            if 0 <= nr < rows and 0 <= nc < cols and h[nr, nc] >= th:
                pending.append((nr, nc))
    return topples


def _fire(h, th, r, c, rows, cols) -> int:
    h[r, c] -= 4
    lost = 0
    for dr, dc in _NEIGHBOURS:
        nr, nc = r + dr, c + dc
        if 0 <= nr < rows and 0 <= nc < cols:
            h[nr, nc] += 1
        else:
            lost += 1
    return lost


@numba.njit(cache=True)
def _drive(h, drops_r, drops_c, th, sizes):
    rows, cols = h.shape
    # a site is on the stack at most once, so rows * cols entries suffice
    stack_r = np.empty(rows * cols + 1, dtype=np.int64)
    stack_c = np.empty_like(stack_r)
    lost = 0
    for g in range(drops_r.shape[0]):
        r0 = drops_r[g]
        c0 = drops_c[g]
        h[r0, c0] += 1
        topples = 0
        top = 0
        if h[r0, c0] >= th:
            stack_r[0] = r0
            stack_c[0] = c0
            top = 1
        while top > 0:
            top -= 1
            r = stack_r[top]
            c = stack_c[top]
            while h[r, c] >= th:
                h[r, c] -= 4
                topples += 1
                for k in range(4):
                    nr = r + (-1 if k == 0 else (1 if k == 1 else 0))
                    nc = c + (-1 if k == 2 else (1 if k == 3 else 0))
                    if nr < 0 or nr >= rows or nc < 0 or nc >= cols:
                        lost += 1
                    else:
                        h[nr, nc] += 1
                        if h[nr, nc] == th:
                            # pushed exactly once per crossing of the threshold
                            stack_r[top] = nr
                            stack_c[top] = nc
                            top += 1
        sizes[g] = topples
    return lost


@dataclass(frozen=True)
class SandpileRun:
    avalanche_sizes: np.ndarray
    state: SandpileState
    grains_dropped: int
    warmup_sizes: np.ndarray = field(repr=False, default_factory=lambda: np.zeros(0, np.int64))


def drop_sites(width: int, height: int, n: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    rng = np.random.default_rng(seed)
    flat = rng.integers(0, width * height, size=n)
    return flat // width, flat % width


def drive(state: SandpileState, drops_r: np.ndarray, drops_c: np.ndarray) -> np.ndarray:
    """Drop grains one at a time at the given sites, relaxing fully after each."""
    if state.threshold < 4:
        # firing removes 4 grains; a lower threshold could drive heights negative
        raise ConfigError("threshold must be at least 4")
    if not state.is_stable():
        relax(state)
    sizes = np.zeros(len(drops_r), dtype=np.int64)
    state.lost += int(
        _drive(state.heights, np.asarray(drops_r, np.int64), np.asarray(drops_c, np.int64),
               state.threshold, sizes)
    )
    return sizes


def sandpile_avalanches(
    width: int,
    height: int,
    grains: int,
    seed: int = 0,
    warmup: int = 0,
    threshold: int = DEFAULT_THRESHOLD,
) -> SandpileRun:
    """Avalanche size (topple count) for each of `grains` random drops.

    The first `warmup` drops drive the pile toward its critical state and
    are reported separately.
    """
    if width < 2 or height < 2:
        raise ConfigError("sandpile needs width and height of at least 2")
    if grains < 1:
        raise ConfigError("grains must be at least 1")
    if warmup < 0:
        raise ConfigError("warmup must be non-negative")
    state = SandpileState.empty(width, height, threshold)
    rows, cols = drop_sites(width, height, warmup + grains, seed)
    warm = drive(state, rows[:warmup], cols[:warmup])
    sizes = drive(state, rows[warmup:], cols[warmup:])
    return SandpileRun(sizes, state, warmup + grains, warm)


def log_binned_frequency(sizes: np.ndarray, bins_per_decade: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """Density (count per unit size) of non-zero sizes in logarithmic bins.

    Returns (lower bin edges, density).
    """
    s = np.asarray(sizes)
    s = s[s > 0]
    if len(s) == 0:
        return np.zeros(0), np.zeros(0)
    top = int(np.ceil(np.log10(s.max() + 1) * bins_per_decade))
    edges = np.unique(np.floor(10 ** (np.arange(top + 1) / bins_per_decade)).astype(np.int64))
    counts, _ = np.histogram(s, bins=edges)
    return edges[:-1], counts / np.diff(edges)
