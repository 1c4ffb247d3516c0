"""Box-counting dimension and gliding-box lacunarity on binary rasters."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import ConfigError, DomainError


@dataclass(frozen=True)
class BinaryGrid2D:
    """Boolean occupancy raster indexed (row, col)."""

    cells: np.ndarray

    def __post_init__(self):
        cells = np.asarray(self.cells, dtype=bool)
        if cells.ndim != 2 or cells.shape[0] < 1 or cells.shape[1] < 1:
            raise ConfigError(f"grid must be a non-empty 2-D array, got shape {cells.shape}")
        object.__setattr__(self, "cells", cells)

    @property
    def height(self) -> int:
        return self.cells.shape[0]

    @property
    def width(self) -> int:
        return self.cells.shape[1]

    @property
    def occupied(self) -> int:
        return int(self.cells.sum())


@dataclass(frozen=True)
class BoxCountFit:
    dimension: float
    box_sizes: tuple[int, ...]
    counts: tuple[int, ...]
    intercept: float


def _check_sizes(grid: BinaryGrid2D, box_sizes: Sequence[int]) -> list[int]:
    sizes = [int(s) for s in box_sizes]
    limit = min(grid.width, grid.height)
    for s in sizes:
        if s < 1:
            raise ConfigError(f"box size must be positive, got {s}")
        if s > limit:
            raise ConfigError(f"box size {s} exceeds grid extent {limit}")
    return sizes


def box_counts(grid: BinaryGrid2D, size: int) -> int:
    """Number of origin-anchored s x s boxes holding an occupied cell.

    Partial boxes on the right/bottom edge are included.
    """
    h, w = grid.cells.shape
    nh, nw = -(-h // size), -(-w // size)
    padded = np.zeros((nh * size, nw * size), dtype=bool)
    padded[:h, :w] = grid.cells
    return int(padded.reshape(nh, size, nw, size).any(axis=(1, 3)).sum())


def box_counting_dimension(grid: BinaryGrid2D, box_sizes: Sequence[int]) -> BoxCountFit:
    sizes = _check_sizes(grid, box_sizes)
    if len(set(sizes)) < 3:
        raise ConfigError("box counting needs at least 3 distinct box sizes")
    if grid.occupied == 0:
        raise DomainError("box counting on an empty grid")
    sizes = sorted(set(sizes))
    counts = [box_counts(grid, s) for s in sizes]
    slope, intercept = np.polyfit(np.log(sizes), np.log(counts), 1)
    dim = float(min(max(-slope, 0.0), 2.0))
    return BoxCountFit(dim, tuple(sizes), tuple(counts), float(intercept))


def default_box_sizes(grid: BinaryGrid2D) -> list[int]:
    """Powers of 3 when the smaller extent is a power of 3, else powers of 2,
    keeping at least 9 boxes per side."""
    limit = min(grid.width, grid.height)
    base = 3 if 3 ** round(math.log(limit, 3)) == limit else 2
    sizes, s = [], 1
    while s * 9 <= limit or len(sizes) < 3:
        if s > limit:
            break
        sizes.append(s)
        s *= base
    return sizes


def gliding_box_masses(cells: np.ndarray, size: int) -> np.ndarray:
    """Occupied count of every size x size window at stride 1."""
    ii = np.zeros((cells.shape[0] + 1, cells.shape[1] + 1), dtype=np.int64)
    ii[1:, 1:] = cells.astype(np.int64).cumsum(0).cumsum(1)
    return ii[size:, size:] - ii[:-size, size:] - ii[size:, :-size] + ii[:-size, :-size]


def lacunarity(grid: BinaryGrid2D, box_sizes: Sequence[int]) -> dict[int, float]:
    """Gliding-box lacunarity E[m^2] / E[m]^2 per window size."""
    sizes = _check_sizes(grid, box_sizes)
    if grid.occupied == 0:
        raise DomainError("lacunarity is undefined for a grid with no occupied cells")
    out = {}
    for s in sizes:
        m = gliding_box_masses(grid.cells, s).astype(np.float64)
        # exact integer moments avoid a spurious Λ < 1 from rounding
        m1 = int(m.sum())
        m2 = int((m * m).sum())
        n = m.size
        out[s] = (m2 * n) / (m1 * m1)
    return out


def line_grid(size: int, row: int | None = None) -> BinaryGrid2D:
    cells = np.zeros((size, size), dtype=bool)
    cells[size // 2 if row is None else row, :] = True
    return BinaryGrid2D(cells)


def filled_grid(size: int) -> BinaryGrid2D:
    return BinaryGrid2D(np.ones((size, size), dtype=bool))


def _bresenham(r0: int, c0: int, r1: int, c1: int):
    dr, dc = abs(r1 - r0), -abs(c1 - c0)
    sr = 1 if r0 < r1 else -1
    sc = 1 if c0 < c1 else -1
    err = dr + dc
    while True:
        yield r0, c0
        if r0 == r1 and c0 == c1:
            return
        e2 = 2 * err
        if e2 >= dc:
            err += dc
            r0 += sr
        if e2 <= dr:
            err += dr
            c0 += sc


def koch_vertices(depth: int, length: float) -> np.ndarray:
    """Polyline vertices of a Koch curve spanning [0, length] on the x axis."""
    pts = np.array([[0.0, 0.0], [length, 0.0]])
    rot = np.array([[0.5, -math.sqrt(3) / 2], [math.sqrt(3) / 2, 0.5]])
    for _ in range(depth):
        a, b = pts[:-1], pts[1:]
        d = (b - a) / 3.0
        p1 = a + d
        p3 = a + 2 * d
        p2 = p1 + d @ rot.T
        new = np.empty((4 * len(a) + 1, 2))
        new[0:-1:4] = a
        new[1::4] = p1
        new[2::4] = p2
        new[3::4] = p3
        new[-1] = pts[-1]
        pts = new
    return pts


def koch_raster(depth: int = 6, size: int | None = None) -> BinaryGrid2D:
    """Rasterize a depth-`depth` Koch curve onto a square 3^k grid.

    The curve spans the full width with its base a third of the way up, so
    the default size 3^depth makes the finest segments one pixel long.
    Consecutive vertices are joined by Bresenham segments.
    """
    if depth < 0:
        raise ConfigError("Koch depth must be non-negative")
    if size is None:
        size = 3 ** depth
    pts = koch_vertices(depth, size - 1)
    cells = np.zeros((size, size), dtype=bool)
    base_row = size - 1 - size // 3
    rows = np.rint(base_row - pts[:, 1]).astype(int)
    cols = np.rint(pts[:, 0]).astype(int)
    for i in range(len(pts) - 1):
        for r, c in _bresenham(rows[i], cols[i], rows[i + 1], cols[i + 1]):
            cells[r, c] = True
    return BinaryGrid2D(cells)


def read_pbm(text: str) -> BinaryGrid2D:
    """Parse ASCII PBM: optional `P1` magic, width, height, then 0/1 cells row-major.

    `#` starts a comment running to end of line.
    """
    tokens = []
    for line in text.splitlines():
        line = line.split("#", 1)[0]
        tokens.extend(line.split())
    if tokens and tokens[0] == "P1":
        tokens = tokens[1:]
    if len(tokens) < 2:
        raise ConfigError("PBM header needs width and height")
    try:
        width, height = int(tokens[0]), int(tokens[1])
    except ValueError as exc:
        raise ConfigError(f"bad PBM header: {exc}") from None
    if width < 1 or height < 1:
        raise ConfigError("PBM width and height must be positive")
    body = "".join(tokens[2:])
    if set(body) - {"0", "1"}:
        raise ConfigError("PBM cells must be 0 or 1")
    if len(body) != width * height:
        raise ConfigError(f"PBM expects {width * height} cells, found {len(body)}")
    cells = np.frombuffer(body.encode(), dtype=np.uint8) == ord("1")
    return BinaryGrid2D(cells.reshape(height, width))


def write_pbm(grid: BinaryGrid2D) -> str:
    lines = ["P1", f"{grid.width} {grid.height}"]
    for row in grid.cells:
        lines.append(" ".join("1" if v else "0" for v in row))
    return "\n".join(lines) + "\n"
