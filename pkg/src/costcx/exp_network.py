"""Airport network held at constant complexity as fuel price varies.

Starting from the minimum spanning tree, original routes are re-added in
ascending length while their total length fits the modeling budget left
over by that year's (normalized) fuel price.
"""

from __future__ import annotations

import heapq
import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple, Sequence

from .cost_core import UNIT, CostCombiner, min_max
from .errors import ConfigError, DomainError

log = logging.getLogger(__name__)

EARTH_RADIUS_KM = 6371.0


def haversine_weight(a: tuple[float, float], b: tuple[float, float]) -> float:
    """Great-circle distance in km between (lat, lon) points in degrees."""
    for lat, lon in (a, b):
        if not -90.0 <= lat <= 90.0:
            raise DomainError(f"latitude {lat} outside [-90, 90]")
        if not -180.0 <= lon <= 180.0:
            raise DomainError(f"longitude {lon} outside [-180, 180]")
    p1, p2 = math.radians(a[0]), math.radians(b[0])
    dp = p2 - p1
    dl = math.radians(b[1] - a[1])
    h = math.sin(dp / 2) ** 2 + math.cos(p1) * math.cos(p2) * math.sin(dl / 2) ** 2
    return 2.0 * EARTH_RADIUS_KM * math.asin(min(1.0, math.sqrt(h)))


class Edge(NamedTuple):
    u: str
    v: str
    weight: float

    @property
    def key(self):
        return (self.weight, self.u, self.v)


def make_edge(u: str, v: str, weight: float) -> Edge:
    return Edge(u, v, float(weight)) if u < v else Edge(v, u, float(weight))


@dataclass(frozen=True)
class WeightedGraph:
    """Undirected simple graph; `coords` maps node id to (lat, lon) or None."""

    coords: Mapping[str, tuple[float, float] | None]
    edges: tuple[Edge, ...]

    def __post_init__(self):
        seen = set()
        edges = []
        for e in self.edges:
            e = make_edge(*e)
            if e.u == e.v:
                raise ConfigError(f"self-loop on {e.u!r}")
            if e.u not in self.coords or e.v not in self.coords:
                raise ConfigError(f"edge {e.u}-{e.v} references an unknown node")
            if (e.u, e.v) in seen:
                raise ConfigError(f"duplicate edge {e.u}-{e.v}")
            if not (math.isfinite(e.weight) and e.weight > 0):
                raise ConfigError(f"edge {e.u}-{e.v} weight must be finite and positive")
            seen.add((e.u, e.v))
            edges.append(e)
        object.__setattr__(self, "coords", dict(self.coords))
        object.__setattr__(self, "edges", tuple(sorted(edges, key=lambda e: e.key)))

    @property
    def nodes(self) -> list[str]:
        return sorted(self.coords)

    @property
    def total_length(self) -> float:
        return math.fsum(e.weight for e in self.edges)

    def with_edges(self, edges: Iterable[Edge]) -> "WeightedGraph":
        return WeightedGraph(self.coords, tuple(edges))

    def components(self) -> list[list[str]]:
        adj = {n: [] for n in self.coords}
        for e in self.edges:
            adj[e.u].append(e.v)
            adj[e.v].append(e.u)
        seen, comps = set(), []
        for n in self.nodes:
            if n in seen:
                continue
            stack, comp = [n], []
            seen.add(n)
            while stack:
                m = stack.pop()
                comp.append(m)
                for k in adj[m]:
                    if k not in seen:
                        seen.add(k)
                        stack.append(k)
            comps.append(sorted(comp))
        return comps

    def require_connected(self):
        comps = self.components()
        if len(comps) > 1:
            desc = "; ".join(f"{len(c)} nodes ({', '.join(c[:5])}{', ...' if len(c) > 5 else ''})"
                             for c in comps)
            raise DomainError(f"graph is disconnected into {len(comps)} components: {desc}")


def graph_from_coords(
    coords: Mapping[str, tuple[float, float] | None],
    pairs: Iterable[tuple[str, str] | tuple[str, str, float | None]],
) -> WeightedGraph:
    """Build a graph, computing missing weights from node coordinates."""
    edges = []
    for p in pairs:
        u, v = p[0], p[1]
        w = p[2] if len(p) > 2 else None
        if w is None:
            if coords.get(u) is None or coords.get(v) is None:
                raise ConfigError(f"edge {u}-{v} has no weight and its endpoints lack coordinates")
            w = haversine_weight(coords[u], coords[v])
        edges.append(make_edge(u, v, w))
    return WeightedGraph(coords, tuple(edges))


class _DisjointSet:
    def __init__(self, items):
        self.parent = {x: x for x in items}
        self.rank = dict.fromkeys(items, 0)

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1
        return True


def minimum_spanning_tree(g: WeightedGraph) -> tuple[Edge, ...]:
    """Kruskal; ties broken by (weight, smaller id, larger id)."""
    g.require_connected()
    ds = _DisjointSet(g.coords)
    tree = []
    for e in g.edges:
        if ds.union(e.u, e.v):
            tree.append(e)
            if len(tree) == len(g.coords) - 1:
                break
    return tuple(tree)


def _dijkstra(adj, source) -> dict[str, float]:
    dist = {source: 0.0}
    heap = [(0.0, source)]
    while heap:
        d, n = heapq.heappop(heap)
        if d > dist[n]:
            continue
        for m, w in adj[n]:
            nd = d + w
            if nd < dist.get(m, math.inf):
                dist[m] = nd
                heapq.heappush(heap, (nd, m))
    return dist


def average_shortest_path(g: WeightedGraph) -> float:
    """Mean weighted shortest-path length over unordered node pairs."""
    g.require_connected()
    nodes = g.nodes
    if len(nodes) < 2:
        raise DomainError("average shortest path needs at least 2 nodes")
    adj = {n: [] for n in nodes}
    for e in g.edges:
        adj[e.u].append((e.v, e.weight))
        adj[e.v].append((e.u, e.weight))
    lengths = []
    for i, s in enumerate(nodes):
        dist = _dijkstra(adj, s)
        lengths.extend(dist[t] for t in nodes[i + 1:])
    return math.fsum(lengths) / len(lengths)


def _fits(total: float, budget: float, scale: float) -> bool:
    # summation order differs between budget and subset totals
    return total <= budget + 1e-9 * scale


def budget_select_edges(g: WeightedGraph, mst_edges: Sequence[Edge], modeling_budget: float) -> tuple[Edge, ...]:
    """MST plus non-tree edges in ascending (weight, ids) order, stopping
    at the first one that would push total length past the budget."""
    mst_set = set(mst_edges)
    mst_len = math.fsum(e.weight for e in mst_edges)
    scale = g.total_length
    if not _fits(mst_len, modeling_budget, scale):
        raise DomainError(f"budget {modeling_budget:.3f} km is below the MST length {mst_len:.3f} km")
    chosen = sorted(mst_set, key=lambda e: e.key)
    total = mst_len
    for e in g.edges:
        if e in mst_set:
            continue
        if not _fits(total + e.weight, modeling_budget, scale):
            break
        chosen.append(e)
        total += e.weight
    return tuple(sorted(chosen, key=lambda e: e.key))


@dataclass(frozen=True)
class FuelSeries:
    years: tuple[int, ...]
    prices: tuple[float, ...]

    def __post_init__(self):
        years = tuple(int(y) for y in self.years)
        prices = tuple(float(p) for p in self.prices)
        if len(years) != len(prices):
            raise ConfigError("fuel series years and prices differ in length")
        if len(years) < 2:
            raise ConfigError("fuel series needs at least 2 entries")
        if any(b <= a for a, b in zip(years, years[1:])):
            raise ConfigError("fuel series years must be strictly increasing")
        if any(not (math.isfinite(p) and p > 0) for p in prices):
            raise ConfigError("fuel prices must be finite and positive")
        object.__setattr__(self, "years", years)
        object.__setattr__(self, "prices", prices)

    def __len__(self):
        return len(self.years)


@dataclass(frozen=True)
class BudgetPolicy:
    budget: float = 1.0
    combiner: CostCombiner = UNIT

    def __post_init__(self):
        if not math.isfinite(self.budget):
            raise ConfigError("budget must be finite")
        if not self.combiner.w_model > 0:
            raise ConfigError("the network experiment needs a positive modeling weight")


YEAR_COLUMNS = (
    "year",
    "fuel_price",
    "operation_cost",
    "modeling_cost",
    "edge_count",
    "total_edge_length_km",
    "avg_shortest_path_km",
)


@dataclass(frozen=True)
class YearRecord:
    """One year of the experiment.

    `modeling_cost` is the normalized length of the selected network
    (0 = MST, 1 = full network); `modeling_budget` is the normalized length
    the budget allowed, after clamping to [0, 1].
    """

    year: int
    fuel_price: float
    operation_cost: float
    modeling_cost: float
    edge_count: int
    total_edge_length_km: float
    avg_shortest_path_km: float
    modeling_budget: float
    clamped: bool = False
    edges: tuple[Edge, ...] = field(default=(), repr=False, compare=False)

    def row(self) -> dict:
        return {k: getattr(self, k) for k in YEAR_COLUMNS}


def run_budget_experiment(
    g: WeightedGraph,
    fuel: FuelSeries,
    policy: BudgetPolicy = BudgetPolicy(),
) -> list[YearRecord]:
    """Each year: operation cost is the series-normalized fuel price and the
    modeling budget is whatever keeps the combined cost at `policy.budget`,
    spent from the MST baseline."""
    g.require_connected()
    mst = minimum_spanning_tree(g)
    mst_len = math.fsum(e.weight for e in mst)
    full_len = g.total_length
    span = full_len - mst_len
    oper = min_max(list(fuel.prices))
    c = policy.combiner
    records = []
    for year, price, o in zip(fuel.years, fuel.prices, oper):
        m = (policy.budget - c.w_oper * o) / c.w_model
        clamped = not 0.0 <= m <= 1.0
        if clamped:
            log.warning("year %d: implied modeling budget %.4f outside [0, 1]; clamped", year, m)
            m = min(max(m, 0.0), 1.0)
        budget_km = full_len if m == 1.0 else mst_len + m * span
        edges = budget_select_edges(g, mst, budget_km)
        length = math.fsum(e.weight for e in edges)
        sub = g.with_edges(edges)
        records.append(YearRecord(
            year=year,
            fuel_price=price,
            operation_cost=o,
            modeling_cost=min(max((length - mst_len) / span, 0.0), 1.0) if span > 0 else 0.0,
            edge_count=len(edges),
            total_edge_length_km=length,
            avg_shortest_path_km=average_shortest_path(sub),
            modeling_budget=m,
            clamped=clamped,
            edges=edges,
        ))
    return records
