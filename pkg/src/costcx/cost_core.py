"""Modeling/operation cost pairs, their combination, and trade-off curves."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

from .errors import ConfigError, DomainError

COLUMNS = ("parameter", "modeling_cost", "operation_cost", "total_cost")


@dataclass(frozen=True)
class CostCombiner:
    """Weighted sum g(m, o) = w_model * m + w_oper * o."""

    w_model: float = 1.0
    w_oper: float = 1.0
    kind: str = "weighted_sum"

    def __post_init__(self):
        if self.kind != "weighted_sum":
            raise ConfigError(f"unsupported combiner {self.kind!r}")
        if not (self.w_model >= 0 and self.w_oper >= 0 and self.w_model + self.w_oper > 0):
            raise ConfigError("combiner weights must be non-negative with a positive sum")

    def __call__(self, modeling: float, operation: float) -> float:
        return total_cost(modeling, operation, self)


UNIT = CostCombiner()


def total_cost(modeling: float, operation: float, combiner: CostCombiner = UNIT) -> float:
    for name, v in (("modeling", modeling), ("operation", operation)):
        if not math.isfinite(v):
            raise DomainError(f"{name} cost must be finite, got {v}")
        if v < 0:
            raise DomainError(f"{name} cost must be non-negative, got {v}")
    return combiner.w_model * modeling + combiner.w_oper * operation


def efficiency(benefit: float, total: float) -> float:
    if not total > 0:
        raise DomainError(f"efficiency needs a positive cost, got {total}")
    return benefit / total


@dataclass(frozen=True)
class CostPoint:
    parameter: float
    modeling_cost: float
    operation_cost: float
    total: float


@dataclass(frozen=True)
class CostCurve:
    points: tuple[CostPoint, ...]
    normalized: bool = False
    combiner: CostCombiner = field(default=UNIT, compare=False)
    extras: dict[str, tuple[float, ...]] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        pts = tuple(self.points)
        object.__setattr__(self, "points", pts)
        for a, b in zip(pts, pts[1:]):
            if not b.parameter > a.parameter:
                raise ConfigError("curve parameters must be strictly increasing")
        for name, col in self.extras.items():
            if len(col) != len(pts):
                raise ConfigError(f"extra column {name!r} has {len(col)} values for {len(pts)} points")

    @classmethod
    def from_channels(
        cls,
        parameters: Sequence[float],
        modeling: Sequence[float],
        operation: Sequence[float],
        combiner: CostCombiner = UNIT,
        normalized: bool = False,
        extras: dict[str, Sequence[float]] | None = None,
    ) -> "CostCurve":
        if not len(parameters) == len(modeling) == len(operation):
            raise ConfigError("channel lengths differ")
        pts = tuple(
            CostPoint(float(p), float(m), float(o), total_cost(float(m), float(o), combiner))
            for p, m, o in zip(parameters, modeling, operation)
        )
        ex = {k: tuple(float(v) for v in col) for k, col in (extras or {}).items()}
        return cls(pts, normalized, combiner, ex)

    def __len__(self):
        return len(self.points)

    @property
    def parameters(self) -> list[float]:
        return [p.parameter for p in self.points]

    @property
    def modeling(self) -> list[float]:
        return [p.modeling_cost for p in self.points]

    @property
    def operation(self) -> list[float]:
        return [p.operation_cost for p in self.points]

    @property
    def totals(self) -> list[float]:
        return [p.total for p in self.points]

    def to_rows(self) -> list[dict[str, float]]:
        rows = []
        for i, p in enumerate(self.points):
            row = {
                "parameter": p.parameter,
                "modeling_cost": p.modeling_cost,
                "operation_cost": p.operation_cost,
                "total_cost": p.total,
            }
            for name, col in self.extras.items():
                row[name] = col[i]
            rows.append(row)
        return rows


def min_max(values: Sequence[float]) -> list[float]:
    """Scale to [0, 1]; a constant channel maps to zeros."""
    lo, hi = min(values), max(values)
    if hi == lo:
        return [0.0] * len(values)
    span = hi - lo
    return [(v - lo) / span for v in values]


def normalize_curve(curve: CostCurve) -> CostCurve:
    if len(curve) < 2:
        raise ConfigError("normalization needs at least 2 points")
    return CostCurve.from_channels(
        curve.parameters,
        min_max(curve.modeling),
        min_max(curve.operation),
        curve.combiner,
        normalized=True,
        extras=curve.extras,
    )


@dataclass(frozen=True)
class CurveMinimum:
    parameter: float
    total: float
    index: int
    interior: bool


def argmin_total(curve: CostCurve) -> CurveMinimum:
    """Point of smallest total cost; ties go to the smaller parameter."""
    if len(curve) == 0:
        raise ConfigError("argmin of an empty curve")
    totals = curve.totals
    idx = min(range(len(totals)), key=lambda i: (totals[i], i))
    return CurveMinimum(curve.points[idx].parameter, totals[idx], idx, 0 < idx < len(totals) - 1)


def _fmt(v: float) -> str:
    return repr(float(v))


def curve_to_csv(curve: CostCurve) -> str:
    buf = io.StringIO()
    header = list(COLUMNS) + list(curve.extras)
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in curve.to_rows():
        w.writerow([_fmt(row[h]) for h in header])
    return buf.getvalue()


def curve_to_json(curve: CostCurve) -> str:
    doc = {
        "normalized": curve.normalized,
        "combiner": {"kind": curve.combiner.kind, "w_model": curve.combiner.w_model,
                     "w_oper": curve.combiner.w_oper},
        "points": curve.to_rows(),
    }
    return json.dumps(doc, indent=2) + "\n"


def _from_rows(rows: Iterable[dict], normalized: bool, combiner: CostCombiner) -> CostCurve:
    rows = list(rows)
    extra_names = [k for k in (rows[0] if rows else {}) if k not in COLUMNS]
    pts = tuple(
        CostPoint(float(r["parameter"]), float(r["modeling_cost"]), float(r["operation_cost"]),
                  float(r["total_cost"]))
        for r in rows
    )
    extras = {k: tuple(float(r[k]) for r in rows) for k in extra_names}
    return CostCurve(pts, normalized, combiner, extras)


def curve_from_csv(text: str, normalized: bool = True, combiner: CostCombiner = UNIT) -> CostCurve:
    reader = csv.DictReader(io.StringIO(text))
    missing = set(COLUMNS) - set(reader.fieldnames or ())
    if missing:
        raise ConfigError(f"cost curve CSV missing columns {sorted(missing)}")
    return _from_rows(reader, normalized, combiner)


def curve_from_json(text: str) -> CostCurve:
    doc = json.loads(text)
    c = doc.get("combiner", {})
    combiner = CostCombiner(c.get("w_model", 1.0), c.get("w_oper", 1.0), c.get("kind", "weighted_sum"))
    return _from_rows(doc["points"], bool(doc.get("normalized", False)), combiner)


def with_combiner(curve: CostCurve, combiner: CostCombiner) -> CostCurve:
    """Recompute totals under a different combiner."""
    pts = tuple(replace(p, total=total_cost(p.modeling_cost, p.operation_cost, combiner))
                for p in curve.points)
    return CostCurve(pts, curve.normalized, combiner, curve.extras)
