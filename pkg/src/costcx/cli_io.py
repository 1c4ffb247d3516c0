"""Dataset ingestion and result serialization."""

from __future__ import annotations

import csv
import io
import json
import math
import os
import sys
import tempfile
from importlib import resources
from pathlib import Path
from typing import Sequence

from .errors import ConfigError
from .exp_network import (
    YEAR_COLUMNS,
    FuelSeries,
    WeightedGraph,
    YearRecord,
    graph_from_coords,
    make_edge,
)


def _read_text(path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except FileNotFoundError:
        raise ConfigError(f"{path}: no such file") from None
    except UnicodeDecodeError as exc:
        raise ConfigError(f"{path}: not valid UTF-8 ({exc.reason})") from None


def _rows(path, required: Sequence[str], optional: Sequence[str] = ()):
    """Yield (line number, row dict) after checking the header."""
    reader = csv.DictReader(io.StringIO(_read_text(path)))
    header = reader.fieldnames or []
    missing = [c for c in required if c not in header]
    if missing:
        raise ConfigError(f"{path}:1: header missing column(s) {', '.join(missing)}")
    extra = [c for c in header if c not in required and c not in optional]
    if extra:
        raise ConfigError(f"{path}:1: unexpected column(s) {', '.join(extra)}")
    for row in reader:
        if None in row:
            raise ConfigError(f"{path}:{reader.line_num}: too many fields")
        yield reader.line_num, row


def _number(path, line, name, text, allow_empty=False):
    text = (text or "").strip()
    if text == "" and allow_empty:
        return None
    try:
        v = float(text)
    except ValueError:
        raise ConfigError(f"{path}:{line}: {name} {text!r} is not a number") from None
    if not math.isfinite(v):
        raise ConfigError(f"{path}:{line}: {name} must be finite")
    return v


def load_graph(nodes_path, edges_path) -> WeightedGraph:
    """Read `id,lat,lon` nodes and `src,dst[,weight_km]` edges into a
    connected graph. A supplied weight takes precedence over the
    great-circle distance."""
    coords: dict[str, tuple[float, float] | None] = {}
    for line, row in _rows(nodes_path, ("id", "lat", "lon")):
        nid = (row["id"] or "").strip()
        if not nid:
            raise ConfigError(f"{nodes_path}:{line}: empty node id")
        if nid in coords:
            raise ConfigError(f"{nodes_path}:{line}: duplicate node id {nid!r}")
        lat = _number(nodes_path, line, "lat", row["lat"], allow_empty=True)
        lon = _number(nodes_path, line, "lon", row["lon"], allow_empty=True)
        if (lat is None) != (lon is None):
            raise ConfigError(f"{nodes_path}:{line}: give both lat and lon or neither")
        if lat is not None and not (-90 <= lat <= 90 and -180 <= lon <= 180):
            raise ConfigError(f"{nodes_path}:{line}: coordinates out of range")
        coords[nid] = None if lat is None else (lat, lon)
    if len(coords) < 2:
        raise ConfigError(f"{nodes_path}: need at least 2 nodes")

    pairs = []
    seen: dict[tuple[str, str], int] = {}
    for line, row in _rows(edges_path, ("src", "dst"), ("weight_km",)):
        u, v = (row["src"] or "").strip(), (row["dst"] or "").strip()
        for nid in (u, v):
            if nid not in coords:
                raise ConfigError(f"{edges_path}:{line}: unknown node id {nid!r}")
        if u == v:
            raise ConfigError(f"{edges_path}:{line}: self-loop on {u!r}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise ConfigError(f"{edges_path}:{line}: duplicate edge {u}-{v} (first on line {seen[key]})")
        seen[key] = line
        w = _number(edges_path, line, "weight_km", row.get("weight_km"), allow_empty=True)
        if w is not None and w <= 0:
            raise ConfigError(f"{edges_path}:{line}: weight_km must be positive")
        if w is None and (coords[u] is None or coords[v] is None):
            raise ConfigError(f"{edges_path}:{line}: no weight given and endpoint lacks coordinates")
        pairs.append((u, v, w))
    g = graph_from_coords(coords, pairs)
    g.require_connected()
    return g


def load_fuel(path) -> FuelSeries:
    years, prices = [], []
    for line, row in _rows(path, ("year", "price_usd_per_gallon")):
        y = _number(path, line, "year", row["year"])
        if y != int(y):
            raise ConfigError(f"{path}:{line}: year must be an integer")
        p = _number(path, line, "price_usd_per_gallon", row["price_usd_per_gallon"])
        if p <= 0:
            raise ConfigError(f"{path}:{line}: price must be positive")
        if years and int(y) <= years[-1]:
            raise ConfigError(f"{path}:{line}: years must be strictly increasing")
        years.append(int(y))
        prices.append(p)
    return FuelSeries(tuple(years), tuple(prices))


def fixture_path(name: str) -> Path:
    """Path to a bundled fixture: airports.csv, routes.csv or fuel.csv."""
    return Path(str(resources.files("costcx") / "data" / name))


def load_fixture() -> tuple[WeightedGraph, FuelSeries]:
    """The bundled 30-airport network with its synthetic 2000-2019 fuel series."""
    g = load_graph(fixture_path("airports.csv"), fixture_path("routes.csv"))
    return g, load_fuel(fixture_path("fuel.csv"))


def fmt(v) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, int):
        return str(v)
    return repr(float(v))


def rows_to_csv(columns: Sequence[str], rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([fmt(r[c]) for c in columns])
    return buf.getvalue()


def csv_to_rows(text: str) -> list[dict[str, str]]:
    return list(csv.DictReader(io.StringIO(text)))


def to_json(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def year_records_csv(records: Sequence[YearRecord]) -> str:
    return rows_to_csv(YEAR_COLUMNS, [r.row() for r in records])


def year_records_json(records: Sequence[YearRecord]) -> str:
    return to_json([
        {**r.row(), "modeling_budget": r.modeling_budget, "clamped": r.clamped,
         "edges": [[e.u, e.v, e.weight] for e in r.edges]}
        for r in records
    ])


def year_records_from_csv(text: str) -> list[dict]:
    out = []
    for r in csv_to_rows(text):
        out.append({
            k: (int(r[k]) if k in ("year", "edge_count") else float(r[k])) for k in YEAR_COLUMNS
        })
    return out


def year_records_from_json(text: str) -> list[YearRecord]:
    out = []
    for d in json.loads(text):
        edges = tuple(make_edge(u, v, w) for u, v, w in d.pop("edges", []))
        out.append(YearRecord(**d, edges=edges))
    return out


def write_output(path, text: str) -> None:
    """Write atomically (temp file + rename); `None` or "-" means stdout."""
    if path is None or str(path) == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    path = Path(path)
    parent = path.parent if str(path.parent) else Path(".")
    if not parent.is_dir():
        raise ConfigError(f"output directory {parent} does not exist")
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
