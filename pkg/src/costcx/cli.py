"""Command-line front end.

Every command writes its data to --output (stdout when omitted) and its
diagnostics to stderr. Exit status: 0 success, 1 validation error,
2 runtime or domain error.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable

import numpy as np

from . import __version__
from .cli_io import (
    fixture_path,
    fmt,
    load_fuel,
    load_graph,
    rows_to_csv,
    to_json,
    write_output,
    year_records_csv,
    year_records_json,
)
from .cost_core import CostCombiner, argmin_total, curve_to_csv, curve_to_json
from .errors import ConfigError, CostcxError, DomainError
from .measures import (
    BinaryGrid2D,
    SymbolDistribution,
    box_counting_dimension,
    default_box_sizes,
    description_length_proxy,
    iterate_map_pair,
    koch_raster,
    lacunarity,
    largest_lyapunov,
    logical_depth_proxy,
    read_pbm,
    sandpile_avalanches,
    shannon_entropy,
)

def _int(v) -> int:
    if isinstance(v, bool):
        raise ValueError("expected an integer")
    if isinstance(v, float):
        if v != int(v):
            raise ValueError(f"{v} is not an integer")
        return int(v)
    return int(v)


def _float(v) -> float:
    if isinstance(v, bool):
        raise ValueError("expected a number")
    x = float(v)
    if not math.isfinite(x):
        raise ValueError("must be finite")
    return x


@dataclass(frozen=True)
class Opt:
    name: str
    type: Callable = str
    default: Any = None
    help: str = ""
    required: bool = False
    choices: tuple | None = None
    many: bool = False
    flag: bool = False

    @property
    def cli(self) -> str:
        return "--" + self.name.replace("_", "-")

    def coerce(self, value):
        if self.flag:
            if not isinstance(value, bool):
                raise ConfigError(f"{self.name}: expected true/false")
            return value
        try:
            if self.many:
                if not isinstance(value, list):
                    raise ValueError("expected a list")
                out = [self.type(v) for v in value]
            else:
                out = self.type(value)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"{self.name}: {exc}") from None
        if self.choices and out not in self.choices:
            raise ConfigError(f"{self.name}: {out!r} not one of {', '.join(self.choices)}")
        return out


COMMON = (
    Opt("output", str, None, "output file (default: stdout)"),
    Opt("format", str, "csv", "output format", choices=("csv", "json")),
    Opt("seed", _int, 0, "master seed for every random quantity"),
)

GRID_OPTS = (
    Opt("input", str, None, "PBM grid file (P1 ASCII)"),
    Opt("koch_depth", _int, None, "use a generated Koch-curve raster of this depth instead of --input"),
    Opt("box_sizes", _int, None, "box sizes (default: powers of 3 or 2)", many=True),
)

COMBINER_OPTS = (
    Opt("w_model", _float, 1.0, "modeling-cost weight"),
    Opt("w_oper", _float, 1.0, "operation-cost weight"),
)


def _load_grid(p) -> BinaryGrid2D:
    if (p["input"] is None) == (p["koch_depth"] is None):
        raise ConfigError("give exactly one of --input or --koch-depth")
    if p["koch_depth"] is not None:
        if not 0 <= p["koch_depth"] <= 8:
            raise ConfigError("--koch-depth must lie in [0, 8]")
        return koch_raster(p["koch_depth"])
    try:
        text = Path(p["input"]).read_text(encoding="ascii")
    except FileNotFoundError:
        raise ConfigError(f"{p['input']}: no such file") from None
    except UnicodeDecodeError:
        raise ConfigError(f"{p['input']}: not an ASCII PBM file") from None
    return read_pbm(text)


def _combiner(p) -> CostCombiner:
    return CostCombiner(p["w_model"], p["w_oper"])


def cmd_entropy(p):
    try:
        text = Path(p["input"]).read_text(encoding="utf-8")
    except FileNotFoundError:
        raise ConfigError(f"{p['input']}: no such file") from None
    except UnicodeDecodeError as exc:
        raise ConfigError(f"{p['input']}: not valid UTF-8 ({exc.reason})") from None
    dist = SymbolDistribution.from_text(text, lowercase=p["lowercase"])
    if dist.total == 0:
        raise DomainError("input contains no tokens")
    h = shannon_entropy(dist)
    if p["format"] == "json":
        return to_json({"entropy_bits": h, "symbols": dist.n_symbols, "tokens": dist.total}), []
    return fmt(h) + "\n", []


def cmd_fractal(p):
    grid = _load_grid(p)
    sizes = p["box_sizes"] or default_box_sizes(grid)
    fit = box_counting_dimension(grid, sizes)
    rows = [{"box_size": s, "occupied_boxes": n, "dimension": fit.dimension}
            for s, n in zip(fit.box_sizes, fit.counts)]
    if p["format"] == "json":
        return to_json({"dimension": fit.dimension, "box_sizes": list(fit.box_sizes),
                        "counts": list(fit.counts)}), []
    return rows_to_csv(("box_size", "occupied_boxes", "dimension"), rows), []


def cmd_lacunarity(p):
    grid = _load_grid(p)
    sizes = p["box_sizes"] or default_box_sizes(grid)
    lac = lacunarity(grid, sizes)
    rows = [{"box_size": s, "lacunarity": v} for s, v in lac.items()]
    if p["format"] == "json":
        return to_json(rows), []
    return rows_to_csv(("box_size", "lacunarity"), rows), []


def cmd_lyapunov(p):
    pair = iterate_map_pair(p["map"], p["r"], p["x0"], p["delta0"], p["steps"],
                            renormalize=p["mode"] == "renormalized")
    lam = largest_lyapunov(pair, fit_start=p["fit_start"])
    if p["format"] == "json":
        return to_json({"lyapunov_exponent": lam, "map": p["map"], "r": p["r"],
                        "steps": p["steps"], "mode": p["mode"]}), []
    return fmt(lam) + "\n", []


def cmd_sandpile(p):
    run = sandpile_avalanches(p["width"], p["height"], p["grains"], seed=p["seed"],
                              warmup=p["warmup"], threshold=p["threshold"])
    sizes = [int(s) for s in run.avalanche_sizes]
    if p["format"] == "json":
        return to_json({
            "width": p["width"], "height": p["height"], "warmup": p["warmup"],
            "grains_dropped": run.grains_dropped, "grains_lost": run.state.lost,
            "grains_on_pile": int(run.state.heights.sum()), "avalanche_sizes": sizes,
        }), []
    rows = [{"grain": i, "avalanche_size": s} for i, s in enumerate(sizes)]
    return rows_to_csv(("grain", "avalanche_size"), rows), []


def cmd_describe(p):
    try:
        data = Path(p["input"]).read_bytes()
    except FileNotFoundError:
        raise ConfigError(f"{p['input']}: no such file") from None
    if not data:
        raise DomainError("input file is empty")
    clen, ratio = description_length_proxy(data)
    steps = logical_depth_proxy(data)
    row = {"original_length": len(data), "compressed_length": clen, "ratio": ratio,
           "decompression_steps": steps}
    if p["format"] == "json":
        return to_json(row), []
    return rows_to_csv(tuple(row), [row]), []


def _curve_out(curve, p, extra=None):
    if p["format"] == "json":
        doc = json.loads(curve_to_json(curve))
        m = argmin_total(curve)
        doc["minimum"] = {"parameter": m.parameter, "total": m.total, "index": m.index,
                          "interior": m.interior}
        doc.update(extra or {})
        return to_json(doc)
    return curve_to_csv(curve)


def cmd_kde_sweep(p):
    from .exp_kde import DEFAULT_TARGET, ReconstructionConfig, reconstruct, sweep_samples

    cfg = ReconstructionConfig(p["grid_points"], p["bandwidth_factor"], p["mode"], p["seed"])
    if p["n_step"] < 1:
        raise ConfigError("--n-step must be positive")
    n_values = p["n_values"] or list(range(p["n_min"], p["n_max"] + 1, p["n_step"]))
    curve = sweep_samples(DEFAULT_TARGET, cfg, n_values, p["cost_model"], _combiner(p))
    extra = []
    if (p["dump"] is None) != (p["dump_n"] is None):
        raise ConfigError("--dump and --dump-n go together")
    if p["dump"] is not None:
        rec = reconstruct(DEFAULT_TARGET, p["dump_n"], cfg)
        rows = [{"x": x, "P": a, "R": b} for x, a, b in zip(rec.x, rec.target, rec.estimate)]
        extra.append((p["dump"], rows_to_csv(("x", "P", "R"), rows)))
    return _curve_out(curve, p), extra


def cmd_anneal_sweep(p):
    from .exp_anneal import (
        TRAJECTORY_COLUMNS,
        AgentConfig,
        AnnealSchedule,
        agent_seed,
        default_surface,
        run_agent,
        sweep_agents,
    )

    surface = default_surface(p["surface_seed"], p["components"])
    schedule = AnnealSchedule(p["T0"], p["decay"], p["period"], p["T_min"])
    agent = AgentConfig(p["step_size"], p["noise_scale"], p["max_steps"], p["k_boltzmann"], p["seed"])
    ns = p["n_values"] or list(range(p["n_min"], p["n_max"] + 1))
    sweep = sweep_agents(surface, schedule, agent, ns, p["repetitions"], _combiner(p), p["cost_mode"])
    extra = []
    if p["trajectory"] is not None:
        res = run_agent(surface, schedule, agent, seed=agent_seed(p["seed"], 0, 0))
        rows = [dict(zip(TRAJECTORY_COLUMNS, row)) for row in res.trajectory]
        for r in rows:
            r["step"] = int(r["step"])
        extra.append((p["trajectory"], rows_to_csv(TRAJECTORY_COLUMNS, rows)))
    gx, gy, gf = sweep.minimum
    return _curve_out(sweep.curve, p, {"global_minimum": {"x": gx, "y": gy, "f": gf}}), extra


def cmd_network_budget(p):
    from .exp_network import BudgetPolicy, run_budget_experiment

    paths = [p["nodes"], p["edges"], p["fuel"]]
    if p["fixture"]:
        if any(x is not None for x in paths):
            raise ConfigError("--fixture replaces --nodes/--edges/--fuel")
        paths = [fixture_path("airports.csv"), fixture_path("routes.csv"), fixture_path("fuel.csv")]
    elif any(x is None for x in paths):
        raise ConfigError("network-budget needs --nodes, --edges and --fuel (or --fixture)")
    g = load_graph(paths[0], paths[1])
    fuel = load_fuel(paths[2])
    records = run_budget_experiment(g, fuel, BudgetPolicy(p["budget"], _combiner(p)))
    if p["format"] == "json":
        return year_records_json(records), []
    return year_records_csv(records), []


COMMANDS: dict[str, tuple[str, tuple[Opt, ...], Callable]] = {
    "entropy": ("Shannon entropy of whitespace-delimited tokens", (
        Opt("input", str, None, "UTF-8 text file", required=True),
        Opt("lowercase", bool, False, "fold case before counting", flag=True),
    ), cmd_entropy),
    "fractal": ("box-counting dimension of a binary grid", GRID_OPTS, cmd_fractal),
    "lacunarity": ("gliding-box lacunarity of a binary grid", GRID_OPTS, cmd_lacunarity),
    "lyapunov": ("largest Lyapunov exponent of a 1-D map", (
        Opt("map", str, "logistic", "map family", choices=("logistic",)),
        Opt("r", _float, 4.0, "map parameter"),
        Opt("x0", _float, 0.3, "initial state in (0, 1)"),
        Opt("delta0", _float, 1e-9, "initial separation"),
        Opt("steps", _int, 100000, "iterations"),
        Opt("mode", str, "renormalized", "separation handling", choices=("renormalized", "raw")),
        Opt("fit_start", _int, 0, "first step used in the slope fit"),
    ), cmd_lyapunov),
    "sandpile": ("avalanche sizes of a driven sandpile", (
        Opt("width", _int, 64), Opt("height", _int, 64),
        Opt("grains", _int, 100000, "recorded grain drops"),
        Opt("warmup", _int, 10000, "unrecorded drops before recording"),
        Opt("threshold", _int, 4, "toppling height"),
    ), cmd_sandpile),
    "describe": ("compression-based description length and logical depth", (
        Opt("input", str, None, "any file", required=True),
    ), cmd_describe),
    "kde-sweep": ("sample-count cost sweep of Gaussian-kernel reconstruction", (
        Opt("n_min", _int, 10), Opt("n_max", _int, 2000), Opt("n_step", _int, 10),
        Opt("n_values", _int, None, "explicit sample counts (overrides min/max/step)", many=True),
        Opt("grid_points", _int, 2048), Opt("bandwidth_factor", _float, 1.0),
        Opt("mode", str, "deterministic_weighted", choices=("deterministic_weighted", "random_draw")),
        Opt("cost_model", str, "count", choices=("count", "operations")),
        *COMBINER_OPTS,
        Opt("dump_n", _int, None, "sample count for the reconstruction dump"),
        Opt("dump", str, None, "write x,P,R for --dump-n samples to this file"),
    ), cmd_kde_sweep),
    "anneal-sweep": ("agent-count cost sweep of multi-agent annealing", (
        Opt("n_min", _int, 1), Opt("n_max", _int, 10),
        Opt("n_values", _int, None, "explicit agent counts (overrides min/max)", many=True),
        Opt("repetitions", _int, 30),
        Opt("T0", _float, 1.0), Opt("decay", _float, 0.9), Opt("period", _int, 100),
        Opt("T_min", _float, 1e-3),
        Opt("step_size", _float, 0.05), Opt("noise_scale", _float, 1.0),
        Opt("max_steps", _int, 5000), Opt("k_boltzmann", _float, 1.0),
        Opt("surface_seed", _int, 1, "seed of the landscape generator"),
        Opt("components", _int, 8, "Gaussian wells in the landscape"),
        Opt("cost_mode", str, "steps", choices=("steps", "wallclock")),
        *COMBINER_OPTS,
        Opt("trajectory", str, None, "write step,x,y,f,T of agent 0, repetition 0"),
    ), cmd_anneal_sweep),
    "network-budget": ("constant-complexity airport network over a fuel series", (
        Opt("nodes", str, None, "nodes CSV (id,lat,lon)"),
        Opt("edges", str, None, "edges CSV (src,dst[,weight_km])"),
        Opt("fuel", str, None, "fuel CSV (year,price_usd_per_gallon)"),
        Opt("fixture", bool, False, "use the bundled 30-airport fixture", flag=True),
        Opt("budget", _float, 1.0, "normalized complexity budget"),
        *COMBINER_OPTS,
    ), cmd_network_budget),
}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: error: {message}\n{self.format_usage()}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="costcx", description="Cost-based complexity toolkit.")
    parser.add_argument("--version", action="version", version=f"costcx {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    for name, (desc, opts, _) in COMMANDS.items():
        sp = sub.add_parser(name, help=desc, description=desc, argument_default=argparse.SUPPRESS)
        for o in (*opts, *COMMON):
            if o.flag:
                sp.add_argument(o.cli, dest=o.name, action="store_true", help=o.help)
            else:
                sp.add_argument(o.cli, dest=o.name, type=o.type, choices=o.choices,
                                nargs="+" if o.many else None, help=o.help, metavar=o.name.upper())
        sp.add_argument("--config", dest="config", help="JSON file of option values")
    return parser


def _load_config(path, opts: dict[str, Opt]) -> dict:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError(f"{path}: no such file") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from None
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: expected a JSON object")
    unknown = sorted(set(doc) - set(opts))
    if unknown:
        raise ConfigError(f"{path}: unknown key(s) {', '.join(unknown)}")
    return {k: opts[k].coerce(v) for k, v in doc.items()}


def resolve(command: str, ns: argparse.Namespace) -> dict:
    """Defaults, then --config values, then explicit flags."""
    _, opts, _ = COMMANDS[command]
    table = {o.name: o for o in (*opts, *COMMON)}
    params = {name: o.default for name, o in table.items()}
    given = vars(ns)
    if "config" in given:
        params.update(_load_config(given["config"], table))
    params.update({k: v for k, v in given.items() if k in table})
    for o in table.values():
        if o.required and params[o.name] is None:
            raise ConfigError(f"missing required option {o.cli}")
    return params


def dispatch(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except _UsageError as exc:
        sys.stderr.write(str(exc))
        return 1
    if ns.command is None:
        parser.print_usage(sys.stderr)
        return 1
    command = ns.command
    del ns.command
    try:
        params = resolve(command, ns)
        text, extra = COMMANDS[command][2](params)
        for path, body in extra:
            write_output(path, body)
        write_output(params["output"], text)
    except ConfigError as exc:
        _fail(command, exc)
        return 1
    except CostcxError as exc:
        _fail(command, exc)
        return 2
    except (ValueError, ArithmeticError, OSError, np.linalg.LinAlgError) as exc:
        _fail(command, f"{type(exc).__name__}: {exc}")
        return 2
    return 0


def _fail(command, message):
    sys.stderr.write(f"costcx {command}: error: {message}\n")


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, stream=sys.stderr, format="costcx: %(levelname)s: %(message)s")
    return dispatch(argv)


if __name__ == "__main__":
    sys.exit(main())
