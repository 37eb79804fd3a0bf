"""Command-line front end: ``affine-ramsey <command> [<action>] [options]``.

Every run is described by a :class:`RunConfig` and produces a :class:`RunReport`
(JSON, or CSV for tabular payloads).  ``--config FILE`` re-runs the config echo
of an earlier report.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

import numpy as np

from . import __version__
from .affine import AffineMap, format_map, maps_from_json, parse_map
from .constructions import (
    BlockSet,
    build_example45,
    build_thickbad,
    example45_growth_checks,
    thickbad_chain_checks,
    verify_no_pattern,
)
from .errors import AffineRamseyError, BudgetExceeded, ConfigError, InvariantViolation
from .finite_models import (
    additive_group,
    build_affine_semigroup,
    multiplicative_semigroup,
    return_sets,
    semigroup_summary,
)
from .largeness import (
    FolnerSpec,
    check_syndetic_certificate,
    density,
    find_syndetic_certificate,
    find_thick_witness,
    finite_sums,
)
from .patterns import (
    Coloring,
    find_monochromatic,
    minimal_ramsey_window,
    multsyndetic_pattern_check,
    pattern_kind,
    sumproduct_in_set,
)
from .rings import format_fraction, ideal_index, lid_probe, non_amenability_witness, parse_ring
from .setexpr import ExprSet, eval_set_expr, parse_set_expr
from .windows import WindowSet, parse_window, set_from_json

SCHEMA_VERSION = 1
EXIT_OK, EXIT_CONFIG, EXIT_BUDGET, EXIT_INVARIANT = 0, 2, 3, 4
_JS_SAFE = 2**53


# ---------------------------------------------------------------------------
# config and report


@dataclass
class RunConfig:
    command: str
    action: str | None = None
    params: dict = field(default_factory=dict)
    out: str | None = None
    format: str = "json"
    threads: int = 1
    seed: int = 0
    budget: int | None = None

    def __post_init__(self):
        if self.format not in ("json", "csv"):
            raise ConfigError(f"format must be json or csv, got {self.format!r}", "format")
        if self.threads < 1:
            raise ConfigError("threads must be >= 1", "threads")

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, obj: dict | str) -> "RunConfig":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls(**obj)


@dataclass
class RunReport:
    config: RunConfig
    result: Any
    counters: dict = field(default_factory=dict)
    wall_time: float = 0.0
    rows: list | None = None  # tabular view for CSV

    def to_json(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "tool": "affine-ramsey",
            "tool_version": __version__,
            "config": self.config.to_json(),
            "result": jsonable(self.result),
            "counters": jsonable(self.counters),
            "wall_time": round(self.wall_time, 6),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2, ensure_ascii=False)

    def payload(self) -> str:
        """The report without wall time; identical across reruns of one config."""
        obj = self.to_json()
        obj.pop("wall_time")
        return json.dumps(obj, sort_keys=True, ensure_ascii=False)

    def to_csv(self) -> str:
        if not self.rows:
            raise ConfigError(f"{self.config.command} has no tabular payload; use --format json", "format")
        buf = io.StringIO()
        cols = list(self.rows[0])
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        for r in self.rows:
            w.writerow({k: _scalar(v) for k, v in r.items()})
        return buf.getvalue()


def _scalar(v):
    if isinstance(v, Fraction):
        return format_fraction(v)
    return v


def jsonable(obj):
    """Exact rationals as "p/q", integers beyond 2^53 as decimal strings."""
    if hasattr(obj, "to_json") and not isinstance(obj, type):
        return jsonable(obj.to_json())
    if isinstance(obj, Fraction):
        return format_fraction(obj)
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        v = int(obj)
        return v if abs(v) < _JS_SAFE else str(v)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(jsonable(v) for v in obj)
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    return obj


# ---------------------------------------------------------------------------
# input helpers


def _ring(p: dict, default: str | None = None):
    name = p.get("ring") or default
    if name is None:
        raise ConfigError("--ring is required", "ring")
    return parse_ring(name)


def _window(p: dict, key: str = "window", ring=None):
    text = p.get(key)
    if text is None:
        raise ConfigError(f"--{key.replace('_', '-')} is required", key)
    return parse_window(text, ring if ring is not None else p.get("ring"))


def _load_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise ConfigError(f"no such file {path!r}", "file") from None
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: invalid JSON ({e})", "file") from None


def _set_on(p: dict, window) -> WindowSet:
    """``--set EXPR`` or ``--set-file FILE`` evaluated on ``window``."""
    if p.get("set") is not None:
        return eval_set_expr(parse_set_expr(p["set"]), window)
    if p.get("set_file") is not None:
        return set_from_json(_load_json(p["set_file"]), window)
    raise ConfigError("one of --set or --set-file is required", "set")


def _exact_set(p: dict, ring):
    """An exact membership oracle when the set is an expression, else the window set."""
    if p.get("set") is not None:
        return ExprSet(parse_set_expr(p["set"]), ring)
    if p.get("set_file") is not None:
        obj = _load_json(p["set_file"])
        if "expr" in obj:
            return ExprSet(parse_set_expr(obj["expr"]), ring)
        return set_from_json(obj)
    raise ConfigError("one of --set or --set-file is required", "set")


def _maps(p: dict, ring) -> list[AffineMap]:
    if p.get("maps_file"):
        return maps_from_json(_load_json(p["maps_file"]), ring)
    if p.get("maps"):
        return [parse_map(m, ring) for m in p["maps"]]
    raise ConfigError("give --maps FILE or --map u*x+v (repeatable)", "maps")


def _int_list(text: str | list, what: str) -> list[int]:
    if isinstance(text, list):
        return [int(v) for v in text]
    try:
        return [int(v) for v in str(text).replace(" ", "").split(",") if v]
    except ValueError:
        raise ConfigError(f"{what}: expected comma-separated integers, got {text!r}", what) from None


# ---------------------------------------------------------------------------
# handlers: (params, config) -> (result, counters, rows)


def cmd_ring(p: dict, cfg: RunConfig):
    R = _ring(p)
    act = cfg.action
    if act == "index":
        x = R.parse(p["element"])
        res = ideal_index(R, x)
        out = {"ring": R.name, "element": R.format(x), "index": res.index}
        if res.index <= (p.get("max_reps") or 50):
            out["representatives"] = [R.format(r) for r in res.representatives()]
        if not R.is_field and not R.is_unit(x):
            out["non_amenability_witness"] = R.format(non_amenability_witness(R, x))
        return out, {}, None
    if act == "probe":
        W = _window(p, ring=R)
        rng = random.Random(cfg.seed)
        pool = [e for e in R.elements_of_height(p["height"]) if not R.is_zero(e)]
        xs = [rng.choice(pool) for _ in range(p["samples"])]
        lines = lid_probe(R, xs, W)
        rows = [{"x": R.format(l.x), "index": l.index, "passed": l.passed, "checked": l.checked} for l in lines]
        return {"ring": R.name, "window": W.to_json(), "all_passed": all(l.passed for l in lines), "lines": rows}, {}, rows
    if act == "enumerate":
        els = R.elements_of_height(p["height"])
        return {"ring": R.name, "height": p["height"], "elements": [R.format(e) for e in els]}, {}, None
    raise ConfigError(f"unknown ring action {act!r}", "action")


def _build(p: dict, name: str) -> BlockSet:
    if name == "thickbad":
        return build_thickbad(p["blocks"])
    if name == "example45":
        seed = [Fraction(s) for s in (p.get("seed_set") or "1").split(",")]
        return build_example45(p["blocks"], seed)
    raise ConfigError(f"unknown construction {name!r}", "construction")


def cmd_construct(p: dict, cfg: RunConfig):
    bs = _build(p, cfg.action)
    checks = thickbad_chain_checks(bs) if cfg.action == "thickbad" else example45_growth_checks(bs)
    return {"set": bs.to_json(), "checks": checks, "checks_ok": all(c["ok"] for c in checks)}, {}, None


def cmd_verify(p: dict, cfg: RunConfig):
    bs = _build(p, cfg.action)
    pattern = p.get("pattern") or ("sumproduct" if cfg.action == "thickbad" else "triple")
    window = None
    if p.get("window"):
        window = parse_window(p["window"], "z" if cfg.action == "thickbad" else "q")
    v = verify_no_pattern(bs, pattern, window)
    return {"verdict": v.to_json(), "window": None if window is None else window.to_json()}, {"checked": v.checked}, None


def cmd_certify(p: dict, cfg: RunConfig):
    W = _window(p)
    S = _exact_set(p, W.ring)
    if p.get("maps") or p.get("maps_file"):
        cert = check_syndetic_certificate(S, _maps(p, W.ring), W)
    else:
        cert = find_syndetic_certificate(S, W, p["height"], p["max_maps"], workers=cfg.threads)
    return cert.to_json(), {"out_of_window": getattr(cert, "out_of_window", 0)}, None


def cmd_witness(p: dict, cfg: RunConfig):
    W = _window(p)
    if p.get("set_window"):
        T = _set_on(p, parse_window(p["set_window"], W.ring))
    else:
        T = _exact_set(p, W.ring)
    w = find_thick_witness(T, _maps(p, W.ring), W)
    return w.to_json(), {"checked": w.checked}, None


def _folner(p: dict) -> FolnerSpec:
    kind = p.get("folner") or "nat"
    if kind == "thick":
        tw = _window(p, "thick_window")
        return FolnerSpec("thick", tw.ring, _set_on(p, tw) if p.get("thick_set") is None else eval_set_expr(p["thick_set"], tw))
    return FolnerSpec(kind, parse_ring(p["ring"]) if p.get("ring") else None)


def cmd_density(p: dict, cfg: RunConfig):
    spec = _folner(p)
    e = p.get("set")
    if e is None:
        raise ConfigError("--set is required", "set")
    rep = density(parse_set_expr(e), spec, p["upto"], p.get("tail") or 0.5)
    rows = [{"n": r["n"], "count": r["count"], "size": r["size"], "ratio": Fraction(r["count"], r["size"])} for r in rep.rows()]
    return rep.to_json(series=p.get("series")), {}, rows


def cmd_search(p: dict, cfg: RunConfig):
    mw = p.get("max_witnesses") or 100
    if cfg.action == "multsyndetic":
        W = _window(p)
        S = _set_on(p, W)
        wl = multsyndetic_pattern_check(S, _int_list(p["F"], "F"), mw, relaxed=bool(p.get("relaxed")))
        return wl.to_json(), {"witnesses": wl.count}, None
    pat = pattern_kind(p.get("pattern") or "sumproduct_pair")
    yw = parse_window(p["y_window"], p.get("ring")) if p.get("y_window") else None
    if p.get("coloring"):
        c = Coloring.from_json(_load_json(p["coloring"]))
    elif p.get("random_colors"):
        W = _window(p)
        c = Coloring.random(W, p["random_colors"], np.random.default_rng(cfg.seed))
    else:
        c = None
    if c is not None:
        wl = find_monochromatic(c, pat, mw, y_window=yw)
        res = wl.to_json()
        if p.get("random_colors"):
            res["coloring"] = c.to_json()
    else:
        W = _window(p)
        wl = sumproduct_in_set(_set_on(p, W), p.get("subring"), mw, y_window=yw, pattern=p.get("pattern"))
        res = wl.to_json()
    return res, {"witnesses": wl.count, "out_of_window_skips": wl.skipped_out_of_window}, None


def cmd_ramsey(p: dict, cfg: RunConfig):
    budget = cfg.budget if cfg.budget is not None else p.get("budget")
    res = minimal_ramsey_window(p["pattern"], p["colors"], p["max_n"], budget)
    return res.to_json(), {"nodes": res.nodes}, None


def cmd_semigroup(p: dict, cfg: RunConfig):
    R = _ring(p)
    if not R.name.startswith("zmod:"):
        raise ConfigError("semigroup analysis needs --ring zmod:n", "ring")
    n = R.n
    kind = p.get("kind") or "affine"
    if kind == "affine":
        S = build_affine_semigroup(n, bool(p.get("units_only")))
    elif kind == "mult":
        S = multiplicative_semigroup(n)
    elif kind == "add":
        S = additive_group(n)
    else:
        raise ConfigError(f"unknown semigroup kind {kind!r}", "kind")
    return semigroup_summary(S), {"size": S.size}, None


def cmd_returnsets(p: dict, cfg: RunConfig):
    n = p["mod"]
    if p.get("sets_file"):
        obj = _load_json(p["sets_file"])
        sets = obj["sets"] if isinstance(obj, dict) else obj
    elif p.get("sets"):
        sets = [_int_list(s, "sets") for s in p["sets"]]
    else:
        raise ConfigError("give --sets FILE or --set-list 0,1 (repeatable)", "sets")
    rep = return_sets(n, sets, delta=p.get("delta"), epsilon=p.get("epsilon"))
    return rep.to_json(), {}, rep.rows()


def cmd_fs(p: dict, cfg: RunConfig):
    R = parse_ring(p["ring"]) if p.get("ring") else None
    vals = [R.parse(v) for v in p["values"].split(",")] if R else _int_list(p["values"], "values")
    sums = finite_sums(vals, R)
    fmt = R.format if R else str
    return {"values": [fmt(v) for v in vals], "sums": [fmt(s) for s in sums], "count": len(sums)}, {}, [
        {"sum": fmt(s)} for s in sums
    ]


HANDLERS = {
    "ring": cmd_ring,
    "construct": cmd_construct,
    "verify": cmd_verify,
    "certify": cmd_certify,
    "witness": cmd_witness,
    "density": cmd_density,
    "search": cmd_search,
    "ramsey": cmd_ramsey,
    "semigroup": cmd_semigroup,
    "returnsets": cmd_returnsets,
    "fs": cmd_fs,
}


def run(config: RunConfig) -> RunReport:
    if config.command not in HANDLERS:
        raise ConfigError(f"unknown command {config.command!r}", "command")
    t0 = time.perf_counter()
    try:
        result, counters, rows = HANDLERS[config.command](config.params, config)
    except KeyError as e:
        if isinstance(e, AffineRamseyError):
            raise
        raise ConfigError(f"missing parameter {e.args[0]!r}", str(e.args[0])) from None
    return RunReport(config, result, counters, time.perf_counter() - t0, rows)


# ---------------------------------------------------------------------------
# argument parsing


def _global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--out", default=d(None), help="write the report here instead of stdout")
    parser.add_argument("--format", choices=("json", "csv"), default=d("json"))
    parser.add_argument("--threads", type=int, default=d(1))
    parser.add_argument("--seed", type=int, default=d(0))
    parser.add_argument("--budget", type=int, default=d(None), help="node budget for searches")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="affine-ramsey", description="Affine largeness and sum-product patterns.")
    _global_flags(ap, suppress=False)
    ap.add_argument("--config", help="re-run a RunConfig (or a report's config echo) from JSON")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command")
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)

    def cmd(name, help_text, actions=None):
        p = sub.add_parser(name, help=help_text, parents=[common])
        if actions:
            p.add_argument("action", choices=actions)
        return p

    p = cmd("ring", "ideal index, LID probe, enumeration", ["index", "probe", "enumerate"])
    p.add_argument("--ring", required=True)
    p.add_argument("--element")
    p.add_argument("--max-reps", type=int)
    p.add_argument("--window")
    p.add_argument("--samples", type=int, default=10)
    p.add_argument("--height", type=int, default=2)

    for name, text in (("construct", "build a counterexample set"), ("verify", "check a construction for its pattern")):
        p = cmd(name, text, ["thickbad", "example45"])
        p.add_argument("--blocks", type=int, required=True)
        p.add_argument("--seed-set", help="example45 seed E_0, comma-separated (default 1)")
        if name == "verify":
            p.add_argument("--window")
            p.add_argument("--pattern", choices=("sumproduct", "triple"))

    def set_args(p):
        p.add_argument("--set", help="set expression")
        p.add_argument("--set-file", help="set JSON ({ring, window, expr|elements})")
        p.add_argument("--ring")
        p.add_argument("--window")

    p = cmd("certify", "affine syndeticity certificate on a window", ["syndetic"])
    set_args(p)
    p.add_argument("--height", type=int, default=1)
    p.add_argument("--max-maps", type=int, default=4)
    p.add_argument("--maps", dest="maps_file")
    p.add_argument("--map", dest="maps", action="append")

    p = cmd("witness", "affine thickness witness on a window", ["thick"])
    set_args(p)
    p.add_argument("--set-window", help="truncate the set to this window (images must land inside)")
    p.add_argument("--maps", dest="maps_file")
    p.add_argument("--map", dest="maps", action="append")

    p = cmd("density", "density ratios along a Følner sequence")
    p.add_argument("--set", required=True)
    p.add_argument("--folner", choices=("nat", "int", "farey", "thick"), default="nat")
    p.add_argument("--ring")
    p.add_argument("--upto", type=int, required=True)
    p.add_argument("--tail", type=float, default=0.5)
    p.add_argument("--thick-set")
    p.add_argument("--thick-window")
    p.add_argument("--series", action="store_true", default=None)

    p = cmd("search", "pattern witnesses in a coloring or a set", ["pattern", "multsyndetic"])
    set_args(p)
    p.add_argument("--pattern")
    p.add_argument("--coloring", help="coloring JSON {window, colors}")
    p.add_argument("--random-colors", type=int, help="use a seeded random r-coloring of --window")
    p.add_argument("--subring")
    p.add_argument("--y-window")
    p.add_argument("--max-witnesses", type=int, default=100)
    p.add_argument("--F", help="multiplicative shifts, comma-separated")
    p.add_argument("--relaxed", action="store_true")

    p = cmd("ramsey", "least N forcing a monochromatic pattern", ["minimal-n"])
    p.add_argument("--pattern", required=True)
    p.add_argument("--colors", type=int, required=True)
    p.add_argument("--max-n", type=int, required=True)

    p = cmd("semigroup", "idempotents and minimal ideals of a finite semigroup", ["analyze"])
    p.add_argument("--ring", required=True)
    p.add_argument("--units-only", action="store_true")
    p.add_argument("--kind", choices=("affine", "mult", "add"), default="affine")

    p = cmd("returnsets", "return sets R(B, .) of the affine action on Z/n")
    p.add_argument("--mod", type=int, required=True)
    p.add_argument("--sets", dest="sets_file", help="JSON list of residue lists")
    p.add_argument("--set-list", dest="sets", action="append", help="comma-separated residues (repeatable)")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--delta")
    g.add_argument("--epsilon")

    p = cmd("fs", "finite sums of a list")
    p.add_argument("--values", required=True)
    p.add_argument("--ring")
    return ap


_GLOBAL = ("out", "format", "threads", "seed", "budget")


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    params = {k: v for k, v in vars(ns).items() if k not in _GLOBAL + ("command", "action", "config") and v is not None}
    for key in ("delta", "epsilon"):
        if key in params:
            try:
                params[key] = format_fraction(Fraction(params[key]))
            except ValueError:
                raise ConfigError(f"--{key}: not a number: {params[key]!r}", key) from None
    return RunConfig(ns.command, getattr(ns, "action", None), params, ns.out, ns.format, ns.threads, ns.seed, ns.budget)


def _emit(report: RunReport, cfg: RunConfig) -> None:
    text = report.to_csv() if cfg.format == "csv" else report.dumps() + "\n"
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)


def _fail(code: int, err: Exception, field_name: str | None = None) -> int:
    obj = {"error": type(err).__name__, "message": str(err)}
    if field_name:
        obj["field"] = field_name
    sys.stderr.write(json.dumps(obj, sort_keys=True) + "\n")
    return code


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_CONFIG if e.code else EXIT_OK
    try:
        if ns.config:
            obj = _load_json(ns.config)
            cfg = RunConfig.from_json(obj.get("config", obj))
            if ns.out is not None:
                cfg.out = ns.out
        elif ns.command is None:
            parser.print_help(sys.stderr)
            return EXIT_CONFIG
        else:
            cfg = config_from_args(ns)
        report = run(cfg)
        _emit(report, cfg)
    except BudgetExceeded as e:
        return _fail(EXIT_BUDGET, e)
    except (InvariantViolation, AssertionError) as e:
        return _fail(EXIT_INVARIANT, e)
    except ConfigError as e:
        return _fail(EXIT_CONFIG, e, e.field)
    except (AffineRamseyError, ValueError, TypeError) as e:
        return _fail(EXIT_CONFIG, e)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
