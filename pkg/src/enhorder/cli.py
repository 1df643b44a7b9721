"""Command-line front end.

Subcommands::

    enhorder eval DIST --what {cdf,sf,pdf,quantile,hazard,shape} [--points P ...]
    enhorder check-order ORDER DIST_F DIST_G
    enhorder verify CONFIG
    enhorder scan THEOREM_ID [--n-samples N] [--relation R] [--range KEY=LO,HI ...]
    enhorder plotdata {hazard-curves,ordering-curves,lorenz-curves} [DIST ...]

Distributions are written either as JSON objects (see ``dist`` in the
bundled schema) or in shorthand::

    enh:ALPHA,LAMBDA,BETA     nh:ALPHA,LAMBDA     ge:LAMBDA,BETA     exp:RATE
    es:ALPHA,LAMBDA           (exponential baseline)
    es:ALPHA,LAMBDA,ALPHA0    (NH(ALPHA0) baseline)
    max(D1;D2;...)            parallel system of independent components
    min(D1;D2;...|COPULA)     series system; COPULA is independence, gumbel:THETA or clayton:THETA

Exit codes: 0 everything held, 1 an order or scenario was violated,
2 usage or validation error (the message names the offending field).

Numbers are written with 17 significant digits; non-finite values become
JSON ``null``. CSV output has a header row, comma separators and LF line
endings.
"""

from __future__ import annotations

import argparse
import csv
import enum
import io
import json
import math
import re
import sys
from dataclasses import dataclass
from importlib import resources
from typing import Any, Sequence

import jsonschema
import numpy as np

from . import __version__
from ._numeric import DomainError
from .copula import INDEPENDENCE, ArchGenerator
from .dist import (
    DEFAULT_GRID_POINTS,
    DEFAULT_U_MAX,
    DEFAULT_U_MIN,
    Baseline,
    ENHParams,
    ESSpec,
    classify_hazard_shape,
)
from .extremes import ParallelSystem, SampleSpec, SeriesSystem
from .orders import OrderName, OrderVerdict, ProbGrid, check_order, lorenz_curve
from .verify import SCENARIOS, ScenarioReport, counterexample_scan, run_scenario

__all__ = ["main", "dumps", "parse_dist", "load_config", "HAZARD_EXEMPLARS"]

EXIT_OK, EXIT_VIOLATED, EXIT_USAGE = 0, 1, 2

# one representative per hazard shape
HAZARD_EXEMPLARS = {
    "increasing": "enh:2,1,1",
    "decreasing": "enh:0.5,1,0.5",
    "unimodal": "enh:0.5,1,2",
    "bathtub": "enh:2,1,0.5",
}


class UsageError(Exception):
    """Bad input detected by the CLI itself; ``field`` names the culprit."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


# ---------------------------------------------------------------------------
# serialisation

def _fmt(x: float) -> str:
    return format(x, ".17g")


def _plain(obj: Any) -> Any:
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    return obj


def dumps(obj: Any) -> str:
    """Compact JSON with 17 significant digits and ``null`` for non-finite floats."""
    obj = _plain(obj)
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _fmt(obj) if math.isfinite(obj) else "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ",".join(f"{json.dumps(str(k))}:{dumps(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(dumps(v) for v in obj) + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _csv_cell(v: Any) -> str:
    v = _plain(v)
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return _fmt(v) if math.isfinite(v) else ""
    return "" if v is None else str(v)


def write_csv(header: Sequence[str] | None, rows, stream) -> None:
    """Rows with an optional header line; LF line endings, 17-digit floats."""
    w = csv.writer(stream, lineterminator="\n")
    if header is not None:
        w.writerow(header)
    for row in rows:
        w.writerow([_csv_cell(v) for v in row])


# ---------------------------------------------------------------------------
# distribution specs

_NUM = r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?"


def _numbers(field: str, text: str, count: Sequence[int]) -> list[float]:
    parts = [p.strip() for p in text.split(",")] if text.strip() else []
    if len(parts) not in count or not all(re.fullmatch(_NUM, p) for p in parts):
        want = " or ".join(str(c) for c in count)
        raise UsageError(field, f"expected {want} comma-separated numbers, got {text!r}")
    return [float(p) for p in parts]


def parse_generator(text: str) -> ArchGenerator:
    text = text.strip()
    if text in ("", "independence"):
        return INDEPENDENCE
    family, _, theta = text.partition(":")
    if family not in ("gumbel", "clayton"):
        raise UsageError("copula", f"unknown copula {family!r}")
    return ArchGenerator(family, _numbers("theta", theta, (1,))[0])


def _parse_marginal(text: str):
    family, sep, args = text.strip().partition(":")
    if not sep:
        raise UsageError("dist", f"cannot parse {text!r}")
    if family == "enh":
        a, l, b = _numbers("enh", args, (3,))
        return ENHParams(a, l, b)
    if family == "nh":
        a, l = _numbers("nh", args, (2,))
        return ENHParams(a, l, 1.0)
    if family == "ge":
        l, b = _numbers("ge", args, (2,))
        return ENHParams(1.0, l, b)
    if family == "exp":
        (rate,) = _numbers("exp", args, (1,))
        return ENHParams(1.0, rate, 1.0)
    if family == "es":
        vals = _numbers("es", args, (2, 3))
        base = Baseline("nh", vals[2]) if len(vals) == 3 else Baseline("exponential")
        return ESSpec(vals[0], vals[1], base)
    raise UsageError("dist", f"unknown family {family!r}")


def _dist_from_json(obj: dict):
    _validate(obj, "#/$defs/dist", "dist")
    fam = obj["family"]
    if fam == "enh":
        return ENHParams(obj["alpha"], obj["lambda"], obj["beta"])
    if fam == "es":
        b = obj.get("baseline", {"kind": "exponential"})
        return ESSpec(obj["alpha"], obj["lambda"], Baseline(b["kind"], b.get("alpha", 1.0)))
    comps = tuple(_dist_from_json(c) for c in obj["components"])
    cop = obj.get("copula")
    gen = None if cop is None else ArchGenerator(cop["family"], cop.get("theta", 1.0))
    if fam == "max":
        return ParallelSystem(SampleSpec(comps, gen))
    return SeriesSystem(SampleSpec(comps, gen))


def parse_dist(text: str):
    """Build a distribution handle from shorthand or a JSON object."""
    text = text.strip()
    if text.startswith("{"):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise UsageError("dist", f"invalid JSON: {exc.msg}") from None
        return _dist_from_json(obj)
    m = re.fullmatch(r"(max|min)\((.*)\)", text)
    if m is None:
        return _parse_marginal(text)
    body, _, cop = m.group(2).partition("|")
    comps = tuple(_parse_marginal(c) for c in body.split(";"))
    gen = parse_generator(cop) if cop else None
    if m.group(1) == "max":
        return ParallelSystem(SampleSpec(comps, gen))
    return SeriesSystem(SampleSpec(comps, gen))


# ---------------------------------------------------------------------------
# config handling

def _schema() -> dict:
    return json.loads(resources.files("enhorder.data").joinpath("config.schema.json").read_text("utf-8"))


def _branches(err) -> list[list]:
    groups: dict[int, list] = {}
    for sub in err.context:
        groups.setdefault(sub.relative_schema_path[0], []).append(sub)
    return list(groups.values())


def _family_fits(errs, base: list) -> bool:
    """Whether a ``oneOf`` branch accepts the ``family`` of the object at ``base``.

    Nested alternatives at the same location fit if any of them does.
    """
    for e in errs:
        path = list(e.absolute_path)
        if e.validator in ("const", "enum") and path == base + ["family"]:
            return False
        if e.context and path == base and not any(_family_fits(b, base) for b in _branches(e)):
            return False
    return True


def _most_specific(err):
    """Descend through ``oneOf`` failures into the branch whose ``family`` matched.

    ``best_match`` alone tends to report the family mismatch of some other
    branch, which hides the real problem (say, a missing ``beta``).
    """
    while err.context:
        base = list(err.absolute_path)
        live = [b for b in _branches(err) if _family_fits(b, base)]
        if len(live) != 1:
            break
        if len(live[0]) > 1:
            # best_match would descend into any context again, so only leaves go in
            return jsonschema.exceptions.best_match(live[0])
        err = live[0][0]
    return err


def _validate(instance: Any, ref: str | None, field: str) -> None:
    schema = _schema()
    if ref is not None:
        schema = {"$schema": schema["$schema"], "$defs": schema["$defs"], "$ref": ref}
    validator = jsonschema.Draft202012Validator(schema)
    errors = sorted(validator.iter_errors(instance), key=lambda e: list(e.absolute_path))
    if errors:
        err = jsonschema.exceptions.best_match([_most_specific(e) for e in errors])
        where = "/".join(str(p) for p in err.absolute_path) or field
        raise UsageError(where, err.message)


def load_config(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise UsageError("config", f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError("config", f"invalid JSON at line {exc.lineno}: {exc.msg}") from None
    _validate(cfg, None, "config")
    return cfg


def bundled_config(name: str = "full_theorems.json") -> str:
    """Filesystem path of a config shipped with the package."""
    return str(resources.files("enhorder.data").joinpath(name))


# ---------------------------------------------------------------------------
# commands

@dataclass
class _Out:
    fmt: str
    stream: Any
    header_written: bool = False


def _grid(args, cfg: dict | None = None) -> ProbGrid:
    g = dict((cfg or {}).get("grid", {}))
    points = args.grid_points if args.grid_points is not None else g.get("points", DEFAULT_GRID_POINTS)
    u_min = args.u_min if args.u_min is not None else g.get("u_min", DEFAULT_U_MIN)
    u_max = args.u_max if args.u_max is not None else g.get("u_max", DEFAULT_U_MAX)
    if points < 8:
        raise UsageError("grid-points", "need at least 8 grid points")
    if not 0 < u_min < u_max < 1:
        raise UsageError("u-min", "need 0 < u-min < u-max < 1")
    return ProbGrid.uniform(points, u_min, u_max)


def cmd_eval(args, out: _Out) -> int:
    D = parse_dist(args.dist)
    if args.what == "shape":
        if not isinstance(D, (ENHParams, ESSpec)):
            raise UsageError("what", "shape classification applies to single marginals")
        g = _grid(args)
        shape = classify_hazard_shape(D, g.u)
        if out.fmt == "csv":
            write_csv(["dist", "shape"], [[args.dist, shape.value]], out.stream)
        else:
            out.stream.write(dumps({"dist": args.dist, "shape": shape}) + "\n")
        return EXIT_OK
    if args.points:
        pts = np.array([float(v) for p in args.points for v in p.split(",") if v.strip()])
    elif args.what == "quantile":
        pts = _grid(args).u
    else:
        pts = np.asarray(D.quantile(_grid(args).u))
    values = np.asarray(getattr(D, args.what)(pts), dtype=float)
    key = "u" if args.what == "quantile" else "x"
    if out.fmt == "csv":
        write_csv([key, "value"], zip(pts.tolist(), values.tolist()), out.stream)
    else:
        rows = [{key: p, "value": v} for p, v in zip(pts.tolist(), values.tolist())]
        out.stream.write(dumps({"dist": args.dist, "what": args.what, "rows": rows}) + "\n")
    return EXIT_OK


def _verdict_record(v: OrderVerdict) -> dict:
    return v.as_dict()


def cmd_check_order(args, out: _Out) -> int:
    F, G = parse_dist(args.dist_f), parse_dist(args.dist_g)
    verdict = check_order(args.order, F, G, _grid(args))
    rec = {"order": verdict.order, "F": args.dist_f, "G": args.dist_g, **_verdict_record(verdict)}
    if out.fmt == "csv":
        keys = list(rec)
        write_csv(keys, [[rec[k] if not isinstance(rec[k], (list, tuple)) else dumps(rec[k]) for k in keys]],
                  out.stream)
    else:
        out.stream.write(dumps(rec) + "\n")
    return EXIT_OK if verdict.holds else EXIT_VIOLATED


def _report_record(index: int, label: str | None, report: ScenarioReport) -> dict:
    rec = {"index": index, "kind": "scenario"}
    if label:
        rec["label"] = label
    rec.update(report.as_dict())
    return rec


def _scan_record(index: int, scan: dict, seed: int, violations) -> dict:
    rec = {"index": index, "kind": "scan", "theorem_id": scan["theorem_id"]}
    if scan.get("label"):
        rec["label"] = scan["label"]
    rec.update({
        "seed": seed,
        "n_samples": scan.get("n_samples", 100),
        "relation": scan.get("relation", "none"),
        "ranges": scan.get("ranges", {}),
        "n_violations": len(violations),
        "violations": [v.as_dict() for v in violations],
    })
    return rec


# one summary row per verify/scan record in CSV mode; JSON mode streams full records
SUMMARY_COLUMNS = ("index", "kind", "theorem_id", "label", "passed", "trials",
                   "hypothesis_rejections", "n_failures", "worst_margin")


def _emit(rec: dict, out: _Out) -> None:
    if out.fmt == "json":
        out.stream.write(dumps(rec) + "\n")
    else:
        if rec["kind"] == "scenario":
            verdict = rec["conclusion_verdict"] or {}
            margin = verdict.get("worst_margin", verdict.get("margin"))
            row = [rec["passed"], rec["trials"], rec["hypothesis_rejections"], len(rec["failures"]), margin]
        else:
            margins = [v["margin"] for v in rec["violations"]]
            row = ["", rec["n_samples"], "", rec["n_violations"], min(margins) if margins else ""]
        rows = [[rec["index"], rec["kind"], rec["theorem_id"], rec.get("label", "")] + row]
        if out.header_written:
            write_csv(None, rows, out.stream)
        else:
            write_csv(SUMMARY_COLUMNS, rows, out.stream)
            out.header_written = True
    out.stream.flush()


def _run_scans(scans, seed, grid, offset, out: _Out) -> None:
    for k, scan in enumerate(scans):
        violations = counterexample_scan(
            scan["theorem_id"], scan.get("ranges"), scan.get("n_samples", 100), seed,
            tuple(scan.get("n_range", (2, 5))), scan.get("relation", "none"), grid)
        _emit(_scan_record(offset + k, scan, seed, violations), out)


def cmd_verify(args, out: _Out) -> int:
    cfg = load_config(args.config)
    seed = args.seed if args.seed is not None else cfg.get("seed", 0)
    grid = _grid(args, cfg)
    all_pass = True
    scenarios = cfg.get("scenarios", [])
    for k, sc in enumerate(scenarios):
        report = run_scenario(sc["theorem_id"], sc.get("trials", 200), seed,
                              tuple(sc.get("n_range", (2, 5))), grid, sc.get("params"), sc.get("ranges"))
        all_pass &= report.passed
        _emit(_report_record(k, sc.get("label"), report), out)
    _run_scans(cfg.get("scans", []), seed, grid, len(scenarios), out)
    return EXIT_OK if all_pass else EXIT_VIOLATED


def _parse_range(text: str) -> tuple[str, list[float]]:
    key, sep, vals = text.partition("=")
    if not sep:
        raise UsageError("range", f"expected KEY=LO,HI, got {text!r}")
    return key.strip(), _numbers(f"range.{key.strip()}", vals, (2,))


def cmd_scan(args, out: _Out) -> int:
    if args.theorem_id not in SCENARIOS:
        raise UsageError("theorem_id", f"unknown scenario {args.theorem_id!r}")
    scan = {"theorem_id": args.theorem_id, "n_samples": args.n_samples, "relation": args.relation,
            "n_range": [args.n_min, args.n_max]}
    if args.range:
        scan["ranges"] = dict(_parse_range(r) for r in args.range)
    _validate({"scans": [scan]}, None, "scan")
    _run_scans([scan], args.seed if args.seed is not None else 0, _grid(args), 0, out)
    return EXIT_OK


def _series_names(specs: Sequence[str]) -> list[str]:
    """Spec strings as series names, with ``#k`` appended to repeats."""
    seen: dict[str, int] = {}
    names = []
    for spec in specs:
        seen[spec] = seen.get(spec, 0) + 1
        names.append(spec if seen[spec] == 1 else f"{spec}#{seen[spec]}")
    return names


def _plot_rows(args) -> list[tuple[str, float, float]]:
    g = _grid(args)
    specs = args.dists
    rows: list[tuple[str, float, float]] = []
    if args.kind == "hazard-curves":
        named = list(HAZARD_EXEMPLARS.items()) if not specs else list(zip(_series_names(specs), specs))
        for name, spec in named:
            D = parse_dist(spec)
            x = np.asarray(D.quantile(g.u))
            rows += [(name, xi, hi) for xi, hi in zip(x.tolist(), np.asarray(D.hazard(x)).tolist())]
    elif args.kind == "ordering-curves":
        if len(specs) != 2:
            raise UsageError("dists", "ordering-curves takes exactly two distributions")
        F, G = (parse_dist(s) for s in specs)
        x = np.unique(np.concatenate([F.quantile(g.u), G.quantile(g.u)]))
        for name, D in zip(_series_names(specs), (F, G)):
            rows += [(name, xi, si) for xi, si in zip(x.tolist(), np.asarray(D.sf(x)).tolist())]
    else:
        if not specs:
            raise UsageError("dists", "lorenz-curves needs at least one distribution")
        for name, spec in zip(_series_names(specs), specs):
            L = lorenz_curve(parse_dist(spec), g.u)
            rows += [(name, ui, li) for ui, li in zip(g.u.tolist(), np.asarray(L).tolist())]
    return rows


def cmd_plotdata(args, out: _Out) -> int:
    rows = _plot_rows(args)
    if out.fmt == "json":
        out.stream.write(dumps([{"series": s, "x_or_u": x, "value": v} for s, x, v in rows]) + "\n")
    else:
        write_csv(["series", "x_or_u", "value"], rows, out.stream)
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry point

def _common(p: argparse.ArgumentParser, fmt_default: str = "json") -> None:
    p.add_argument("--grid-points", type=int, default=None,
                   help=f"probability grid size (default {DEFAULT_GRID_POINTS})")
    p.add_argument("--u-min", type=float, default=None, help=f"lowest grid probability (default {DEFAULT_U_MIN:g})")
    p.add_argument("--u-max", type=float, default=None, help="highest grid probability (default 1-1e-4)")
    p.add_argument("--seed", type=int, default=None, help="random seed (overrides a config seed)")
    p.add_argument("--format", choices=("json", "csv"), default=fmt_default)
    p.add_argument("--out", default=None, help="write output here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="enhorder", description="Stochastic comparisons of extreme order statistics from ENH samples.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate a distribution")
    p.add_argument("dist")
    p.add_argument("--what", choices=("cdf", "sf", "pdf", "quantile", "hazard", "shape"), default="cdf")
    p.add_argument("--points", nargs="*", default=None,
                   help="x values (u values for quantile), comma or space separated; default: grid quantiles")
    _common(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("check-order", help="check a stochastic order X <=_order Y")
    p.add_argument("order", choices=[o.value for o in OrderName])
    p.add_argument("dist_f", metavar="DIST_X")
    p.add_argument("dist_g", metavar="DIST_Y")
    _common(p)
    p.set_defaults(func=cmd_check_order)

    p = sub.add_parser("verify", help="run scenarios and scans from a JSON config")
    p.add_argument("config", nargs="?", default=None, help="config path (default: bundled full run)")
    _common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("scan", help="sample a conclusion without enforcing hypotheses")
    p.add_argument("theorem_id")
    p.add_argument("--n-samples", type=int, default=100)
    p.add_argument("--relation", choices=("none", "w_super", "componentwise"), default="none")
    p.add_argument("--range", action="append", metavar="KEY=LO,HI")
    p.add_argument("--n-min", type=int, default=2)
    p.add_argument("--n-max", type=int, default=5)
    _common(p)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("plotdata", help="long-format curve data for external plotting")
    p.add_argument("kind", choices=("hazard-curves", "ordering-curves", "lorenz-curves"))
    p.add_argument("dists", nargs="*")
    _common(p, fmt_default="csv")
    p.set_defaults(func=cmd_plotdata)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "config", "unset") is None:
        args.config = bundled_config()
    buffer = io.StringIO()
    out = _Out(args.format, buffer if args.out else sys.stdout)
    try:
        code = args.func(args, out)
    except (UsageError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(buffer.getvalue())
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
