"""``hessmult`` command line: solve, amatrix, verify, induct, info.

Exit codes: 0 ok, 1 internal error, 2 bad input, 3 over the n cap,
10 math alert (a negative multiplicity).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path

from . import __version__, cache
from .combinat import (
    DEFAULT_CAP, check_cap, format_seq, parse_partition, truncate_columns,
)
from .errors import CapExceeded, InternalConsistencyError
from .hessenberg import (
    HessFunction, ideal_of, incomparability_graph, max_sink_size, parse_hess, phi_h_minus,
    sink_sets,
)
from .sink import inductive_terms
from .solver import AMatrix, MultTable, solve
from .verify import ALL_CHECKS, VerificationReport, scan, summarize, verify_h, verify_n

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_BAD_INPUT = 2
EXIT_OVER_CAP = 3
EXIT_MATH_ALERT = 10

FORMATS = ("json", "csv", "table")


@dataclass(frozen=True)
class Config:
    n_cap: int = DEFAULT_CAP
    cache_dir: Path = Path(".")
    jobs: int = 1
    format: str = "json"

    def __post_init__(self):
        if self.n_cap < 1:
            raise ValueError("n_cap must be at least 1")
        if self.jobs < 1:
            raise ValueError("jobs must be at least 1")
        if self.format not in FORMATS:
            raise ValueError(f"format must be one of {', '.join(FORMATS)}")

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "Config":
        cache_dir = Path(args.cache_dir) if args.cache_dir else cache.default_cache_dir()
        return cls(n_cap=args.n_cap, cache_dir=cache_dir,
                   jobs=args.jobs if args.jobs is not None else (os.cpu_count() or 1),
                   format=args.format)


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False)


def _roots_json(roots) -> list[list[int]]:
    return [list(r) for r in sorted(roots)]


def _csv(rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue().rstrip("\n")


def _grid(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    cells = [list(map(str, header))] + [list(map(str, r)) for r in rows]
    widths = [max(len(row[c]) for row in cells) for c in range(len(header))]
    lines = ["  ".join(cell.rjust(w) for cell, w in zip(row, widths)) for row in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def _load_h(text: str, cfg: Config) -> HessFunction:
    h = parse_hess(text)
    check_cap(h.n, cfg.n_cap)
    return h


# -- solve ------------------------------------------------------------------

def render_solve(table: MultTable, degree: int | None, fmt: str) -> str:
    degrees = list(range(table.max_degree + 1)) if degree is None else [degree]
    if fmt == "json":
        return dumps(table.to_json(degree))
    if fmt == "csv":
        rows = [["mu", "degree", "c"]]
        rows += [[format_seq(mu), i, table.c(mu, i)] for mu in table.order for i in degrees]
        return _csv(rows)
    header = ["mu"] + [f"i={i}" for i in degrees]
    rows = [[format_seq(mu)] + [table.c(mu, i) for i in degrees] for mu in table.order]
    rows.append(["betti"] + [table.betti_at(i) for i in degrees])
    return (f"h=({table.h})  n={table.n}  ht={table.height}\n" + _grid(header, rows)
            + f"\nnonnegative: {str(table.nonnegative).lower()}")


def cmd_solve(args, cfg: Config) -> int:
    h = _load_h(args.h, cfg)
    if args.degree is not None and not 0 <= args.degree <= h.dimension:
        raise ValueError(f"degree must lie in [0, {h.dimension}] for h=({h})")
    table = solve(h, cap=cfg.n_cap)
    print(render_solve(table, args.degree, cfg.format))
    if not table.nonnegative:
        mu, i, v = table.negative_entries()[0]
        print(f"MATH-ALERT: c_{{{format_seq(mu)},{i}}} = {v} < 0 for h=({h})", file=sys.stderr)
        return EXIT_MATH_ALERT
    return EXIT_OK


# -- amatrix ----------------------------------------------------------------

def render_amatrix(A: AMatrix, fmt: str) -> str:
    if fmt == "json":
        return dumps(cache.to_document(A))
    labels = [format_seq(p) for p in A.order]
    if fmt == "csv":
        return _csv([["lambda\\mu", *labels]] + [[lab, *row] for lab, row in zip(labels, A.rows())])
    return _grid(["λ\\μ", *labels], [[lab, *row] for lab, row in zip(labels, A.rows())])


def cmd_amatrix(args, cfg: Config) -> int:
    if args.n < 1:
        raise ValueError("n must be at least 1")
    A, hit = cache.get(args.n, cfg.cache_dir, recompute=args.recompute, jobs=cfg.jobs,
                       cap=cfg.n_cap)
    print(render_amatrix(A, cfg.format))
    where = cache.cache_path(cfg.cache_dir, args.n)
    print(f"{'loaded' if hit else 'wrote'} {where}", file=sys.stderr)
    return EXIT_OK


# -- verify -----------------------------------------------------------------

def _report_rows(rep: VerificationReport) -> list[list]:
    h = str(rep.h) if rep.h else ""
    return [[rep.n, h, c.name, str(c.passed).lower(), c.severity,
             dumps(c.witness) if c.witness else ""] for c in rep.checks]


def cmd_verify(args, cfg: Config) -> int:
    checks = None
    if args.checks:
        checks = tuple(c.strip() for c in args.checks.split(",") if c.strip())
        unknown = set(checks) - set(ALL_CHECKS)
        if unknown:
            raise ValueError(f"unknown checks: {', '.join(sorted(unknown))}")
    if args.h is not None:
        h = _load_h(args.h, cfg)
        reports = [verify_n(h.n, checks), verify_h(h, checks)]
        summary = summarize(h.n, reports)
    else:
        if args.all_n < 1:
            raise ValueError("n must be at least 1")
        reports = scan(args.all_n, checks, jobs=cfg.jobs, cap=cfg.n_cap)
        summary = None

    seen = []
    header = ["n", "h", "check", "passed", "severity", "witness"]
    if cfg.format == "csv":
        print(_csv([header]))
    for rep in reports:
        seen.append(rep)
        if cfg.format == "json":
            print(dumps(rep.to_json()))
        elif cfg.format == "csv":
            print(_csv(_report_rows(rep)))
        else:
            label = f"h=({rep.h})" if rep.h else f"n={rep.n}"
            status = "ok" if rep.passed else "FAIL"
            failed = [c.name for c in rep.checks if not c.passed]
            print(f"{label:<28} {status}" + (f"  [{', '.join(failed)}]" if failed else ""))
        sys.stdout.flush()
    summary = summary or summarize(args.all_n, seen)
    if cfg.format == "json":
        print(dumps(summary))
    elif cfg.format == "table":
        print(f"total={summary['total']} passed={summary['passed']} failed={summary['failed']} "
              f"math_alerts={len(summary['math_alerts'])}")

    if summary["math_alerts"]:
        print(f"MATH-ALERT: negative multiplicities at {len(summary['math_alerts'])} place(s)",
              file=sys.stderr)
        return EXIT_MATH_ALERT
    if summary["failed"] or not summary["n_level_passed"]:
        print("IMPL-BUG: an identity failed; see the report witnesses", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


# -- induct -----------------------------------------------------------------

def induct_document(h: HessFunction, mu) -> dict:
    terms = inductive_terms(h, mu)
    top = h.dimension
    total = [sum(t.by_degree[i] for t in terms) for i in range(top + 1)]
    direct = solve(h, cap=None).by_degree(mu)
    return {"h": list(h.values), "mu": list(mu), "mu_1": list(truncate_columns(mu, 1)),
            "ht": len(mu) - 1, "terms": [t.to_json() for t in terms],
            "total_by_degree": total, "solve_by_degree": direct, "agrees": total == direct}


def cmd_induct(args, cfg: Config) -> int:
    h = _load_h(args.h, cfg)
    mu = parse_partition(args.mu)
    if sum(mu) != h.n:
        raise ValueError(f"μ={format_seq(mu)} is not a partition of n={h.n}")
    doc = induct_document(h, mu)
    if cfg.format == "json":
        print(dumps(doc))
    elif cfg.format == "csv":
        rows = [["T", "deg", "h_T", "degree", "term"]]
        for t in doc["terms"]:
            rows += [[format_seq(t["T"]), t["deg"], format_seq(t["h_T"]), i, v]
                     for i, v in enumerate(t["terms_by_degree"])]
        print(_csv(rows))
    else:
        print(f"h=({h})  μ={format_seq(mu)}  μ[1]={format_seq(doc['mu_1'])}  ht={doc['ht']}")
        rows = [[format_seq(t["T"]), t["deg"], format_seq(t["h_T"]),
                 " ".join(map(str, t["terms_by_degree"]))] for t in doc["terms"]]
        rows.append(["sum", "", "", " ".join(map(str, doc["total_by_degree"]))])
        print(_grid(["T", "deg", "h[T]", "c^T by degree"], rows))
        print(f"matches solve: {str(doc['agrees']).lower()}")
    if not doc["agrees"]:
        raise InternalConsistencyError("inductive formula disagrees with the direct solve")
    return EXIT_OK


# -- info -------------------------------------------------------------------

def info_document(h: HessFunction) -> dict:
    series = ideal_of(h)
    m = max_sink_size(h)
    return {
        "n": h.n,
        "h": list(h.values),
        "dimension": h.dimension,
        "phi_h_minus": _roots_json(phi_h_minus(h)),
        "ideal": _roots_json(series.ideal),
        "lower_central_series": [_roots_json(t) for t in series.series],
        "ht": series.height,
        "graph": incomparability_graph(h).to_json(),
        "max_sink_size": m,
        "max_sink_sets": [s.to_json() for s in sink_sets(h, m)] if h.n else [],
    }


def cmd_info(args, cfg: Config) -> int:
    h = _load_h(args.h, cfg)
    doc = info_document(h)
    if cfg.format == "json":
        print(dumps(doc))
        return EXIT_OK
    if cfg.format == "csv":
        rows = [["field", "value"]] + [[k, dumps(v)] for k, v in sorted(doc.items())]
        print(_csv(rows))
        return EXIT_OK
    pairs = lambda rs: "{" + ", ".join(f"({a},{b})" for a, b in rs) + "}"  # noqa: E731
    print(f"h=({h})  n={h.n}  dim={doc['dimension']}")
    print(f"Φ_h^- = {pairs(doc['phi_h_minus'])}")
    print(f"I_h = {pairs(doc['ideal'])}")
    for j, term in enumerate(doc["lower_central_series"], 1):
        print(f"(I_h)_{j} = {pairs(term)}")
    print(f"ht={doc['ht']}")
    print(f"edges = {pairs(doc['graph']['edges'])}")
    sinks = ", ".join(f"{format_seq(s['T'])} deg {s['deg']}" for s in doc["max_sink_sets"])
    print(f"maximal sink sets (size {doc['max_sink_size']}): {sinks}")
    return EXIT_OK


# -- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="json")
    common.add_argument("--n-cap", type=int, default=DEFAULT_CAP,
                        help="largest n to enumerate (default %(default)s)")
    common.add_argument("--cache-dir", default=None,
                        help="A-matrix cache directory (overrides $HESSMULT_CACHE)")
    common.add_argument("--jobs", type=int, default=None,
                        help="worker processes (default: CPU count)")

    parser = argparse.ArgumentParser(
        prog="hessmult",
        description="Tabloid multiplicities in the cohomology of regular semisimple "
                    "Hessenberg varieties.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", parents=[common], help="solve A·X_i = W_i for every degree")
    p.add_argument("--h", required=True, help="Hessenberg function, e.g. 2,3,3")
    p.add_argument("--degree", type=int, default=None)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("amatrix", parents=[common], help="print and cache A for one n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--recompute", action="store_true", help="ignore any cached copy")
    p.set_defaults(func=cmd_amatrix)

    p = sub.add_parser("verify", parents=[common], help="run the identity checks")
    target = p.add_mutually_exclusive_group(required=True)
    target.add_argument("--h")
    target.add_argument("--all-n", type=int)
    p.add_argument("--checks", default=None,
                   help=f"comma-separated subset of: {', '.join(ALL_CHECKS)}")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("induct", parents=[common],
                       help="evaluate the sink-set induction for μ with ht+1 parts")
    p.add_argument("--h", required=True)
    p.add_argument("--mu", required=True)
    p.set_defaults(func=cmd_induct)

    p = sub.add_parser("info", parents=[common], help="roots, ideal, height and graph of h")
    p.add_argument("--h", required=True)
    p.set_defaults(func=cmd_info)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = Config.from_args(args)
        return args.func(args, cfg)
    except CapExceeded as exc:
        print(f"error: {exc} (raise --n-cap to allow it)", file=sys.stderr)
        return EXIT_OVER_CAP
    except InternalConsistencyError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except BrokenPipeError:
        return EXIT_OK
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
