"""Batch command line front end.

``fsmine mine`` ingests a data graph, runs the mining loop, and writes one
JSON object per frequent pattern plus an optional run summary.  ``fsmine
metric`` evaluates a single pattern/data pair under one metric.  Exit
codes: 0 success (including timeout truncation), 2 usage error, 3 input
error, 4 oracle enumeration limit.
"""

from __future__ import annotations

import argparse
import json
import resource
import sys
import time
from fractions import Fraction
from pathlib import Path

from .canonical import PATTERN_SIZE_CAP, SizeCapExceeded, canonical_form
from .graphs import (
    DataGraph,
    FormatError,
    PatternGraph,
    parse_lg,
    parse_pattern_lg,
    parse_snap_edges,
)
from .matcher import count_mal
from .metrics import (
    EnumerationLimitError,
    METRICS,
    MiningConfig,
    exact_mis,
    fractional_score,
    mni,
)
from .miner import MiningReport, mine

USAGE_ERROR = 2
INPUT_ERROR = 3
ORACLE_LIMIT = 4


def _parse_lambda(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"invalid lambda {text!r}") from None
    return value


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fsmine")
    sub = parser.add_subparsers(dest="command", required=True)

    mine_p = sub.add_parser("mine", help="mine frequent patterns from a data graph")
    _input_flags(mine_p)
    mine_p.add_argument("--support", type=int, required=True, help="support threshold")
    mine_p.add_argument(
        "--lambda",
        dest="lam",
        type=_parse_lambda,
        default=Fraction(1),
        help="accuracy/speed slider in [0,1] (default 1)",
    )
    mine_p.add_argument("--max-size", type=int, default=10)
    mine_p.add_argument("--timeout", type=float, default=None, help="seconds")
    mine_p.add_argument("--threads", type=int, default=1)
    mine_p.add_argument("--metric", choices=METRICS, default="mal")
    mine_p.add_argument("--output", type=Path, default=None, help="results JSONL path")
    mine_p.add_argument("--summary", type=Path, default=None, help="summary JSON path")
    mine_p.add_argument("--dump-candidates", type=Path, default=None, metavar="DIR")

    metric_p = sub.add_parser("metric", help="evaluate one pattern under one metric")
    _input_flags(metric_p)
    metric_p.add_argument("--metric", choices=METRICS, required=True)
    metric_p.add_argument("--pattern", type=Path, required=True, help="pattern LG file")
    metric_p.add_argument("--tau", type=int, default=None)
    return parser


def _input_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", type=Path, required=True)
    p.add_argument("--format", choices=("lg", "snap"), default="lg")
    p.add_argument("--undirected", action="store_true", help="LG only")
    p.add_argument("--vlabels", type=int, default=1, help="vertex label count (snap)")
    p.add_argument("--elabels", type=int, default=1, help="edge label count (snap)")
    p.add_argument("--seed", type=int, default=0, help="label seed (snap)")


def _load_graph(args: argparse.Namespace) -> DataGraph:
    text = args.input.read_text()
    if args.format == "snap":
        if args.undirected:
            raise FormatError("--undirected applies to the lg format only")
        return parse_snap_edges(text, args.vlabels, args.elabels, args.seed)
    return parse_lg(text, directed=not args.undirected)


def _pattern_json(g: DataGraph, p: PatternGraph, extra: dict) -> dict:
    form = canonical_form(p)
    doc = {
        "size": p.size,
        "canonical": form.encoding.hex(),
        "vertices": [g.vlabels.token(lab) for lab in p.vertex_labels],
        "edges": [[u, v, g.elabels.token(lab)] for u, v, lab in p.edges],
    }
    doc.update(extra)
    return doc


def _count_json(value) -> int | str:
    return value if isinstance(value, int) else str(value)


def _write_results(g: DataGraph, report: MiningReport, out) -> None:
    for size in sorted(report.frequent):
        for fp in report.frequent[size]:
            doc = _pattern_json(
                g,
                fp.pattern,
                {
                    "count": _count_json(fp.result.count),
                    "tau": fp.result.tau,
                    "level": size,
                },
            )
            out.write(json.dumps(doc, sort_keys=True) + "\n")


def _dump_candidates(g: DataGraph, directory: Path):
    directory.mkdir(parents=True, exist_ok=True)

    def sink(size: int, candidates: list[PatternGraph]) -> None:
        lines = []
        for idx, p in enumerate(candidates):
            lines.append(f"t # size{size}_{idx}")
            for v, lab in enumerate(p.vertex_labels):
                lines.append(f"v {v} {g.vlabels.token(lab)}")
            for u, v, lab in p.edges:
                lines.append(f"e {u} {v} {g.elabels.token(lab)}")
        (directory / f"candidates_size{size}.lg").write_text("\n".join(lines) + "\n")

    return sink


def cmd_mine(args: argparse.Namespace) -> int:
    if not 0 <= args.lam <= 1:
        print("lambda must be in [0,1]", file=sys.stderr)
        return USAGE_ERROR
    if args.support < 1:
        print("support must be >= 1", file=sys.stderr)
        return USAGE_ERROR
    started = time.monotonic()
    g = _load_graph(args)
    cfg = MiningConfig(
        sigma=args.support,
        lam=args.lam,
        max_size=args.max_size,
        timeout=args.timeout,
        metric=args.metric,
        seed=args.seed,
        num_vertex_labels=args.vlabels,
        num_edge_labels=args.elabels,
        threads=args.threads,
    )
    sink = _dump_candidates(g, args.dump_candidates) if args.dump_candidates else None
    report = mine(g, cfg, candidate_sink=sink)
    if args.output is not None:
        with open(args.output, "w") as fh:
            _write_results(g, report, fh)
    else:
        _write_results(g, report, sys.stdout)
    summary = {
        "input": str(args.input),
        "format": args.format,
        "config": {
            "support": args.support,
            "lambda": str(args.lam),
            "max_size": args.max_size,
            "timeout": args.timeout,
            "threads": args.threads,
            "metric": args.metric,
            "undirected": args.undirected,
            "seed": args.seed,
            "vlabels": args.vlabels,
            "elabels": args.elabels,
        },
        "graph": {"vertices": g.vertex_count, "edges": g.edge_count},
        "levels": [
            {
                "size": st.size,
                "tau": st.tau,
                "generated": st.generated,
                "searched": st.searched,
                "frequent": st.frequent,
                "elapsed_ms": round(st.elapsed_ms, 3),
            }
            for st in report.stats
        ],
        "termination": report.termination,
        "total_frequent": report.total_frequent,
        "elapsed_ms": round((time.monotonic() - started) * 1000.0, 3),
        # ru_maxrss is KiB on Linux; indicative only
        "peak_rss_kib": resource.getrusage(resource.RUSAGE_SELF).ru_maxrss,
    }
    if args.summary is not None:
        args.summary.write_text(json.dumps(summary, indent=2) + "\n")
    else:
        print(json.dumps(summary, sort_keys=True), file=sys.stderr)
    return 0


def cmd_metric(args: argparse.Namespace) -> int:
    g = _load_graph(args)
    pattern = parse_pattern_lg(args.pattern.read_text(), g)
    if pattern.size > PATTERN_SIZE_CAP:
        print(
            f"pattern exceeds size cap ({pattern.size} > {PATTERN_SIZE_CAP})",
            file=sys.stderr,
        )
        return INPUT_ERROR
    t = args.tau
    doc: dict = {"metric": args.metric}
    if args.metric == "mal":
        res = count_mal(g, pattern, t if t is not None else 1)
        doc["count"] = res.count
        doc["tau"] = res.tau
        doc["frequent"] = res.frequent
    else:
        fn = {"mis": exact_mis, "mni": mni, "fractional": fractional_score}[args.metric]
        count = fn(g, pattern)
        doc["count"] = _count_json(count)
        doc["frequent"] = (count >= t) if t is not None else None
    print(json.dumps(doc, sort_keys=True))
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "mine":
            return cmd_mine(args)
        return cmd_metric(args)
    except EnumerationLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ORACLE_LIMIT
    except (FormatError, SizeCapExceeded, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
