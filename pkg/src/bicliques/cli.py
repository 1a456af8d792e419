"""Command-line entry point: ``bicliques run|verify|bench``."""
from __future__ import annotations

import argparse
import statistics
import sys
import time
from pathlib import Path
from typing import Optional, Sequence, TextIO

from . import stats as st
from .graph import BipartiteGraph, EdgeListError, load_edge_list
from .oracle import OracleLimitError, closure_enumerate, reference_recursive_mbea
from .scheduler import ConfigError, default_workers, run_parallel

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _add_input(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", "-i", required=True, help="edge list, one 'u v' pair per line")
    base = p.add_mutually_exclusive_group()
    base.add_argument("--one-based", action="store_true", help="vertex IDs start at 1 (KONECT)")
    base.add_argument("--zero-based", action="store_true", help="vertex IDs start at 0 (default)")
    p.add_argument("--header", action="store_true",
                   help="skip the first non-comment line")
    p.add_argument("--no-comments", action="store_true",
                   help="treat %% and # lines as data")


def _add_sched(p: argparse.ArgumentParser) -> None:
    p.add_argument("--workers", "-w", type=_positive, default=None,
                   help="worker threads (default: available CPUs)")
    p.add_argument("-k", type=_positive, default=2, help="deepest work-stealing level (default 2)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bicliques",
                                     description="Parallel maximal biclique enumeration.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="count or list maximal bicliques")
    _add_input(run)
    _add_sched(run)
    run.add_argument("--mode", choices=("count", "enumerate"), default="count")
    run.add_argument("--output", "-o", help="biclique list destination ('-' for stdout)")
    run.add_argument("--stats", help="write the per-worker JSON report here")
    run.add_argument("--dataset", default=None, help="dataset name for the report")

    verify = sub.add_parser("verify", help="compare the engine against the oracles")
    _add_input(verify)
    _add_sched(verify)
    verify.add_argument("--closure", action="store_true", help="check against closure enumeration")
    verify.add_argument("--reference", action="store_true",
                        help="check against the plain recursive search")
    verify.add_argument("--subset-limit", type=int, default=20,
                        help="largest candidate side the closure oracle accepts")
    verify.add_argument("--recursion-limit", type=int, default=5000,
                        help="largest candidate side the recursive oracle accepts")

    bench = sub.add_parser("bench", help="time repeated runs")
    _add_input(bench)
    _add_sched(bench)
    bench.add_argument("--repeat", "-n", type=_positive, default=5)
    return parser


def _load(args) -> BipartiteGraph:
    path = Path(args.input)
    if not path.is_file():
        raise UsageError(f"input file not found: {path}")
    try:
        return load_edge_list(path, one_based=args.one_based, allow_comments=not args.no_comments,
                              header=args.header)
    except EdgeListError as exc:
        raise UsageError(f"{path}: {exc}") from None


def format_biclique(l_side: Sequence[int], r_side: Sequence[int]) -> str:
    return "L: " + ",".join(map(str, l_side)) + " | R: " + ",".join(map(str, r_side))


def write_bicliques(bicliques, dest: TextIO) -> None:
    for line in sorted(format_biclique(l, r) for l, r in bicliques):
        dest.write(line + "\n")


def _labelled(g: BipartiteGraph, found) -> list:
    ul, vl = g.u_labels.tolist(), g.v_labels.tolist()
    return sorted((tuple(sorted(vl[u] for u in l)), tuple(sorted(ul[v] for v in r)))
                  for l, r in found)


def cmd_run(args, out: TextIO, err: TextIO) -> int:
    if args.mode == "enumerate" and not args.output:
        raise UsageError("--mode enumerate needs --output PATH (or '-' for stdout)")
    g = _load(args)
    workers = args.workers or default_workers()
    result = run_parallel(g, workers, args.k, mode=args.mode)
    if args.mode == "enumerate":
        if args.output == "-":
            write_bicliques(result.bicliques, out)
        else:
            with open(args.output, "w", encoding="utf-8") as fh:
                write_bicliques(result.bicliques, fh)
    if args.stats:
        dataset = args.dataset or Path(args.input).stem
        Path(args.stats).write_text(st.dumps(result.report(g, dataset)) + "\n", encoding="utf-8")
    # keep stdout a pure biclique list when it carries one
    print(result.count, file=err if args.output == "-" else out)
    return EXIT_OK


def cmd_verify(args, out: TextIO, err: TextIO) -> int:
    g = _load(args)
    use_closure = args.closure or not args.reference
    use_reference = args.reference
    workers = args.workers or default_workers()
    try:
        oracles = {}
        if use_closure:
            oracles["closure"] = _labelled(g, closure_enumerate(g, args.subset_limit))
        if use_reference:
            oracles["reference"] = _labelled(g, reference_recursive_mbea(g, args.recursion_limit))
    except OracleLimitError as exc:
        raise UsageError(f"graph too large to verify: {exc}") from None
    result = run_parallel(g, workers, args.k, mode="enumerate", debug=True)
    engine = result.bicliques
    status = EXIT_OK
    if len(set(engine)) != len(engine):
        print("engine emitted a duplicate biclique", file=err)
        status = EXIT_MISMATCH
    for name, expected in oracles.items():
        if expected == engine:
            print(f"{name}: ok ({len(expected)} bicliques)", file=out)
            continue
        status = EXIT_MISMATCH
        missing = sorted(set(expected) - set(engine))
        extra = sorted(set(engine) - set(expected))
        print(f"{name}: MISMATCH engine={len(engine)} oracle={len(expected)} "
              f"missing={len(missing)} extra={len(extra)}", file=out)
        for l, r in missing[:5]:
            print("  missing " + format_biclique(l, r), file=out)
        for l, r in extra[:5]:
            print("  extra   " + format_biclique(l, r), file=out)
    return status


def cmd_bench(args, out: TextIO, err: TextIO) -> int:
    g = _load(args)
    workers = args.workers or default_workers()
    times = []
    counts = set()
    for _ in range(args.repeat):
        t0 = time.perf_counter()
        result = run_parallel(g, workers, args.k)
        times.append((time.perf_counter() - t0) * 1e3)
        counts.add(result.count)
    if len(counts) != 1:
        print(f"counts differ between runs: {sorted(counts)}", file=err)
        return EXIT_MISMATCH
    spread = statistics.stdev(times) if len(times) > 1 else 0.0
    print(f"count {counts.pop()}  workers {workers}  k {args.k}  runs {len(times)}", file=out)
    print(f"wall ms  min {min(times):.2f}  median {statistics.median(times):.2f}  "
          f"max {max(times):.2f}  stdev {spread:.2f}", file=out)
    return EXIT_OK


COMMANDS = {"run": cmd_run, "verify": cmd_verify, "bench": cmd_bench}


def main(argv: Optional[Sequence[str]] = None, out: TextIO = None, err: TextIO = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return COMMANDS[args.command](args, out, err)
    except (UsageError, ConfigError, OSError) as exc:
        print(f"bicliques: error: {exc}", file=err)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
