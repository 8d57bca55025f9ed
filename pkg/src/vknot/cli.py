"""Command line front end: ``vknot recognize|verify|vertices|tri|bench``."""
from __future__ import annotations

import argparse
import csv
import json
import math
import statistics
import sys
import time
from fractions import Fraction
from typing import Optional, Sequence

from .exterior import BuildError, build_canonical_exterior
from .gauss import GaussCodeError, parse_gauss_code
from .normal import enumerate_vertex_solutions, matching_system
from .recognizer import (
    Budget,
    BudgetExceeded,
    MalformedWitness,
    Verdict,
    clear_exterior_cache,
    format_witness,
    parse_witness,
    recognize,
    replay_witness,
)
from .tricomplex import parse_triangulation, serialize_triangulation

EXIT_OK = 0
EXIT_INPUT = 2


class InputError(Exception):
    pass


def _read(path: str) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: str, text: str) -> None:
    try:
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc.strerror}") from None


def _code_lines(text: str) -> list[str]:
    """One code per line.  Input with no lines at all is the empty code."""
    lines = text.splitlines()
    return [line.strip() for line in lines] if lines else [""]


def _budget(args) -> Budget:
    return Budget(max_tets=args.max_tets, timeout=args.timeout)


def _run_one(line: str, budget: Budget):
    """Returns (printed word, trace or None)."""
    try:
        code = parse_gauss_code(line, require_knot=True)
    except GaussCodeError as exc:
        return f"error: {type(exc).__name__}: {exc}", None
    try:
        verdict, trace = recognize(code, budget)
    except BudgetExceeded as exc:
        return Verdict.Unknown.value, exc.trace
    return verdict.value, trace


def cmd_recognize(args) -> int:
    lines = _code_lines(_read(args.input))
    budget = _budget(args)
    traces = []
    for i, line in enumerate(lines, start=1):
        word, trace = _run_one(line, budget)
        print(word, flush=True)
        if trace is None:
            # a bad line is reported in place; the batch goes on
            continue
        traces.append(trace)
        if args.witness and trace.verdict == Verdict.Classical.value:
            path = args.witness if len(lines) == 1 else f"{args.witness}.{i}"
            _write(path, format_witness(trace.witness))
    if args.trace:
        if args.trace.endswith(".log"):
            _write(args.trace, "".join(line + "\n" for t in traces for line in t.to_lines()))
        else:
            _write(args.trace, json.dumps({"traces": [t.to_dict() for t in traces]}, indent=1) + "\n")
    return EXIT_OK


def cmd_verify(args) -> int:
    code_text = _code_lines(_read(args.code))[0]
    try:
        code = parse_gauss_code(code_text, require_knot=True)
    except GaussCodeError as exc:
        print(f"error: {type(exc).__name__}: {exc}")
        return EXIT_INPUT
    try:
        ok = replay_witness(code, parse_witness(_read(args.witness)))
    except MalformedWitness as exc:
        print("reject")
        print(f"note: MalformedWitness: {exc}", file=sys.stderr)
        return EXIT_OK
    print("accept" if ok else "reject")
    return EXIT_OK


def _fraction_text(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def cmd_vertices(args) -> int:
    try:
        tri = parse_triangulation(_read(args.tri))
    except ValueError as exc:
        print(f"error: {exc}")
        return EXIT_INPUT
    sols = enumerate_vertex_solutions(matching_system(tri), admissible_only=args.admissible, method=args.method)
    for line in sorted(" ".join(_fraction_text(x) for x in s) for s in sols):
        print(line)
    return EXIT_OK


def cmd_tri(args) -> int:
    try:
        code = parse_gauss_code(args.code, require_knot=True)
        tri = build_canonical_exterior(code)
    except (GaussCodeError, BuildError) as exc:
        print(f"error: {type(exc).__name__}: {exc}")
        return EXIT_INPUT
    text = serialize_triangulation(tri)
    if args.output:
        _write(args.output, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def bench_row(line: str, budget: Budget) -> dict:
    """Times the recognize call alone, from a cold exterior cache."""
    code = parse_gauss_code(line, require_knot=True)
    n = build_canonical_exterior(code).n if code.c else 0
    clear_exterior_cache()
    start = time.perf_counter()
    try:
        verdict = recognize(code, budget)[0].value
    except BudgetExceeded:
        verdict = Verdict.Unknown.value
    seconds = time.perf_counter() - start
    return {"c": code.c, "n": n, "seconds": seconds, "verdict": verdict}


def log_time_slope(rows: Sequence[dict]) -> Optional[float]:
    """Least-squares slope of log2(seconds) against c, or None with fewer
    than two distinct crossing numbers."""
    pts = [(r["c"], math.log2(r["seconds"])) for r in rows if r["seconds"] > 0]
    if len({c for c, _ in pts}) < 2:
        return None
    return statistics.linear_regression([c for c, _ in pts], [y for _, y in pts]).slope


def cmd_bench(args) -> int:
    budget = _budget(args)
    rows = []
    for line in _code_lines(_read(args.table)):
        try:
            row = bench_row(line, budget)
        except (GaussCodeError, BuildError) as exc:
            print(f"error: {type(exc).__name__}: {exc}")
            return EXIT_INPUT
        rows.append(row)
        print(f"c={row['c']} n={row['n']} seconds={row['seconds']:.3f} verdict={row['verdict']}", flush=True)
    slope = log_time_slope(rows)
    if slope is not None:
        print(f"slope log2(seconds)/c = {slope:.3f}")
    if args.csv:
        try:
            with open(args.csv, "w", newline="") as fh:
                w = csv.DictWriter(fh, fieldnames=["c", "n", "seconds", "verdict"])
                w.writeheader()
                for row in rows:
                    w.writerow({**row, "seconds": f"{row['seconds']:.6f}"})
        except OSError as exc:
            raise InputError(f"cannot write {args.csv}: {exc.strerror}") from None
    return EXIT_OK


def _add_budget(p: argparse.ArgumentParser) -> None:
    p.add_argument("--max-tets", type=int, default=None, help="give up above this many tetrahedra")
    p.add_argument("--timeout", type=float, default=None, help="wall-clock limit per code, in seconds")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="vknot", description="Recognize classical knots among virtual knots.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("recognize", help="print yes/no/unknown for each code, one per line")
    p.add_argument("input", help="file of Gauss codes, or - for standard input")
    p.add_argument("--trace", help="write traces here (JSON, or a line log if the name ends in .log)")
    p.add_argument("--witness", help="write the witness of each classical code here")
    _add_budget(p)
    p.set_defaults(func=cmd_recognize)

    p = sub.add_parser("verify", help="check a classicality witness")
    p.add_argument("code", help="file whose first line is the Gauss code")
    p.add_argument("--witness", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("vertices", help="dump vertex solutions of a triangulation")
    p.add_argument("tri", help="triangulation file, or -")
    p.add_argument("--admissible", action="store_true", help="only vertices satisfying the quad condition")
    p.add_argument("--method", choices=["direct", "lifted"], default="direct")
    p.set_defaults(func=cmd_vertices)

    p = sub.add_parser("tri", help="export the canonical exterior of a code")
    p.add_argument("code")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_tri)

    p = sub.add_parser("bench", help="time recognize over a file of codes")
    p.add_argument("--table", required=True, help="file of Gauss codes")
    p.add_argument("--csv", help="write c,n,seconds,verdict rows here")
    _add_budget(p)
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
