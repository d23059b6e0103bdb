"""Command-line entry point: reduce, solve, oracle, mine, verify."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .compat import run_pipeline
from .formula import DimacsParseError, parse_dimacs
from .harness import GenParams, SoundnessViolation, compare, mine
from .oracle import VariableLimitExceeded, brute_force_sat
from .reducer import Singular, reduce_to_1sat, reduce_to_2sat

EXIT_SAT, EXIT_UNSAT, EXIT_ERROR = 10, 20, 1

log = logging.getLogger("satreduce")


def _read(path: str):
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    return parse_dimacs(text)


def _write(path: str | None, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def cmd_reduce(args) -> int:
    f = _read(args.input)
    res = run_pipeline(f)
    if args.to == "1sat":
        _write(args.output, reduce_to_1sat(f, res).to_dimacs())
        return 0
    red = reduce_to_2sat(f, res)
    if red is Singular.FALSE:
        text = "c FALSE\np cnf 0 1\n0\n"
    elif red is Singular.ONE_SAT:
        text = f"c SINGULAR no complementary pairs; formula reduces to its exactly-one block\np cnf {f.num_vars} 0\n"
    else:
        text = red.to_dimacs()
    _write(args.output, text)
    return 0


def cmd_solve(args) -> int:
    res = run_pipeline(_read(args.input))
    if args.trace:
        for t in res.trace:
            print(f"c {t}")
    print(f"c stage {res.verdict.stage}")
    print("s SATISFIABLE" if res.sat else "s UNSATISFIABLE")
    return EXIT_SAT if res.sat else EXIT_UNSAT


def cmd_oracle(args) -> int:
    r = brute_force_sat(_read(args.input), args.var_limit)
    if r.sat:
        print("s SATISFIABLE")
        print("v " + " ".join(map(str, r.model.to_ints())) + " 0")
        return EXIT_SAT
    print("s UNSATISFIABLE")
    return EXIT_UNSAT


def cmd_mine(args) -> int:
    if args.exhaustive:
        params = GenParams(args.vars, args.clauses, args.width, mode="exhaustive", seed=args.seed)
    else:
        params = GenParams(args.vars, args.clauses, args.width, mode="random", seed=args.seed, sample_count=args.count)
    try:
        report = mine(params, counterexample_cap=args.cap)
    except SoundnessViolation as exc:
        log.error("fatal: %s", exc)
        return EXIT_ERROR
    _write(args.output, report.dumps())
    if args.figures:
        from .plotting import render_report

        for p in render_report(report, args.figures):
            log.info("wrote %s", p)
    return 0


def cmd_verify(args) -> int:
    rec = compare(_read(args.input), args.var_limit)
    print(json.dumps(rec.to_json(), indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="satreduce", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("reduce", help="emit the 2-SAT or 1-SAT reduction as DIMACS")
    s.add_argument("input")
    s.add_argument("--to", choices=("2sat", "1sat"), required=True)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("solve", help="pipeline verdict (exit 10 SAT, 20 UNSAT)")
    s.add_argument("input")
    s.add_argument("--trace", action="store_true", help="print one line per elimination step")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("oracle", help="brute-force verdict (exit 10 SAT, 20 UNSAT)")
    s.add_argument("input")
    s.add_argument("--var-limit", type=int, default=26)
    s.set_defaults(func=cmd_oracle)

    s = sub.add_parser("mine", help="compare oracle and pipeline over generated instances")
    s.add_argument("--vars", type=int, required=True)
    s.add_argument("--clauses", type=int, required=True)
    s.add_argument("--width", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--count", type=int, default=1000)
    s.add_argument("--exhaustive", action="store_true")
    s.add_argument("--cap", type=int, default=100, help="max counterexamples listed")
    s.add_argument("--figures", metavar="DIR", help="also write CSV summary and PNG figures here")
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(func=cmd_mine)

    s = sub.add_parser("verify", help="print one comparison record as JSON")
    s.add_argument("input")
    s.add_argument("--var-limit", type=int, default=26)
    s.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (DimacsParseError, VariableLimitExceeded, OSError) as exc:
        log.error("%s", exc)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
