"""Command line: sslab {solve,gen,verify,bench,submult}.

Exit codes: 0 ok, 1 bad input or usage, 2 retries exhausted, 3 verify mismatch.
"""
from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path

from .core import PointSet
from .counters import WorkCounters
from .harness import (ALGOS, KINDS, MODES, AlgoModeError, InstanceError, bench, check_submultiplicativity,
                      format_csv, format_instance, format_points, gen_instances, read_instance, run_algo,
                      verify_instance, write_instance)
from .solver import RetryExhausted, SolverConfig

EXIT_OK, EXIT_INPUT, EXIT_RETRY, EXIT_MISMATCH = 0, 1, 2, 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; 2 is reserved for retry exhaustion here
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(message)


def _config(args) -> SolverConfig:
    cfg = SolverConfig(seed=args.seed)
    if args.k_const is not None:
        cfg = replace(cfg, k_const=args.k_const)
    return cfg


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sslab", description="Output-sensitive subset sum toolkit.")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--k-const", type=float, default=None)

    s = sub.add_parser("solve", help="compute the subset sums of an instance file")
    s.add_argument("path")
    s.add_argument("--algo", choices=ALGOS, default=None,
                   help="default: fast for bounded, unbounded for unbounded instances")
    s.add_argument("--out", default=None, help="output file (default: stdout)")
    common(s)

    g = sub.add_parser("gen", help="generate an instance")
    g.add_argument("--kind", choices=KINDS, required=True)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--t", type=int, required=True)
    g.add_argument("--d", type=int, default=1)
    g.add_argument("--mode", choices=MODES, default="bounded")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", default=None,
                   help="output file; footnote2 writes <stem>_A.inst and <stem>_B.inst")

    v = sub.add_parser("verify", help="compare the fast solver with the oracles")
    v.add_argument("path")
    v.add_argument("--seeds", type=int, default=10)
    common(v)

    b = sub.add_parser("bench", help="benchmark every *.inst file in a directory")
    b.add_argument("dir")
    b.add_argument("--algo", action="append", choices=ALGOS, default=None)
    b.add_argument("--out", default=None, help="CSV file (default: stdout)")
    common(b)

    m = sub.add_parser("submult", help="sub-multiplicativity check over instance files, one set each")
    m.add_argument("paths", nargs="+")
    return p


def _emit(text: str, out) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def cmd_solve(args) -> int:
    inst = read_instance(args.path)
    algo = args.algo or ("fast" if inst.mode == "bounded" else "unbounded")
    counters = WorkCounters()
    S = run_algo(inst, algo, _config(args), counters)
    _emit(format_points(S), args.out)
    print(f"|S|={len(S)} " + " ".join(f"{k}={v}" for k, v in counters.as_dict().items()),
          file=sys.stderr)
    return EXIT_OK


def cmd_gen(args) -> int:
    produced = gen_instances(args.kind, args.n, args.t, args.d, args.seed, args.mode)
    if args.out is None:
        if len(produced) > 1:
            raise _UsageError(f"--kind {args.kind} writes several files and needs --out")
        sys.stdout.write(format_instance(produced[""]))
        return EXIT_OK
    out = Path(args.out)
    for suffix, inst in produced.items():
        target = out if not suffix else out.with_name(out.stem + suffix + ".inst")
        write_instance(target, inst)
    return EXIT_OK


def cmd_verify(args) -> int:
    inst = read_instance(args.path)
    report = verify_instance(inst, args.seeds, _config(args), base_seed=args.seed)
    for line in report.lines():
        print(line)
    return EXIT_MISMATCH if report.mismatches else EXIT_OK


def cmd_bench(args) -> int:
    algos = args.algo or ["bellman", "fast"]
    try:
        records = bench(args.dir, algos, _config(args))
    except (FileNotFoundError, PermissionError) as exc:
        print(f"sslab: {exc}", file=sys.stderr)
        return EXIT_INPUT
    _emit(format_csv(records), args.out)
    return EXIT_OK


def cmd_submult(args) -> int:
    sets = [read_instance(p).multiset() for p in args.paths]
    rep = check_submultiplicativity([PointSet.from_array(X.distinct()) for X in sets])
    print(f"sum_size={rep.sum_size} b_sizes={rep.b_sizes} lhs={rep.lhs} rhs={rep.rhs} "
          f"{'ok' if rep.ok else 'VIOLATION'}")
    return EXIT_OK if rep.ok else EXIT_MISMATCH


COMMANDS = {"solve": cmd_solve, "gen": cmd_gen, "verify": cmd_verify,
            "bench": cmd_bench, "submult": cmd_submult}


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="sslab: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return COMMANDS[args.cmd](args)
    except _UsageError as exc:
        print(f"sslab: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except AlgoModeError as exc:
        parser.print_usage(sys.stderr)
        print(f"sslab: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (InstanceError, OSError, ValueError) as exc:
        print(f"sslab: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except RetryExhausted as exc:
        print(f"sslab: error: {exc}", file=sys.stderr)
        return EXIT_RETRY


if __name__ == "__main__":
    sys.exit(main())
