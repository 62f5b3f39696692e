"""Command-line entry point: ``aaghh <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from ..aag import AagParams, load_instance
from ..ea import EaConfig
from ..heuristics import HeuristicId, parse_chain
from ..hyperheuristic import HhConfig
from ..lba import SWEEP_HEURISTICS
from ..pcgroup import BUILTIN_DEGREES, GroupSpecError, builtin_group, save_group_spec
from .experiments import (
    default_maxsteps,
    make_instances,
    resolve_group,
    run_ea_batch,
    run_hh_repeats,
    run_lba_sweep,
)
from .outputs import (
    aggregate_tables,
    write_ea_outputs,
    write_hh_outputs,
    write_instances,
    write_lba_outputs,
)
from .parallel import resolve_workers


def _common(p: argparse.ArgumentParser, group=True, params=True):
    if group:
        p.add_argument("--group", default="d1",
                       help="built-in group d1/d2/d3 or path to a group spec file")
    if params:
        p.add_argument("--params", type=AagParams.parse, default=AagParams(20, 5, 10, 13),
                       help="N,L,L1,L2 (default 20,5,10,13)")
    p.add_argument("--seed", type=int, default=0, help="master seed")
    p.add_argument("--workers", type=int, default=None,
                   help="worker processes (default: $AAGHH_WORKERS or 1)")
    p.add_argument("--out", type=Path, required=True, help="output directory")


def _load_instances(args, spec):
    if args.instances:
        files = sorted(Path(args.instances).glob("*.json"))
        if not files:
            raise FileNotFoundError(f"no instance files in {args.instances}")
        return [load_instance(f) for f in files]
    return make_instances(spec, args.params, args.count, args.seed, "pool", args.workers)


def cmd_gen_group(args) -> int:
    args.out.mkdir(parents=True, exist_ok=True)
    for d in (args.degree or BUILTIN_DEGREES):
        path = args.out / f"group_d{d}.json"
        save_group_spec(builtin_group(d), path)
        print(path)
    return 0


def cmd_gen_instances(args) -> int:
    spec = resolve_group(args.group)
    insts = make_instances(spec, args.params, args.count, args.seed, args.phase, args.workers)
    for p in write_instances(args.out, insts):
        print(p)
    return 0


def cmd_run_ea(args) -> int:
    spec = resolve_group(args.group)
    insts = _load_instances(args, spec)
    cfg = EaConfig(chain=parse_chain(args.chain),
                   maxsteps=args.maxsteps or default_maxsteps(spec.degree, "valid"))
    results = run_ea_batch(insts, cfg, args.seed, args.workers, trace=args.trace)
    paths = write_ea_outputs(args.out, insts, results, cfg)
    print(paths["summary"].read_text(), end="")
    return 0


def cmd_run_lba(args) -> int:
    spec = resolve_group(args.group)
    insts = _load_instances(args, spec)
    hs = list(SWEEP_HEURISTICS) + ([HeuristicId.H7] if args.include_h7 else [])
    sweep = run_lba_sweep(insts, hs, args.iterations, args.seed, args.workers)
    print(write_lba_outputs(args.out, sweep).read_text(), end="")
    return 0


def cmd_run_hh(args) -> int:
    spec = resolve_group(args.group)
    counts = dict(zip(("train", "test", "valid"), args.phases))
    ms = args.maxsteps
    hh = HhConfig(
        c_max=args.c_max,
        p_accept=args.p_accept,
        initial_chain=None if args.initial == "random" else parse_chain(args.initial),
        maxsteps_train=ms or default_maxsteps(spec.degree, "train"),
        maxsteps_test=ms or default_maxsteps(spec.degree, "test"),
        maxsteps_valid=args.maxsteps_valid or default_maxsteps(spec.degree, "valid"),
        time_budget=args.time_budget,
    )
    reports = run_hh_repeats(spec, args.params, counts, EaConfig(), hh, args.seed,
                             args.repeats, args.workers)
    if len(reports) > 1:
        for r, rep in enumerate(reports):
            write_hh_outputs(args.out / f"attempt_{r:02d}", rep, spec.degree, args.params, r + 1)
    report = reports[-1]
    paths = write_hh_outputs(args.out, report, spec.degree, args.params, len(reports))
    print(paths["table"].read_text(), end="")
    return 2 if report.timed_out else 0


def cmd_report(args) -> int:
    out = aggregate_tables(args.inputs, args.out)
    print(out.read_text(), end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="aaghh", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-group", help="write the built-in group spec files")
    p.add_argument("--degree", type=int, action="append", choices=BUILTIN_DEGREES)
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(func=cmd_gen_group)

    p = sub.add_parser("gen-instances", help="generate seeded AAG instances")
    _common(p)
    p.add_argument("--count", type=int, default=20)
    p.add_argument("--phase", default="pool", help="seed namespace for the instance set")
    p.set_defaults(func=cmd_gen_instances)

    for name, func, helptext in (("run-ea", cmd_run_ea, "run the EA with a given chain"),
                                 ("run-lba", cmd_run_lba, "single-heuristic hillclimber sweep")):
        p = sub.add_parser(name, help=helptext)
        _common(p)
        p.add_argument("--instances", type=Path, help="directory of instance files")
        p.add_argument("--count", type=int, default=20,
                       help="instances to generate when --instances is not given")
        if name == "run-ea":
            p.add_argument("--chain", default="H2")
            p.add_argument("--maxsteps", type=int)
            p.add_argument("--trace", action="store_true", help="write per-run trace CSVs")
        else:
            p.add_argument("--iterations", type=int, default=5000)
            p.add_argument("--include-h7", action="store_true")
        p.set_defaults(func=func)

    p = sub.add_parser("run-hh", help="run the chain hyper-heuristic")
    _common(p)
    p.add_argument("--phases", type=lambda s: [int(x) for x in s.split(",")],
                   default=[15, 50, 50], help="train,test,valid instance counts")
    p.add_argument("--c-max", type=int, default=20)
    p.add_argument("--initial", default="H2", help="initial chain or 'random'")
    p.add_argument("--p-accept", type=float, default=0.1)
    p.add_argument("--maxsteps", type=int, help="train/test generation cap")
    p.add_argument("--maxsteps-valid", type=int)
    p.add_argument("--time-budget", type=float, help="wall-clock seconds per attempt")
    p.add_argument("--repeats", type=int, default=1,
                   help="rerun the search until validation shows a gain, at most this often")
    p.set_defaults(func=cmd_run_hh)

    p = sub.add_parser("report", help="aggregate hyper-heuristic tables")
    p.add_argument("inputs", nargs="+", type=Path, help="run directories or table.csv files")
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        if hasattr(args, "workers"):
            args.workers = resolve_workers(args.workers)
        return args.func(args)
    except (GroupSpecError, ValueError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"aaghh: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
