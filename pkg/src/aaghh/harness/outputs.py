"""CSV / JSON output files and the trace audit.

File layouts (all CSVs have a header row, RFC 4180 quoting and CRLF endings):

``runs.csv``       one EA run per row: degree, params, chain, instance,
                   instance_seed, ea_seed, success, generations, the six cost
                   components, best_word_length.
``summary.csv``    one row: degree, params, chain, instances, success_rate,
                   mean_fail_cost, mean_generations.
``traces/run_KKK.csv``  one generation per row: generation, six cost
                   components, offspring counts per operator, best_word.
``lba.csv``        heuristic, instances, successes, success_rate,
                   mean_iterations_success.
``chains.csv``     one examined chain per row: iteration, chain, train and
                   test objective components, accepted, best.
``table.csv``      degree, params, insertion_metric, chain_metric, iter,
                   best_chain, runs (same layout as the published result
                   tables; runs counts hyper-heuristic attempts).
"""

from __future__ import annotations

import csv
import json
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from ..aag import AagInstance, AagParams, CostVector, instance_to_dict
from ..ea import OPERATORS, EaConfig, EaRunResult
from ..heuristics import HeuristicId, format_chain
from ..hyperheuristic import HhRunReport, ObjectiveVector
from ..pcgroup import format_word
from .experiments import summarize

COST_FIELDS = ["cost_sum", "cost_max", "cost_mean", "wcost_sum", "wcost_max", "wcost_mean"]
RUN_FIELDS = ["degree", "params", "chain", "instance", "instance_seed", "ea_seed", "success",
              "generations", *COST_FIELDS, "best_word_length"]
SUMMARY_FIELDS = ["degree", "params", "chain", "instances", "success_rate", "mean_fail_cost",
                  "mean_generations"]
TRACE_FIELDS = ["generation", *COST_FIELDS, *(f"n_{op}" for op in OPERATORS), "n_initial",
                "best_word"]
LBA_FIELDS = ["heuristic", "instances", "successes", "success_rate", "mean_iterations_success"]
CHAIN_FIELDS = ["iteration", "chain", "train_1", "train_2", "train_3", "test_1", "test_2",
                "test_3", "accepted", "best"]
TABLE_FIELDS = ["degree", "params", "insertion_metric", "chain_metric", "iter", "best_chain",
                "runs"]


def fmt(x) -> str:
    if isinstance(x, bool):
        return str(int(x))
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return str(x.numerator)
        try:
            return f"{float(x):.6f}"
        except OverflowError:
            return str(x)
    return str(x)


def write_csv(path: Path, header: Sequence[str], rows) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(x) for x in row])
    return path


def read_csv(path: Path) -> list[dict]:
    with Path(path).open(newline="") as fh:
        return list(csv.DictReader(fh))


def write_instances(out_dir: Path, instances: Sequence[AagInstance]) -> list[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for k, inst in enumerate(instances):
        p = out_dir / f"inst_{k:03d}.json"
        p.write_text(json.dumps(instance_to_dict(inst), indent=1) + "\n")
        paths.append(p)
    return paths


def run_row(degree: int, params: AagParams, chain: str, k: int, inst: AagInstance,
            r: EaRunResult) -> list:
    return [degree, params, chain, k, inst.seed, r.seed, r.success, r.generations_used,
            *r.best_cost, len(r.best_word)]


def write_ea_outputs(out_dir: Path, instances: Sequence[AagInstance],
                     results: Sequence[EaRunResult], config: EaConfig) -> dict[str, Path]:
    out_dir = Path(out_dir)
    chain = format_chain(config.chain)
    degree = instances[0].spec.degree
    params = instances[0].params
    rows = [run_row(degree, params, chain, k, inst, r)
            for k, (inst, r) in enumerate(zip(instances, results))]
    paths = {"runs": write_csv(out_dir / "runs.csv", RUN_FIELDS, rows)}
    rate, fail, gens = summarize(results)
    paths["summary"] = write_csv(out_dir / "summary.csv", SUMMARY_FIELDS,
                                 [[degree, params, chain, len(results), rate, fail, gens]])
    if any(r.trace for r in results):
        for k, r in enumerate(results):
            write_trace(out_dir / "traces" / f"run_{k:03d}.csv", r)
    return paths


def write_trace(path: Path, result: EaRunResult) -> Path:
    rows = []
    for g in result.trace:
        counts = [g.operator_counts.get(op, 0) for op in OPERATORS]
        rows.append([g.generation, *g.best_cost, *counts, g.operator_counts.get("initial", 0),
                     format_word(g.best_word)])
    return write_csv(path, TRACE_FIELDS, rows)


def write_lba_outputs(out_dir: Path, sweep: dict[HeuristicId, list[EaRunResult]]) -> Path:
    rows = []
    for h, results in sweep.items():
        wins = [r.generations_used for r in results if r.success]
        mean_it = Fraction(sum(wins), len(wins)) if wins else Fraction(0)
        rows.append([h.name, len(results), len(wins), Fraction(len(wins), len(results)), mean_it])
    return write_csv(Path(out_dir) / "lba.csv", LBA_FIELDS, rows)


def format_metric(v: ObjectiveVector | None) -> str:
    """Validation objective rendered as ``[rate%, mean fail cost, mean generations]``."""
    if v is None:
        return ""
    rate = -v.first * 100
    return f"[{fmt(rate)}%, {fmt(v.second)}, {fmt(v.third)}]"


def _objective_json(v: ObjectiveVector | None):
    return None if v is None else [fmt(x) for x in v]


def hh_report_dict(report: HhRunReport, degree: int, params: AagParams) -> dict:
    return {
        "degree": degree,
        "params": str(params),
        "initial_chain": format_chain(report.initial_chain),
        "best_iteration": report.best_index,
        "best_chain": format_chain(report.best_chain),
        "timed_out": report.timed_out,
        "baseline_test": _objective_json(report.baseline_test),
        "chains": [
            {"iteration": r.iteration, "chain": format_chain(r.chain),
             "train": _objective_json(r.train), "test": _objective_json(r.test),
             "accepted": r.accepted}
            for r in report.records
        ],
        "validation": None if report.validation is None else {
            k: _objective_json(v) for k, v in report.validation.items()},
        "runs": [[r.phase, r.chain, r.instance, str(r.seed), r.success, r.generations,
                  str(r.best_cost_sum)] for r in report.runs],
    }


def write_hh_outputs(out_dir: Path, report: HhRunReport, degree: int,
                     params: AagParams, runs: int = 1) -> dict[str, Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    report_path = out_dir / "report.json"
    report_path.write_text(json.dumps(hh_report_dict(report, degree, params), indent=1) + "\n")
    rows = []
    for r in report.records:
        test = list(r.test) if r.test is not None else ["", "", ""]
        rows.append([r.iteration, format_chain(r.chain), *r.train, *test, r.accepted,
                     r.iteration == report.best_index])
    chains = write_csv(out_dir / "chains.csv", CHAIN_FIELDS, rows)
    val = report.validation or {}
    table = write_csv(out_dir / "table.csv", TABLE_FIELDS, [[
        degree, params, format_metric(val.get("initial")), format_metric(val.get("best")),
        report.best_index, format_chain(report.best_chain), runs]])
    timing = out_dir / "timing.json"
    timing.write_text(json.dumps({k: round(v, 3) for k, v in report.wall_clock.items()}) + "\n")
    return {"report": report_path, "chains": chains, "table": table, "timing": timing}


def aggregate_tables(paths: Sequence[Path], out: Path) -> Path:
    """Concatenate ``table.csv`` files (or directories holding one) into one table."""
    rows = []
    for p in paths:
        p = Path(p)
        if p.is_dir():
            p = p / "table.csv"
        rows.extend([r[f] for f in TABLE_FIELDS] for r in read_csv(p))
    rows.sort(key=lambda r: (int(r[0]), r[1]))
    return write_csv(out, TABLE_FIELDS, rows)


def audit_ea_outputs(out_dir: Path, population_size: int = 25) -> list[str]:
    """Re-derive ``runs.csv`` and ``summary.csv`` from the per-run traces.

    Returns a list of discrepancies (empty when everything checks out).
    Also checks that the offspring counts of every generation after the first
    add up to the population size.
    """
    out_dir = Path(out_dir)
    problems = []
    runs = read_csv(out_dir / "runs.csv")
    for k, row in enumerate(runs):
        trace = read_csv(out_dir / "traces" / f"run_{k:03d}.csv")
        if not trace:
            problems.append(f"run {k}: empty trace")
            continue
        for g in trace:
            total = sum(int(g[f"n_{op}"]) for op in OPERATORS) + int(g["n_initial"])
            if total != population_size:
                problems.append(f"run {k} gen {g['generation']}: {total} offspring")
        last = trace[-1]
        derived = {
            "generations": last["generation"],
            "success": "1" if last["cost_sum"] == "0" else "0",
            **{f: last[f] for f in COST_FIELDS},
            "best_word_length": str(len(last["best_word"].split())),
        }
        for key, value in derived.items():
            if row[key] != value:
                problems.append(f"run {k}: {key} {row[key]!r} != trace {value!r}")
        costs = [int(g["cost_sum"]) for g in trace]
        if any(b > a for a, b in zip(costs, costs[1:])):
            problems.append(f"run {k}: best cost increased between generations")
    summary = read_csv(out_dir / "summary.csv")[0]
    wins = [int(r["generations"]) for r in runs if r["success"] == "1"]
    fails = [int(r["cost_sum"]) for r in runs if r["success"] == "0"]
    expect = {
        "instances": str(len(runs)),
        "success_rate": fmt(Fraction(len(wins), len(runs))),
        "mean_fail_cost": fmt(Fraction(sum(fails), len(fails)) if fails else Fraction(0)),
        "mean_generations": fmt(Fraction(sum(wins), len(wins)) if wins else Fraction(0)),
    }
    for key, value in expect.items():
        if summary[key] != value:
            problems.append(f"summary: {key} {summary[key]!r} != derived {value!r}")
    return problems
