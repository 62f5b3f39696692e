"""Seeded experiment runners behind the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from ..aag import AagInstance, AagParams, generate_instance
from ..ea import EaConfig, EaRunResult, run_ea
from ..heuristics import HeuristicId, format_chain
from ..hyperheuristic import HhConfig, HhRunReport, run_hyperheuristic
from ..lba import LbaConfig, run_lba
from ..pcgroup import BUILTIN_DEGREES, GroupSpec, builtin_group, load_group_spec
from ..seeding import derive_seed
from .parallel import parallel_map, resolve_workers


def default_maxsteps(degree: int, phase: str) -> int:
    """Generation caps per phase: 50/1250 up to degree 3, 100/2500 above."""
    small = degree <= 3
    if phase == "valid":
        return 1250 if small else 2500
    return 50 if small else 100


def resolve_group(arg: str) -> GroupSpec:
    """``"1"``/``"d1"`` etc. select a built-in group, anything else is a spec file."""
    key = arg.lower().lstrip("d")
    if key.isdigit() and int(key) in BUILTIN_DEGREES and not Path(arg).exists():
        return builtin_group(int(key))
    return load_group_spec(arg)


@dataclass
class ExperimentConfig:
    group: str
    params: AagParams
    seed: int = 0
    workers: int = 1
    counts: dict = field(default_factory=lambda: {"train": 15, "test": 50, "valid": 50})
    ea: EaConfig = field(default_factory=EaConfig)
    hh: HhConfig = field(default_factory=HhConfig)
    out: Path = Path("out")

    def __post_init__(self):
        self.workers = resolve_workers(self.workers)
        if any(c < 1 for c in self.counts.values()):
            raise ValueError("phase instance counts must be >= 1")


def instance_seed(master: int, phase: str, k: int) -> int:
    return derive_seed(master, "instance", phase, k)


def _instance_task(args):
    spec, params, seed, length_mode = args
    return generate_instance(spec, params, seed, length_mode)


def make_instances(spec: GroupSpec, params: AagParams, count: int, seed: int,
                   phase: str = "pool", workers: int = 1,
                   length_mode: str = "collected") -> list[AagInstance]:
    tasks = [(spec, params, instance_seed(seed, phase, k), length_mode) for k in range(count)]
    return parallel_map(_instance_task, tasks, workers)


def _ea_task(args):
    instance, config, seed, trace = args
    return run_ea(instance, config, seed, trace=trace)


def run_ea_batch(instances: Sequence[AagInstance], config: EaConfig, seed: int,
                 workers: int = 1, trace: bool = True) -> list[EaRunResult]:
    name = format_chain(config.chain)
    tasks = [(inst, config, derive_seed(seed, "ea", name, k), trace)
             for k, inst in enumerate(instances)]
    return parallel_map(_ea_task, tasks, workers)


def _lba_task(args):
    instance, config, seed = args
    return run_lba(instance, config, seed)


def run_lba_sweep(instances: Sequence[AagInstance], heuristics: Sequence[HeuristicId],
                  max_iterations: int, seed: int, workers: int = 1,
                  initial_word_length: int = 10) -> dict[HeuristicId, list[EaRunResult]]:
    tasks, keys = [], []
    for h in heuristics:
        cfg = LbaConfig(h, max_iterations, initial_word_length)
        for k, inst in enumerate(instances):
            tasks.append((inst, cfg, derive_seed(seed, "lba", h.name, k)))
            keys.append(h)
    results = parallel_map(_lba_task, tasks, workers)
    out: dict[HeuristicId, list[EaRunResult]] = {h: [] for h in heuristics}
    for h, r in zip(keys, results):
        out[h].append(r)
    return out


def make_phase_instances(spec: GroupSpec, params: AagParams, counts: dict, seed: int,
                         workers: int = 1) -> dict[str, list[AagInstance]]:
    return {phase: make_instances(spec, params, counts[phase], seed, phase, workers)
            for phase in ("train", "test", "valid")}


def run_hh_experiment(spec: GroupSpec, params: AagParams, counts: dict, ea: EaConfig,
                      hh: HhConfig, seed: int, workers: int = 1,
                      trace: bool = False, hh_seed: int | None = None) -> HhRunReport:
    """Instances come from ``seed``; the chain search from ``hh_seed`` (default ``seed``)."""
    sets = make_phase_instances(spec, params, counts, seed, workers)
    hh = replace(hh, n_train=counts["train"], n_test=counts["test"], n_valid=counts["valid"])
    return run_hyperheuristic(sets, ea, hh, seed if hh_seed is None else hh_seed,
                              map_fn=lambda fn, tasks: parallel_map(fn, tasks, workers),
                              trace=trace)


def validated_improvement(report: HhRunReport) -> bool:
    v = report.validation
    return v is not None and v["best"] < v["initial"]


def run_hh_repeats(spec: GroupSpec, params: AagParams, counts: dict, ea: EaConfig,
                   hh: HhConfig, seed: int, repeats: int, workers: int = 1,
                   trace: bool = False) -> list[HhRunReport]:
    """Rerun the chain search on the same instances until validation shows a gain.

    Attempt 0 uses ``seed``; attempt r > 0 uses ``derive_seed(seed, "repeat", r)``.
    """
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    reports = []
    for r in range(repeats):
        s = seed if r == 0 else derive_seed(seed, "repeat", r)
        reports.append(run_hh_experiment(spec, params, counts, ea, hh, seed, workers, trace, s))
        if validated_improvement(reports[-1]) or reports[-1].timed_out:
            break
    return reports


def summarize(results: Sequence[EaRunResult]) -> tuple[Fraction, Fraction, Fraction]:
    """(success rate, mean best cost of failures, mean generations of successes)."""
    wins = [r.generations_used for r in results if r.success]
    fails = [r.best_cost.sum for r in results if not r.success]
    rate = Fraction(len(wins), len(results)) if results else Fraction(0)
    mean_fail = Fraction(sum(fails), len(fails)) if fails else Fraction(0)
    mean_gens = Fraction(sum(wins), len(wins)) if wins else Fraction(0)
    return rate, mean_fail, mean_gens
