"""Generate-and-test search over heuristic chains injected into the EA."""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace
from fractions import Fraction
from random import Random
from typing import Callable, NamedTuple, Sequence

from .aag import AagInstance
from .ea import EaConfig, EaRunResult, run_ea
from .heuristics import Chain, HeuristicId, format_chain, is_pure_deletion
from .seeding import derive_seed

PHASES = ("train", "test", "valid")


class ChainSpaceExhausted(RuntimeError):
    pass


class ObjectiveVector(NamedTuple):
    """Three-component chain metric, compared lexicographically (smaller is better)."""

    first: Fraction
    second: Fraction
    third: Fraction


def _mean(values) -> Fraction:
    values = list(values)
    return Fraction(sum(values), len(values)) if values else Fraction(0)


def objective(results: Sequence[EaRunResult]) -> ObjectiveVector:
    """(mean best cost of failed runs, -success rate, mean generations of successes)."""
    if not results:
        raise ValueError("objective of an empty result set")
    wins = [r for r in results if r.success]
    losses = [r for r in results if not r.success]
    return ObjectiveVector(
        _mean(r.best_cost.sum for r in losses),
        -Fraction(len(wins), len(results)),
        _mean(r.generations_used for r in wins),
    )


def validation_objective(results: Sequence[EaRunResult]) -> ObjectiveVector:
    """As :func:`objective` with the success-rate component moved to the front."""
    o = objective(results)
    return ObjectiveVector(o.second, o.first, o.third)


@dataclass
class HhConfig:
    c_max: int = 20
    n_train: int = 15
    n_test: int = 50
    n_valid: int = 50
    p_insert: float = 0.4
    p_subst: float = 0.4
    p_delete: float = 0.2
    p_accept: float = 0.1
    initial_chain: Chain | None = (HeuristicId.H2,)  # None: random chain
    random_length: tuple[int, int] = (2, 10)
    maxsteps_train: int = 50
    maxsteps_test: int = 50
    maxsteps_valid: int = 1250
    time_budget: float | None = None
    generator_cap: int = 10_000

    def __post_init__(self):
        probs = (self.p_insert, self.p_subst, self.p_delete, self.p_accept)
        if any(not 0 <= p <= 1 for p in probs):
            raise ValueError("probabilities must lie in [0, 1]")
        if abs(self.p_insert + self.p_subst + self.p_delete - 1) > 1e-9:
            raise ValueError("p_insert + p_subst + p_delete must equal 1")
        if self.c_max < 1:
            raise ValueError("c_max must be >= 1")
        if min(self.n_train, self.n_test, self.n_valid) < 1:
            raise ValueError("phase sizes must be >= 1")

    def maxsteps(self, phase: str) -> int:
        return {"train": self.maxsteps_train, "test": self.maxsteps_test,
                "valid": self.maxsteps_valid}[phase]


def random_chain(rng: Random, length_range: tuple[int, int] = (2, 10)) -> Chain:
    while True:
        size = rng.randint(*length_range)
        chain = tuple(HeuristicId(rng.randint(1, 7)) for _ in range(size))
        if not is_pure_deletion(chain):
            return chain


def generate_chain(incumbent: Chain, seen, rng: Random, p_insert: float = 0.4,
                   p_subst: float = 0.4, max_iterations: int = 10_000) -> Chain:
    """Edit a copy of ``incumbent`` until it is new, non-empty and not H3^k.

    Each edit draws the operation, then the position, then the heuristic.
    Deleting from a one-element chain is skipped.
    """
    chain = list(incumbent)
    for _ in range(max_iterations):
        if chain and tuple(chain) not in seen and not is_pure_deletion(chain):
            return tuple(chain)
        u = rng.random()
        if u < p_insert:
            pos = rng.randint(0, len(chain))
            chain.insert(pos, HeuristicId(rng.randint(1, 7)))
        elif u < p_insert + p_subst:
            pos = rng.randrange(len(chain))
            chain[pos] = HeuristicId(rng.randint(1, 7))
        elif len(chain) > 1:
            del chain[rng.randrange(len(chain))]
    raise ChainSpaceExhausted(f"no unseen chain after {max_iterations} edits")


@dataclass
class ChainRecord:
    iteration: int
    chain: Chain
    train: ObjectiveVector
    test: ObjectiveVector | None = None
    accepted: bool = False


@dataclass
class RunRecord:
    phase: str
    chain: str
    instance: int
    seed: int
    success: bool
    generations: int
    best_cost_sum: int
    offspring_ok: bool | None = None  # set when traced: every generation sums to the population


@dataclass
class HhRunReport:
    records: list[ChainRecord]
    best_index: int
    initial_chain: Chain
    baseline_test: ObjectiveVector | None = None
    validation: dict | None = None  # {"best": ObjectiveVector, "initial": ObjectiveVector}
    timed_out: bool = False
    runs: list[RunRecord] = field(default_factory=list)
    wall_clock: dict = field(default_factory=dict)

    @property
    def best_chain(self) -> Chain:
        return self.records[self.best_index - 1].chain


def _ea_task(args):
    instance, config, seed, trace = args
    r = run_ea(instance, config, seed, trace=trace)
    if trace:
        ok = all(sum(g.operator_counts.values()) == config.population_size
                 and (g.generation == 1 or g.operator_counts == config.operator_counts)
                 for g in r.trace)
        r.trace = [ok]
    return r


def run_hyperheuristic(instance_sets: dict[str, Sequence[AagInstance]], ea_config: EaConfig,
                       hh_config: HhConfig, seed: int,
                       map_fn: Callable = None, trace: bool = False) -> HhRunReport:
    """Hill-climb in chain space: train, test on training improvement, validate the winner.

    ``map_fn(fn, tasks)`` runs the EA over the instances of one phase; it
    must return results in task order (default: sequential).  With ``trace``
    every EA run is traced and its offspring counts audited.
    """
    if map_fn is None:
        map_fn = lambda fn, tasks: [fn(t) for t in tasks]  # noqa: E731
    for phase in PHASES:
        if phase not in instance_sets or not instance_sets[phase]:
            raise ValueError(f"missing instances for phase {phase!r}")
        expected = getattr(hh_config, f"n_{phase}")
        if len(instance_sets[phase]) != expected:
            raise ValueError(f"{phase}: {len(instance_sets[phase])} instances, "
                             f"configured for {expected}")
    rng = Random(derive_seed(seed, "hh", "chains"))
    runs: list[RunRecord] = []
    clock = {p: 0.0 for p in PHASES}
    started = time.monotonic()

    def evaluate(chain: Chain, phase: str, objective_fn=objective) -> ObjectiveVector:
        name = format_chain(chain)
        cfg = replace(ea_config, chain=chain, maxsteps=hh_config.maxsteps(phase))
        insts = instance_sets[phase]
        seeds = [derive_seed(seed, "hh", phase, name, k) for k in range(len(insts))]
        t0 = time.monotonic()
        results = map_fn(_ea_task, [(inst, cfg, s, trace) for inst, s in zip(insts, seeds)])
        clock[phase] += time.monotonic() - t0
        for k, (s, r) in enumerate(zip(seeds, results)):
            runs.append(RunRecord(phase, name, k, s, r.success, r.generations_used,
                                  r.best_cost.sum, r.trace[0] if trace else None))
        return objective_fn(results)

    if hh_config.initial_chain is None:
        initial = random_chain(rng, hh_config.random_length)
    else:
        initial = tuple(hh_config.initial_chain)
    records: list[ChainRecord] = []
    seen: set[Chain] = set()
    incumbent = initial
    best_index = 1
    best_train = best_test = baseline_test = None
    timed_out = False

    for i in range(1, hh_config.c_max + 1):
        if (i > 1 and hh_config.time_budget is not None
                and time.monotonic() - started > hh_config.time_budget):
            timed_out = True
            break
        if i == 1:
            chain = initial
        else:
            chain = generate_chain(incumbent, seen, rng, hh_config.p_insert,
                                   hh_config.p_subst, hh_config.generator_cap)
        seen.add(chain)
        rec = ChainRecord(i, chain, evaluate(chain, "train"))
        records.append(rec)
        if i == 1:
            best_train = rec.train
            rec.accepted = True
            continue
        improved = False
        if rec.train < best_train:
            rec.test = evaluate(chain, "test")
            if baseline_test is None:
                baseline_test = evaluate(initial, "test")
                best_test = baseline_test
            if rec.test < best_test:
                best_index, best_train, best_test = i, rec.train, rec.test
                incumbent = chain
                improved = rec.accepted = True
        if not improved:
            if rng.random() < hh_config.p_accept:
                incumbent = chain
                rec.accepted = True
            else:
                incumbent = records[best_index - 1].chain

    validation = None
    if best_index != 1:
        validation = {
            "best": evaluate(records[best_index - 1].chain, "valid", validation_objective),
            "initial": evaluate(initial, "valid", validation_objective),
        }
    clock["total"] = time.monotonic() - started
    return HhRunReport(records, best_index, initial, baseline_test, validation, timed_out,
                       runs, clock)
