"""Truncation-selection EA with an injectable heuristic-chain operator."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import partial
from random import Random
from typing import Callable, Iterable, Sequence

from .aag import AagInstance, CostVector, cost
from .heuristics import Chain, HeuristicId, apply_chain, apply_heuristic
from .pcgroup import Word, free_reduce, random_word

# Offspring per generation for each operator, population 25.
DEFAULT_OPERATOR_COUNTS = {
    "H1": 6, "H2": 1, "H3": 1, "H4": 5, "H5": 1, "H6": 1,
    "crossover": 4, "selection": 2, "chain": 4,
}
OPERATORS = tuple(DEFAULT_OPERATOR_COUNTS)

MapFn = Callable[[Callable, Iterable], Iterable]


@dataclass
class EaConfig:
    population_size: int = 25
    truncation_fraction: float = 0.40
    operator_counts: dict = field(default_factory=lambda: dict(DEFAULT_OPERATOR_COUNTS))
    maxsteps: int = 1250
    initial_word_length: int = 10
    chain: Chain = (HeuristicId.H2,)
    letter_cap: int = 10_000

    def __post_init__(self):
        unknown = set(self.operator_counts) - set(OPERATORS)
        if unknown:
            raise ValueError(f"unknown operators {sorted(unknown)}")
        if sum(self.operator_counts.values()) != self.population_size:
            raise ValueError("operator counts must sum to the population size")
        if self.operator_counts.get("selection", 0) < 1:
            raise ValueError("at least one selection slot is needed for elitism")
        if not 0 < self.truncation_fraction <= 1:
            raise ValueError("truncation_fraction must lie in (0, 1]")
        if self.maxsteps < 1:
            raise ValueError("maxsteps must be >= 1")
        if not self.chain:
            raise ValueError("empty heuristic chain")

    @property
    def parent_pool_size(self) -> int:
        return max(1, round(self.truncation_fraction * self.population_size))


@dataclass
class GenerationRecord:
    generation: int
    best_cost: CostVector
    best_word: Word
    operator_counts: dict


@dataclass
class EaRunResult:
    success: bool
    generations_used: int
    best_cost: CostVector
    best_word: Word
    seed: int | None = None
    trace: list = field(default_factory=list)


def crossover(w1: Word, w2: Word, rng: Random) -> Word:
    """One of the two one-point splices of ``w1`` and ``w2``, chosen uniformly."""
    r1 = rng.randint(1, len(w1)) if w1 else 0
    r2 = rng.randint(1, len(w2)) if w2 else 0
    if rng.random() < 0.5:
        return free_reduce(w1[:r1] + w2[r2:])
    return free_reduce(w2[:r2] + w1[r1:])


def rank_population(pop: Sequence[Word], costs: Sequence[CostVector]) -> list[int]:
    """Indices of ``pop`` sorted by cost; stable, so ties keep insertion order."""
    return sorted(range(len(pop)), key=costs.__getitem__)


def _bounded(op, parent: Word, cap: int) -> Word:
    child = op()
    if len(child) > cap:
        child = op()
        if len(child) > cap:
            return parent
    return child


def next_generation(instance: AagInstance, config: EaConfig, ranked: Sequence[Word],
                    rng: Random) -> tuple[list[Word], dict]:
    """Assemble the next population from a cost-ranked one."""
    top = ranked[:config.parent_pool_size]
    k = len(top)
    cap = config.letter_cap
    counts = config.operator_counts
    out: list[Word] = []
    made = {op: 0 for op in OPERATORS}

    for op in OPERATORS:
        for slot in range(counts.get(op, 0)):
            if op == "selection":
                child = ranked[0] if slot == 0 else top[rng.randrange(k)]
            elif op == "crossover":
                p1, p2 = top[rng.randrange(k)], top[rng.randrange(k)]
                child = _bounded(partial(crossover, p1, p2, rng), p1, cap)
            else:
                parent = top[rng.randrange(k)]
                if op == "chain":
                    fn = partial(apply_chain, config.chain, instance, parent, rng)
                else:
                    fn = partial(apply_heuristic, HeuristicId[op], instance, parent, rng)
                child = _bounded(fn, parent, cap)
            out.append(child)
            made[op] += 1
    return out, made


def run_ea(instance: AagInstance, config: EaConfig, seed: int, *,
           map_fn: MapFn = map, trace: bool = False,
           initial_population: Sequence[Word] | None = None) -> EaRunResult:
    """Run the EA on one instance until a zero-cost word appears or ``maxsteps``.

    ``map_fn`` evaluates the costs of a generation; it must return results in
    task order.  All random draws happen in this function, so the outcome does
    not depend on how ``map_fn`` schedules work.
    """
    rng = Random(seed)
    spec = instance.spec
    if initial_population is None:
        pop = [random_word(spec, config.initial_word_length, rng)
               for _ in range(config.population_size)]
    else:
        pop = [free_reduce(w) for w in initial_population]
    cache: dict[Word, CostVector] = {}
    made = {"initial": len(pop)}
    records = []
    generation = 1
    evaluate = partial(cost, instance)
    while True:
        todo = [w for w in dict.fromkeys(pop) if w not in cache]
        for w, c in zip(todo, map_fn(evaluate, todo)):
            cache[w] = c
        costs = [cache[w] for w in pop]
        ranked = [pop[i] for i in rank_population(pop, costs)]
        best = ranked[0]
        best_cost = cache[best]
        if trace:
            records.append(GenerationRecord(generation, best_cost, best, made))
        if best_cost.sum == 0 or generation >= config.maxsteps:
            return EaRunResult(best_cost.sum == 0, generation, best_cost, best, seed, records)
        pop, made = next_generation(instance, config, ranked, rng)
        generation += 1
        if len(cache) > 200_000:
            cache.clear()
