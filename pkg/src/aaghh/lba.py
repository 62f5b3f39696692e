"""Single-heuristic hillclimber (length-based attack) baseline."""

from __future__ import annotations

from dataclasses import dataclass
from random import Random

from .aag import AagInstance, cost
from .ea import EaRunResult, GenerationRecord
from .heuristics import HeuristicId, apply_heuristic
from .pcgroup import Word, free_reduce, random_word

# H7 is left out of the default sweep: it is only meaningful inside chains.
SWEEP_HEURISTICS = tuple(HeuristicId(i) for i in range(1, 7))


@dataclass
class LbaConfig:
    heuristic: HeuristicId = HeuristicId.H2
    max_iterations: int = 5000
    initial_word_length: int = 10

    def __post_init__(self):
        if self.max_iterations < 0:
            raise ValueError("max_iterations must be >= 0")


def run_lba(instance: AagInstance, config: LbaConfig, seed: int, *,
            initial_word: Word | None = None, trace: bool = False) -> EaRunResult:
    """Hillclimb from a random word, keeping a move only if the cost strictly drops.

    ``generations_used`` counts iterations performed.  With ``trace`` the
    result records every accepted move.
    """
    rng = Random(seed)
    if initial_word is None:
        current = random_word(instance.spec, config.initial_word_length, rng)
    else:
        current = free_reduce(initial_word)
    current_cost = cost(instance, current)
    records = [GenerationRecord(0, current_cost, current, {})] if trace else []
    it = 0
    while current_cost.sum != 0 and it < config.max_iterations:
        it += 1
        candidate = apply_heuristic(config.heuristic, instance, current, rng)
        c = cost(instance, candidate)
        if c < current_cost:
            current, current_cost = candidate, c
            if trace:
                records.append(GenerationRecord(it, c, current, {}))
    return EaRunResult(current_cost.sum == 0, it, current_cost, current, seed, records)
