"""The seven simple word heuristics and chains of them.

Every heuristic draws, in this order: position(s), then generator index,
then sign.  All draws are uniform.  Outputs are freely reduced.
"""

from __future__ import annotations

import re
from enum import IntEnum
from random import Random
from typing import Iterable, Sequence

from .aag import AagInstance
from .pcgroup import Word, free_reduce, invert_word


class HeuristicId(IntEnum):
    H1 = 1  # insert a subgroup generator a_i^{+-1}
    H2 = 2  # insert a single generator
    H3 = 3  # delete a single letter
    H4 = 4  # substitute a single letter
    H5 = 5  # conjugate one position by a generator
    H6 = 6  # conjugate a subword by a generator
    H7 = 7  # swap two letters

    def __str__(self):
        return self.name


Chain = tuple[HeuristicId, ...]

_TOKEN = re.compile(r"H([1-7])(?:\^(\d+))?")


def parse_chain(text: str) -> Chain:
    """Parse ``"H2H1H4"``; run-length tokens like ``"H3^2"`` are expanded."""
    s = text.replace(" ", "")
    out: list[HeuristicId] = []
    pos = 0
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if not m:
            raise ValueError(f"bad heuristic chain {text!r}")
        reps = int(m.group(2)) if m.group(2) else 1
        if reps < 1:
            raise ValueError(f"bad repeat count in {text!r}")
        out.extend([HeuristicId(int(m.group(1)))] * reps)
        pos = m.end()
    if not out:
        raise ValueError("empty heuristic chain")
    return tuple(out)


def format_chain(chain: Iterable[HeuristicId]) -> str:
    return "".join(f"H{int(h)}" for h in chain)


def is_pure_deletion(chain: Sequence[HeuristicId]) -> bool:
    return all(h == HeuristicId.H3 for h in chain)


def _letter(n: int, rng: Random) -> int:
    g = rng.randint(1, n)
    return g if rng.random() < 0.5 else -g


def _sign(rng: Random) -> int:
    return 1 if rng.random() < 0.5 else -1


def _subword_bounds(length: int, rng: Random) -> tuple[int, int]:
    # uniform over the length*(length+1)/2 pairs s <= t (0-based, inclusive)
    k = rng.randrange(length * (length + 1) // 2)
    s = 0
    while k >= length - s:
        k -= length - s
        s += 1
    return s, s + k


def apply_heuristic(hid: HeuristicId, instance: AagInstance, w: Word, rng: Random) -> Word:
    n = instance.spec.generator_count
    size = len(w)
    if hid == HeuristicId.H1:
        pos = rng.randint(0, size)
        a = instance.a_gens[rng.randrange(len(instance.a_gens))]
        if _sign(rng) < 0:
            a = invert_word(a)
        return free_reduce(w[:pos] + a + w[pos:])
    if hid == HeuristicId.H2:
        pos = rng.randint(0, size)
        return free_reduce(w[:pos] + (_letter(n, rng),) + w[pos:])
    if hid == HeuristicId.H7:
        if size < 2:
            return w
        i, j = rng.sample(range(size), 2)
        out = list(w)
        out[i], out[j] = out[j], out[i]
        return free_reduce(out)
    if size == 0:
        return w
    if hid == HeuristicId.H3:
        pos = rng.randrange(size)
        return free_reduce(w[:pos] + w[pos + 1:])
    if hid == HeuristicId.H4:
        pos = rng.randrange(size)
        return free_reduce(w[:pos] + (_letter(n, rng),) + w[pos + 1:])
    if hid == HeuristicId.H5:
        s = t = rng.randrange(size)
    elif hid == HeuristicId.H6:
        s, t = _subword_bounds(size, rng)
    else:
        raise ValueError(f"unknown heuristic {hid!r}")
    f = _letter(n, rng)
    return free_reduce(w[:s] + (-f,) + w[s:t + 1] + (f,) + w[t + 1:])


def apply_chain(chain: Sequence[HeuristicId], instance: AagInstance, w: Word,
                rng: Random) -> Word:
    for hid in chain:
        w = apply_heuristic(hid, instance, w, rng)
    return w
