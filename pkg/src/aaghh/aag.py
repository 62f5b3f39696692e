"""AAG key exchange instances over O ⋊ U and the cost functions used to attack them."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from random import Random
from typing import NamedTuple, Sequence

from .pcgroup import (
    GroupElement,
    GroupSpec,
    Word,
    commutator,
    concat_words,
    evaluate_word,
    group_spec_from_dict,
    group_spec_to_dict,
    identity_matrix,
    inverse,
    invert_word,
    multiply,
    random_reduced_word,
    vec_mat,
)


class DegenerateInstanceError(RuntimeError):
    pass


@dataclass(frozen=True)
class AagParams:
    N: int
    L: int
    L1: int
    L2: int

    def __post_init__(self):
        if self.N < 1 or self.L < 1 or not 1 <= self.L1 <= self.L2:
            raise ValueError(f"invalid AAG parameters {self}")

    @classmethod
    def parse(cls, text: str) -> "AagParams":
        """Parse ``"N,L,L1,L2"``."""
        parts = [int(x) for x in text.split(",")]
        if len(parts) != 4:
            raise ValueError(f"expected N,L,L1,L2, got {text!r}")
        return cls(*parts)

    def __str__(self):
        return f"{self.N},{self.L},{self.L1},{self.L2}"


# Caption parameters of the three experiment tables.
TABLE3_PARAMS = AagParams(N=20, L=5, L1=10, L2=13)
TABLE4_PARAMS = AagParams(N=5, L=5, L1=5, L2=8)
TABLE5_PARAMS = AagParams(N=5, L=5, L1=15, L2=18)


class CostVector(NamedTuple):
    """Summand statistics; tuple ordering gives the lexicographic comparison."""

    sum: int
    max: int
    mean: Fraction
    wsum: int
    wmax: int
    wmean: Fraction

    @classmethod
    def from_summands(cls, plain: Sequence[int], weighted: Sequence[int]) -> "CostVector":
        n = len(plain)
        s, ws = sum(plain), sum(weighted)
        return cls(s, max(plain), Fraction(s, n), ws, max(weighted), Fraction(ws, n))


ZERO_COST = CostVector(0, 0, Fraction(0), 0, 0, Fraction(0))


def compare_cost(x: CostVector, y: CostVector) -> int:
    """-1, 0 or 1 as ``x`` is lexicographically below, equal to or above ``y``."""
    return (x > y) - (x < y)


@dataclass(frozen=True)
class AagInstance:
    spec: GroupSpec
    params: AagParams
    a_gens: tuple[Word, ...]
    b_gens: tuple[Word, ...]
    conjugates: tuple[GroupElement, ...]
    planted_key: Word
    seed: int | None = None

    @cached_property
    def b_elements(self) -> tuple[GroupElement, ...]:
        return tuple(evaluate_word(self.spec, b) for b in self.b_gens)

    @cached_property
    def _tables(self):
        # Per equation: (b coords, c coords, I - M(v_b), M(v_c)^-1, unit-part length)
        spec = self.spec
        ident = identity_matrix(spec.degree)
        rows = []
        for b, c in zip(self.b_elements, self.conjugates):
            mb = spec.unit_matrix(b.torsion, b.units)
            c_inv = inverse(spec, c)
            mc_inv = spec.unit_matrix(c_inv.torsion, c_inv.units)
            i_minus = tuple(tuple(ident[i][j] - mb[i][j] for j in range(spec.degree))
                            for i in range(spec.degree))
            t = tuple((x + y) % o for x, y, o in zip(b.torsion, c_inv.torsion,
                                                     spec.torsion_orders))
            u = tuple(x + y for x, y in zip(b.units, c_inv.units))
            w_head = spec.weights[:spec.n_units]
            head = sum(t) + sum(map(abs, u))
            whead = sum(w * abs(x) for w, x in zip(w_head, t + u))
            rows.append((b.coords, c.coords, i_minus, mc_inv, head, whead))
        return tuple(rows)


def summands(instance: AagInstance, alpha: Word) -> list[GroupElement]:
    """Collected ``alpha^-1 b_i alpha c_i^-1`` via plain pair arithmetic."""
    spec = instance.spec
    a = evaluate_word(spec, alpha)
    a_inv = inverse(spec, a)
    out = []
    for b, c in zip(instance.b_elements, instance.conjugates):
        e = multiply(spec, multiply(spec, multiply(spec, a_inv, b), a), inverse(spec, c))
        out.append(e)
    return out


def cost(instance: AagInstance, alpha: Word) -> CostVector:
    """Cost vector of a candidate key.

    Uses the closed form of the O-part of ``alpha^-1 b alpha c^-1`` for
    ``alpha = (u, o)``: ``(p M(u) + o (I - M(v)) - q) M(v_c)^-1``, where
    ``b = (v, p)`` and ``c = (v_c, q)``.
    """
    spec = instance.spec
    d = spec.degree
    rd = range(d)
    a = evaluate_word(spec, alpha)
    mu = spec.unit_matrix(a.torsion, a.units)
    o = a.coords
    w_o = spec.weights[spec.n_units:]
    plain, weighted = [], []
    for p, q, i_minus, mc_inv, head, whead in instance._tables:
        x = [sum(p[i] * mu[i][k] + o[i] * i_minus[i][k] for i in rd) - q[k] for k in rd]
        y = [sum(x[i] * mc_inv[i][k] for i in rd) for k in rd]
        plain.append(head + sum(map(abs, y)))
        weighted.append(whead + sum(w * abs(v) for w, v in zip(w_o, y)))
    return CostVector.from_summands(plain, weighted)


def verify_solution(instance: AagInstance, alpha: Word) -> bool:
    spec = instance.spec
    a = evaluate_word(spec, alpha)
    a_inv = inverse(spec, a)
    return all(multiply(spec, multiply(spec, a_inv, b), a) == c
               for b, c in zip(instance.b_elements, instance.conjugates))


def shared_key(spec: GroupSpec, A: Word, B: Word) -> GroupElement:
    return commutator(spec, evaluate_word(spec, A), evaluate_word(spec, B))


def build_instance(spec: GroupSpec, params: AagParams, a_gens, b_gens, planted_key,
                   seed: int | None = None) -> AagInstance:
    key = evaluate_word(spec, planted_key)
    key_inv = inverse(spec, key)
    conj = tuple(multiply(spec, multiply(spec, key_inv, evaluate_word(spec, b)), key)
                 for b in b_gens)
    return AagInstance(spec, params, tuple(map(tuple, a_gens)), tuple(map(tuple, b_gens)),
                       conj, tuple(planted_key), seed)


def generate_instance(spec: GroupSpec, params: AagParams, seed: int,
                      length_mode: str = "collected", max_resamples: int = 100) -> AagInstance:
    """Random AAG instance; degenerate draws (empty key already solves) are resampled."""
    rng = Random(seed)
    for _ in range(max_resamples):
        a_gens = [random_reduced_word(spec, params.L1, params.L2, rng, length_mode)
                  for _ in range(params.N)]
        b_gens = [random_reduced_word(spec, params.L1, params.L2, rng, length_mode)
                  for _ in range(params.N)]
        parts = []
        for _ in range(params.L):
            mu = rng.randrange(params.N)
            eps = rng.choice((1, -1))
            parts.append(a_gens[mu] if eps > 0 else invert_word(a_gens[mu]))
        inst = build_instance(spec, params, a_gens, b_gens, concat_words(*parts), seed)
        if cost(inst, ()).sum != 0:
            return inst
    raise DegenerateInstanceError(
        f"{max_resamples} consecutive degenerate instances for {params}")


# --- serialization -------------------------------------------------------------

def _element_to_dict(e: GroupElement) -> dict:
    return {"torsion": [str(x) for x in e.torsion], "units": [str(x) for x in e.units],
            "coords": [str(x) for x in e.coords]}


def _element_from_dict(d: dict) -> GroupElement:
    return GroupElement(tuple(int(x) for x in d["torsion"]), tuple(int(x) for x in d["units"]),
                        tuple(int(x) for x in d["coords"]))


def instance_to_dict(inst: AagInstance) -> dict:
    return {
        "group": group_spec_to_dict(inst.spec),
        "params": {"N": inst.params.N, "L": inst.params.L,
                   "L1": inst.params.L1, "L2": inst.params.L2},
        "seed": inst.seed,
        "a_gens": [list(w) for w in inst.a_gens],
        "b_gens": [list(w) for w in inst.b_gens],
        "conjugates": [_element_to_dict(c) for c in inst.conjugates],
        "private_planted_key": list(inst.planted_key),
    }


def instance_from_dict(data: dict, spec: GroupSpec | None = None) -> AagInstance:
    spec = spec if spec is not None else group_spec_from_dict(data["group"])
    return AagInstance(
        spec=spec,
        params=AagParams(**data["params"]),
        a_gens=tuple(tuple(int(x) for x in w) for w in data["a_gens"]),
        b_gens=tuple(tuple(int(x) for x in w) for w in data["b_gens"]),
        conjugates=tuple(_element_from_dict(c) for c in data["conjugates"]),
        planted_key=tuple(int(x) for x in data.get("private_planted_key", ())),
        seed=data.get("seed"),
    )


def save_instance(inst: AagInstance, path) -> None:
    Path(path).write_text(json.dumps(instance_to_dict(inst), indent=1) + "\n")


def load_instance(path) -> AagInstance:
    return instance_from_dict(json.loads(Path(path).read_text()))
