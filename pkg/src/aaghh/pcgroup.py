"""Arithmetic in the polycyclic groups O ⋊ U attached to a number field.

Elements are kept in collected normal form ``(torsion, units, coords)``.  The
generating sequence is ordered torsion units, infinite-order units, then the
integral basis of O, and words refer to generators by 1-based index with a
sign: the letter ``-3`` is ``g_3^{-1}``.

Multiplication follows ``(u1, o1)(u2, o2) = (u1 u2, o1 * M(u2) + o2)`` where
``M(u)`` is the integer matrix of multiplication by ``u`` acting on row
vectors of O-coordinates.  All integers are Python ints, so coordinates never
overflow however far conjugation by units pushes them.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from random import Random
from typing import Iterable, Sequence

Matrix = tuple[tuple[int, ...], ...]
Word = tuple[int, ...]


class GroupSpecError(ValueError):
    """Raised for malformed or inconsistent group data."""


class SamplingError(RuntimeError):
    """Raised when rejection sampling cannot hit the requested length range."""


# --- small integer matrix helpers -------------------------------------------

def identity_matrix(d: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(d)) for i in range(d))


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    cols = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a)


def vec_mat(v: Sequence[int], m: Matrix) -> tuple[int, ...]:
    d = len(v)
    return tuple(sum(v[i] * m[i][j] for i in range(d)) for j in range(d))


def determinant(m: Matrix) -> int:
    """Exact determinant via Bareiss fraction-free elimination."""
    a = [list(row) for row in m]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[-1][-1] if n else 1


def integer_inverse(m: Matrix) -> Matrix:
    n = len(m)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise GroupSpecError("singular action matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    inv = tuple(tuple(row[n:]) for row in aug)
    if any(x.denominator != 1 for row in inv for x in row):
        raise GroupSpecError("action matrix is not invertible over Z")
    return tuple(tuple(int(x) for x in row) for row in inv)


def mat_pow(m: Matrix, k: int, m_inv: Matrix | None = None) -> Matrix:
    if k < 0:
        return mat_pow(m_inv if m_inv is not None else integer_inverse(m), -k)
    result = identity_matrix(len(m))
    base = m
    while k:
        if k & 1:
            result = mat_mul(result, base)
        base = mat_mul(base, base)
        k >>= 1
    return result


# --- group data --------------------------------------------------------------

@dataclass(frozen=True)
class GroupElement:
    torsion: tuple[int, ...]
    units: tuple[int, ...]
    coords: tuple[int, ...]


@dataclass(frozen=True)
class GroupSpec:
    """Number-field data defining the platform group O ⋊ U.

    ``poly_coeffs`` lists the coefficients of the defining polynomial in
    ascending powers.  ``action_matrices`` holds one matrix per unit generator
    (torsion first), row ``i`` being the image of basis element ``i``.
    """

    degree: int
    poly_coeffs: tuple[int, ...]
    torsion_orders: tuple[int, ...]
    unit_rank: int
    action_matrices: tuple[Matrix, ...]
    name: str = ""
    weights: tuple[int, ...] = field(default=(), compare=False)
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        _validate(self)
        inverses = tuple(integer_inverse(m) for m in self.action_matrices)
        object.__setattr__(self, "_inverses", inverses)
        if not self.weights:
            object.__setattr__(self, "weights", compute_commutator_weights(self))

    @property
    def n_torsion(self) -> int:
        return len(self.torsion_orders)

    @property
    def n_units(self) -> int:
        return self.n_torsion + self.unit_rank

    @property
    def generator_count(self) -> int:
        return self.n_units + self.degree

    def __getstate__(self):
        state = dict(self.__dict__)
        state["_cache"] = {}
        return state

    def __setstate__(self, state):
        for k, v in state.items():
            object.__setattr__(self, k, v)

    def generator_matrix(self, j: int, sign: int = 1) -> Matrix:
        """Action matrix of unit generator ``j`` (0-based) raised to ``sign``."""
        return self.action_matrices[j] if sign > 0 else self._inverses[j]

    def unit_matrix(self, torsion: tuple[int, ...], units: tuple[int, ...]) -> Matrix:
        key = (torsion, units)
        cache = self._cache
        m = cache.get(key)
        if m is not None:
            return m
        m = identity_matrix(self.degree)
        for j, t in enumerate(torsion):
            if t:
                m = mat_mul(m, mat_pow(self.action_matrices[j], t))
        for k, e in enumerate(units):
            if e:
                j = self.n_torsion + k
                m = mat_mul(m, mat_pow(self.action_matrices[j], e, self._inverses[j]))
        if len(cache) > 50_000:
            cache.clear()
        cache[key] = m
        return m


def _validate(spec: GroupSpec) -> None:
    d = spec.degree
    if d < 1:
        raise GroupSpecError("degree must be positive")
    if len(spec.poly_coeffs) != d + 1 or spec.poly_coeffs[-1] != 1:
        raise GroupSpecError("poly_coeffs must describe a monic polynomial of the given degree")
    if any(o < 1 for o in spec.torsion_orders) or spec.unit_rank < 0:
        raise GroupSpecError("bad torsion orders or unit rank")
    if len(spec.action_matrices) != spec.n_units:
        raise GroupSpecError(
            f"expected {spec.n_units} action matrices, got {len(spec.action_matrices)}")
    ident = identity_matrix(d)
    for j, m in enumerate(spec.action_matrices):
        if len(m) != d or any(len(row) != d for row in m):
            raise GroupSpecError(f"action matrix {j + 1} is not {d}x{d}")
        det = determinant(m)
        if det not in (1, -1):
            raise GroupSpecError(f"action matrix {j + 1} has determinant {det}, not a unit")
    for j, order in enumerate(spec.torsion_orders):
        m = spec.action_matrices[j]
        if order == 2 and m != tuple(tuple(-x for x in row) for row in ident):
            raise GroupSpecError("the order-2 torsion unit must act as -I")
        if mat_pow(m, order) != ident:
            raise GroupSpecError(f"torsion generator {j + 1} does not have order {order}")
    mats = spec.action_matrices
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            if mat_mul(mats[i], mats[j]) != mat_mul(mats[j], mats[i]):
                raise GroupSpecError(f"action matrices {i + 1} and {j + 1} do not commute")


def make_group_spec(degree, poly_coeffs, torsion_orders, unit_rank, action_matrices,
                    name: str = "") -> GroupSpec:
    return GroupSpec(
        degree=int(degree),
        poly_coeffs=tuple(int(c) for c in poly_coeffs),
        torsion_orders=tuple(int(o) for o in torsion_orders),
        unit_rank=int(unit_rank),
        action_matrices=tuple(tuple(tuple(int(x) for x in row) for row in m)
                              for m in action_matrices),
        name=name,
    )


def group_spec_to_dict(spec: GroupSpec) -> dict:
    return {
        "name": spec.name,
        "degree": spec.degree,
        "poly_coeffs": [str(c) for c in spec.poly_coeffs],
        "torsion_orders": list(spec.torsion_orders),
        "unit_rank": spec.unit_rank,
        "action_matrices": [[[str(x) for x in row] for row in m] for m in spec.action_matrices],
    }


def group_spec_from_dict(data: dict) -> GroupSpec:
    try:
        return make_group_spec(data["degree"], data["poly_coeffs"], data["torsion_orders"],
                               data["unit_rank"], data["action_matrices"],
                               name=data.get("name", ""))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, GroupSpecError):
            raise
        raise GroupSpecError(f"cannot parse group spec: {exc!r}") from exc


def load_group_spec(path) -> GroupSpec:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise GroupSpecError(f"{path}: {exc}") from exc
    return group_spec_from_dict(data)


def save_group_spec(spec: GroupSpec, path) -> None:
    Path(path).write_text(json.dumps(group_spec_to_dict(spec), indent=2) + "\n")


BUILTIN_DEGREES = (1, 2, 3)


def builtin_group(degree: int) -> GroupSpec:
    """Shipped group for f = x-1, x^2-x-1 or x^3-x-1."""
    if degree not in BUILTIN_DEGREES:
        raise GroupSpecError(f"no built-in group for degree {degree}; supply a spec file")
    text = resources.files("aaghh.data").joinpath(f"group_d{degree}.json").read_text()
    return group_spec_from_dict(json.loads(text))


# --- elements ----------------------------------------------------------------

def identity(spec: GroupSpec) -> GroupElement:
    return GroupElement((0,) * spec.n_torsion, (0,) * spec.unit_rank, (0,) * spec.degree)


def multiply(spec: GroupSpec, a: GroupElement, b: GroupElement) -> GroupElement:
    torsion = tuple((x + y) % o for x, y, o in zip(a.torsion, b.torsion, spec.torsion_orders))
    units = tuple(x + y for x, y in zip(a.units, b.units))
    moved = vec_mat(a.coords, spec.unit_matrix(b.torsion, b.units))
    return GroupElement(torsion, units, tuple(x + y for x, y in zip(moved, b.coords)))


def inverse(spec: GroupSpec, a: GroupElement) -> GroupElement:
    torsion = tuple((-x) % o for x, o in zip(a.torsion, spec.torsion_orders))
    units = tuple(-x for x in a.units)
    moved = vec_mat(a.coords, spec.unit_matrix(torsion, units))
    return GroupElement(torsion, units, tuple(-x for x in moved))


def commutator(spec: GroupSpec, a: GroupElement, b: GroupElement) -> GroupElement:
    """``[a, b] = a^-1 b^-1 a b``."""
    left = multiply(spec, inverse(spec, a), inverse(spec, b))
    return multiply(spec, multiply(spec, left, a), b)


def generator_element(spec: GroupSpec, index: int, sign: int = 1) -> GroupElement:
    n = spec.generator_count
    if not 1 <= index <= n:
        raise IndexError(f"generator index {index} outside 1..{n}")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    torsion = [0] * spec.n_torsion
    units = [0] * spec.unit_rank
    coords = [0] * spec.degree
    j = index - 1
    if j < spec.n_torsion:
        torsion[j] = sign % spec.torsion_orders[j]
    elif j < spec.n_units:
        units[j - spec.n_torsion] = sign
    else:
        coords[j - spec.n_units] = sign
    return GroupElement(tuple(torsion), tuple(units), tuple(coords))


def evaluate_word(spec: GroupSpec, w: Iterable[int]) -> GroupElement:
    """Collect a word into normal form, one letter at a time."""
    nt, nu, d = spec.n_torsion, spec.n_units, spec.degree
    orders = spec.torsion_orders
    torsion = [0] * nt
    units = [0] * spec.unit_rank
    o = [0] * d
    rng_d = range(d)
    for letter in w:
        j = abs(letter) - 1
        s = 1 if letter > 0 else -1
        if j >= nu:
            o[j - nu] += s
            continue
        if j < nt:
            torsion[j] = (torsion[j] + s) % orders[j]
        else:
            units[j - nt] += s
        m = spec.generator_matrix(j, s)
        o = [sum(o[i] * m[i][k] for i in rng_d) for k in rng_d]
    return GroupElement(tuple(torsion), tuple(units), tuple(o))


def exponent_vector(e: GroupElement) -> tuple[int, ...]:
    return e.torsion + e.units + e.coords


def nf_length(spec: GroupSpec, e: GroupElement) -> int:
    return sum(e.torsion) + sum(map(abs, e.units)) + sum(map(abs, e.coords))


def weighted_nf_length(spec: GroupSpec, e: GroupElement) -> int:
    return sum(w * abs(x) for w, x in zip(spec.weights, exponent_vector(e)))


def compute_commutator_weights(spec: GroupSpec) -> tuple[int, ...]:
    n = spec.generator_count
    gens = [generator_element(spec, j) for j in range(1, n + 1)]
    return tuple(sum(nf_length(spec, commutator(spec, gj, gk)) for gk in gens) for gj in gens)


# --- words -------------------------------------------------------------------

def free_reduce(letters: Iterable[int]) -> Word:
    out: list[int] = []
    for x in letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def invert_word(w: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(w))


def concat_words(*words: Sequence[int]) -> Word:
    return free_reduce(x for w in words for x in w)


def conjugate_word(w: Sequence[int], g: int) -> Word:
    """``g^-1 w g`` for a single letter ``g``."""
    return free_reduce((-g, *w, g))


def word_from_pairs(pairs: Iterable[tuple[int, int]]) -> Word:
    return tuple(i * s for i, s in pairs)


def word_to_pairs(w: Sequence[int]) -> list[tuple[int, int]]:
    return [(abs(x), 1 if x > 0 else -1) for x in w]


def format_word(w: Sequence[int]) -> str:
    return " ".join(str(x) for x in w)


def _random_letter(n: int, last: int, rng: Random) -> int:
    while True:
        x = rng.randrange(2 * n)
        letter = x // 2 + 1 if x % 2 == 0 else -(x // 2 + 1)
        if letter != -last:
            return letter


def random_word(spec: GroupSpec, length: int, rng: Random) -> Word:
    """Freely reduced word of exactly ``length`` uniformly drawn letters."""
    n = spec.generator_count
    w: list[int] = []
    last = 0
    for _ in range(length):
        last = _random_letter(n, last, rng)
        w.append(last)
    return tuple(w)


def random_reduced_word(spec: GroupSpec, length_lo: int, length_hi: int, rng: Random,
                        length_mode: str = "collected", max_attempts: int = 10_000,
                        max_letters: int | None = None) -> Word:
    """Random reduced word whose length lies in ``[length_lo, length_hi]``.

    With ``length_mode="collected"`` (the default) the length is ``nf_length``
    of the collected element: each attempt draws a target uniformly from the
    range and walks non-backtracking random letters until the collected length
    reaches it, rejecting the attempt if the last step overshot ``length_hi``.
    With ``length_mode="free"`` the letter count itself is drawn from the range.
    """
    if length_lo < 1 or length_hi < length_lo:
        raise ValueError(f"invalid length range [{length_lo}, {length_hi}]")
    if length_mode == "free":
        return random_word(spec, rng.randint(length_lo, length_hi), rng)
    if length_mode != "collected":
        raise ValueError(f"unknown length_mode {length_mode!r}")
    if max_letters is None:
        max_letters = 64 * length_hi
    n = spec.generator_count
    nt, nu, d = spec.n_torsion, spec.n_units, spec.degree
    orders = spec.torsion_orders
    rng_d = range(d)
    for _ in range(max_attempts):
        target = rng.randint(length_lo, length_hi)
        torsion = [0] * nt
        units = [0] * spec.unit_rank
        o = [0] * d
        w: list[int] = []
        last = 0
        while len(w) < max_letters:
            last = _random_letter(n, last, rng)
            w.append(last)
            j = abs(last) - 1
            s = 1 if last > 0 else -1
            if j >= nu:
                o[j - nu] += s
            else:
                if j < nt:
                    torsion[j] = (torsion[j] + s) % orders[j]
                else:
                    units[j - nt] += s
                m = spec.generator_matrix(j, s)
                o = [sum(o[i] * m[i][k] for i in rng_d) for k in rng_d]
            length = sum(torsion) + sum(map(abs, units)) + sum(map(abs, o))
            if length >= target:
                if length <= length_hi:
                    return tuple(w)
                break
    raise SamplingError(
        f"no word with length in [{length_lo}, {length_hi}] after {max_attempts} attempts")
