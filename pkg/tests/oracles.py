"""Independent reference models used only by the tests."""

import random

from aaghh.pcgroup import GroupSpec


class NumberFieldModel:
    """O ⋊ U modelled directly in Z[x]/(f): an element is a pair (unit, o) of
    residues, multiplied as (u1, o1)(u2, o2) = (u1 u2, o1 u2 + o2).

    Only valid for the built-in groups, whose unit generators are -1 and the
    root x of f.
    """

    def __init__(self, spec: GroupSpec):
        self.spec = spec
        self.f = list(spec.poly_coeffs)
        self.d = spec.degree
        one = self.const(1)
        root = self.reduce([0, 1]) if self.d > 1 else self.const(1)
        # x * (x^{d-1} + c_{d-1} x^{d-2} + ... + c_1) = -c_0 with c_0 = +-1
        c0 = self.f[0]
        q = [self.f[k + 1] for k in range(self.d)]  # coefficients of the cofactor
        root_inv = [-c0 * c for c in q] if self.d > 1 else self.const(1)
        assert self.mul(root, root_inv) == one
        self.unit_gens = [(self.const(-1), self.const(-1))]
        if spec.unit_rank:
            self.unit_gens.append((root, root_inv))

    def const(self, c):
        return [c] + [0] * (self.d - 1)

    def reduce(self, p):
        p = list(p) + [0] * max(0, self.d - len(p))
        for k in range(len(p) - 1, self.d - 1, -1):
            c = p[k]
            if c:
                for j in range(self.d + 1):
                    p[k - self.d + j] -= c * self.f[j]
        return p[:self.d]

    def mul(self, a, b):
        out = [0] * (2 * self.d - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                out[i + j] += x * y
        return self.reduce(out)

    def identity(self):
        return (self.const(1), [0] * self.d)

    def op(self, a, b):
        u1, o1 = a
        u2, o2 = b
        return (self.mul(u1, u2), [x + y for x, y in zip(self.mul(o1, u2), o2)])

    def letter(self, letter):
        j, s = abs(letter) - 1, (1 if letter > 0 else -1)
        nu = self.spec.n_units
        if j < nu:
            u = self.unit_gens[j][0 if s > 0 else 1]
            return (u, [0] * self.d)
        o = [0] * self.d
        o[j - nu] = s
        return (self.const(1), o)

    def word(self, w):
        acc = self.identity()
        for x in w:
            acc = self.op(acc, self.letter(x))
        return acc

    def from_normal_form(self, e):
        u = self.const(1)
        for j, t in enumerate(e.torsion):
            for _ in range(t):
                u = self.mul(u, self.unit_gens[j][0])
        for k, m in enumerate(e.units):
            g = self.unit_gens[self.spec.n_torsion + k][0 if m > 0 else 1]
            for _ in range(abs(m)):
                u = self.mul(u, g)
        return (u, list(e.coords))


def random_cancellation_order(letters, rng: random.Random):
    """Free reduction that cancels a randomly chosen adjacent inverse pair each step."""
    w = list(letters)
    while True:
        spots = [i for i in range(len(w) - 1) if w[i] == -w[i + 1]]
        if not spots:
            return tuple(w)
        i = rng.choice(spots)
        del w[i:i + 2]
