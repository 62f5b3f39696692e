"""Arithmetic in O ⋊ U for the three built-in groups.

Words are tuples of signed generator indices: 2 is g2, -2 is g2^-1.
Generators are ordered torsion, infinite units, then the O basis.
"""

from aaghh.pcgroup import (
    builtin_group,
    evaluate_word,
    format_word,
    inverse,
    multiply,
    nf_length,
    weighted_nf_length,
)

for degree in (1, 2, 3):
    spec = builtin_group(degree)
    print(f"d={degree}: {spec.generator_count} generators, weights {spec.weights}")

# d=2: the unit phi acts on Z[phi] = Z^2 by the companion matrix of x^2 - x - 1
d2 = builtin_group(2)
w = (3, 2, 2, 4, -1)
e = evaluate_word(d2, w)
print(f"{format_word(w)} -> torsion {e.torsion}, units {e.units}, coords {e.coords}")
print("length", nf_length(d2, e), "weighted", weighted_nf_length(d2, e))

# the unit part of a product multiplies, the O part gets twisted by the right factor
f = evaluate_word(d2, (3,) + (2,) * 30)
print("coords of o1 * phi^30:", f.coords)  # Fibonacci numbers F29, F30
print("x * x^-1 is trivial:", multiply(d2, e, inverse(d2, e)) == evaluate_word(d2, ()))
