"""Build an AAG instance and look at the cost landscape around its planted key."""

import random

from aaghh.aag import TABLE4_PARAMS, cost, generate_instance, verify_solution
from aaghh.pcgroup import builtin_group, random_word

spec = builtin_group(2)
inst = generate_instance(spec, TABLE4_PARAMS, seed=2024)
print(f"{len(inst.a_gens)} a-generators, {len(inst.b_gens)} conjugated b-generators")
print("empty word:  ", cost(inst, ()))
print("planted key: ", cost(inst, inst.planted_key), verify_solution(inst, inst.planted_key))

# costs are compared lexicographically, unweighted sum first
rng = random.Random(0)
samples = sorted(cost(inst, random_word(spec, 10, rng)) for _ in range(200))
print("best of 200 random words:", samples[0])
