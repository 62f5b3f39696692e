import random

import pytest

from aaghh.aag import TABLE3_PARAMS, TABLE4_PARAMS, generate_instance
from aaghh.pcgroup import GroupElement, builtin_group


@pytest.fixture(scope="session")
def d1():
    return builtin_group(1)


@pytest.fixture(scope="session")
def d2():
    return builtin_group(2)


@pytest.fixture(scope="session")
def d3():
    return builtin_group(3)


@pytest.fixture(scope="session", params=[1, 2, 3], ids=["d1", "d2", "d3"])
def spec(request):
    return builtin_group(request.param)


@pytest.fixture(scope="session")
def inst_d1(d1):
    return generate_instance(d1, TABLE3_PARAMS, seed=11)


@pytest.fixture(scope="session")
def inst_d2(d2):
    return generate_instance(d2, TABLE4_PARAMS, seed=12)


def random_element(spec, rng: random.Random, unit_range=4, coord_range=40) -> GroupElement:
    return GroupElement(
        tuple(rng.randrange(o) for o in spec.torsion_orders),
        tuple(rng.randint(-unit_range, unit_range) for _ in range(spec.unit_rank)),
        tuple(rng.randint(-coord_range, coord_range) for _ in range(spec.degree)),
    )


class ScriptedRng:
    """Stand-in for ``random.Random`` that replays scripted draws.

    ``randint``/``randrange``/``random`` pop from their own queues; ``sample``
    pops a whole tuple.
    """

    def __init__(self, randint=(), randrange=(), random=(), sample=()):
        self._q = {"randint": list(randint), "randrange": list(randrange),
                   "random": list(random), "sample": list(sample)}

    def _pop(self, kind):
        return self._q[kind].pop(0)

    def randint(self, a, b):
        v = self._pop("randint")
        assert a <= v <= b, (a, v, b)
        return v

    def randrange(self, *args):
        v = self._pop("randrange")
        stop = args[-1] if len(args) > 1 else args[0]
        assert 0 <= v < stop
        return v

    def random(self):
        return self._pop("random")

    def sample(self, population, k):
        return list(self._pop("sample"))

    def choice(self, seq):
        return seq[self._pop("randrange")]
