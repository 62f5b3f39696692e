import pytest

from aaghh.aag import cost
from aaghh.heuristics import HeuristicId as H
from aaghh.lba import SWEEP_HEURISTICS, LbaConfig, run_lba


def test_sweep_excludes_h7():
    assert SWEEP_HEURISTICS == (H.H1, H.H2, H.H3, H.H4, H.H5, H.H6)


def test_config_validation():
    with pytest.raises(ValueError):
        LbaConfig(max_iterations=-1)


def test_accepted_costs_strictly_decrease(inst_d1):
    res = run_lba(inst_d1, LbaConfig(H.H2, 2000), seed=1, trace=True)
    costs = [r.best_cost for r in res.trace]
    assert all(b < a for a, b in zip(costs, costs[1:]))
    assert costs[-1] == res.best_cost == cost(inst_d1, res.best_word)
    assert res.generations_used <= 2000


def test_zero_iterations(inst_d1):
    res = run_lba(inst_d1, LbaConfig(H.H2, 0), seed=2, initial_word=(1, 2))
    assert res.generations_used == 0 and res.best_word == (1, 2)


def test_starts_solved(inst_d1):
    res = run_lba(inst_d1, LbaConfig(H.H4, 100), seed=3, initial_word=inst_d1.planted_key)
    assert res.success and res.generations_used == 0


def test_deterministic(inst_d2):
    a = run_lba(inst_d2, LbaConfig(H.H5, 300), seed=4)
    b = run_lba(inst_d2, LbaConfig(H.H5, 300), seed=4)
    assert a.best_word == b.best_word and a.generations_used == b.generations_used


def test_stops_at_success(inst_d1):
    res = run_lba(inst_d1, LbaConfig(H.H2, 5000), seed=6)
    if res.success:
        assert res.generations_used < 5000 and res.best_cost.sum == 0
    else:
        assert res.generations_used == 5000


def test_frozen_run(inst_d1):
    res = run_lba(inst_d1, LbaConfig(H.H2, 5000), seed=6)
    assert (res.success, res.generations_used, res.best_cost.sum) == (True, 32, 0)
