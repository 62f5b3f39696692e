"""Acceptance gate: one PASS/FAIL line per criterion.

Every stochastic batch uses the master seed below, fixed before any run was
looked at.  Run alone with ``pytest tests/test_acceptance.py -v``; the verdict
lines are printed to the terminal even when output capture is on.
"""

import random
from fractions import Fraction
from pathlib import Path

import pytest

from aaghh.aag import TABLE3_PARAMS, TABLE4_PARAMS, TABLE5_PARAMS, cost
from aaghh.ea import DEFAULT_OPERATOR_COUNTS, EaConfig
from aaghh.harness.experiments import (
    make_instances,
    run_ea_batch,
    run_hh_experiment,
    run_lba_sweep,
    summarize,
)
from aaghh.harness.outputs import (
    audit_ea_outputs,
    write_csv,
    write_ea_outputs,
    write_lba_outputs,
)
from aaghh.heuristics import HeuristicId as H, format_chain, is_pure_deletion
from aaghh.hyperheuristic import HhConfig
from aaghh.lba import SWEEP_HEURISTICS
from aaghh.pcgroup import (
    builtin_group,
    compute_commutator_weights,
    evaluate_word,
    free_reduce,
    generator_element,
    identity,
    inverse,
    multiply,
    nf_length,
    random_word,
)
from conftest import random_element

MASTER_SEED = 1
PROPERTY_TRIPLES = 10_000
PARALLEL_WORKERS = 8


@pytest.fixture(scope="module")
def verdict(pytestconfig):
    capman = pytestconfig.pluginmanager.getplugin("capturemanager")

    def emit(number, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
        with capman.global_and_fixture_disabled():
            print("\n" + line, flush=True)
        assert ok, line
    return emit


# --- batch builders (also used for the parallel rerun) ------------------------

def planted_key_batch(out: Path, workers: int):
    rows = []
    for p_idx, params in enumerate((TABLE3_PARAMS, TABLE4_PARAMS, TABLE5_PARAMS)):
        for degree in (1, 2, 3):
            count = 24 if (p_idx, degree) == (0, 1) else 22  # 9 cells, 200 in total
            insts = make_instances(builtin_group(degree), params, count, MASTER_SEED,
                                   phase=f"planted-{p_idx}", workers=workers)
            for k, inst in enumerate(insts):
                c = cost(inst, inst.planted_key)
                rows.append([degree, params, k, inst.seed, c.sum, c.wsum,
                             cost(inst, ()).sum])
    write_csv(out / "planted.csv", ["degree", "params", "instance", "instance_seed",
                                    "key_cost_sum", "key_wcost_sum", "empty_cost_sum"], rows)
    return rows


def lba_batch(out: Path, workers: int):
    insts = make_instances(builtin_group(2), TABLE4_PARAMS, 30, MASTER_SEED, "lba", workers)
    sweep = run_lba_sweep(insts, SWEEP_HEURISTICS, 5000, MASTER_SEED, workers)
    write_lba_outputs(out, sweep)
    return sweep


def ea_batch(out: Path, degree: int, count: int, workers: int):
    spec = builtin_group(degree)
    insts = make_instances(spec, TABLE3_PARAMS, count, MASTER_SEED, "ea", workers)
    cfg = EaConfig(chain=(H.H2,), maxsteps=1250)
    results = run_ea_batch(insts, cfg, MASTER_SEED, workers, trace=True)
    write_ea_outputs(out, insts, results, cfg)
    return results


@pytest.fixture(scope="module")
def runs_w1(tmp_path_factory):
    return tmp_path_factory.mktemp("workers1")


@pytest.fixture(scope="module")
def planted(runs_w1):
    return planted_key_batch(runs_w1 / "c2", 1)


@pytest.fixture(scope="module")
def lba(runs_w1):
    return lba_batch(runs_w1 / "c3", 1)


@pytest.fixture(scope="module")
def ea_d1(runs_w1):
    return ea_batch(runs_w1 / "c4", 1, 20, 1)


@pytest.fixture(scope="module")
def ea_d2(runs_w1):
    return ea_batch(runs_w1 / "c5", 2, 10, 1)


@pytest.fixture(scope="module")
def ea_d3(runs_w1):
    return ea_batch(runs_w1 / "c8", 3, 5, 1)


@pytest.fixture(scope="module")
def hh_d1():
    hh = HhConfig(c_max=10, n_train=5, n_test=10, n_valid=10, maxsteps_train=50,
                  maxsteps_test=50, maxsteps_valid=1250)
    return run_hh_experiment(builtin_group(1), TABLE3_PARAMS,
                             {"train": 5, "test": 10, "valid": 10}, EaConfig(), hh,
                             MASTER_SEED, workers=1, trace=True)


# --- criterion 1 (and the d=3 half of criterion 8) ----------------------------

def property_suite(degree: int) -> list[str]:
    spec = builtin_group(degree)
    rng = random.Random(MASTER_SEED * 1000 + degree)
    e = identity(spec)
    failures = []
    for i in range(PROPERTY_TRIPLES):
        a, b, c = (random_element(spec, rng) for _ in range(3))
        if multiply(spec, multiply(spec, a, b), c) != multiply(spec, a, multiply(spec, b, c)):
            failures.append(f"associativity #{i}")
        if not multiply(spec, e, a) == a == multiply(spec, a, e):
            failures.append(f"identity #{i}")
        ai = inverse(spec, a)
        if not multiply(spec, a, ai) == e == multiply(spec, ai, a):
            failures.append(f"inverse #{i}")
    n = spec.generator_count
    for i in range(2000):
        w = random_word(spec, rng.randint(0, 20), rng)
        acc = e
        for x in w:
            acc = multiply(spec, acc, generator_element(spec, abs(x), 1 if x > 0 else -1))
        if evaluate_word(spec, w) != acc:
            failures.append(f"evaluate_word fold #{i}")
        letters = [rng.choice([k for k in range(-n, n + 1) if k]) for _ in range(30)]
        r = free_reduce(letters)
        if free_reduce(r) != r:
            failures.append(f"free_reduce idempotence #{i}")
    brute = tuple(sum(nf_length(spec, evaluate_word(spec, (-j, -k, j, k)))
                      for k in range(1, n + 1)) for j in range(1, n + 1))
    if compute_commutator_weights(spec) != brute or spec.weights != brute:
        failures.append("commutator weights")
    return failures


def test_criterion_1_group_property_suite(verdict):
    failures = {d: property_suite(d) for d in (1, 2, 3)}
    bad = {d: f[:3] for d, f in failures.items() if f}
    verdict(1, not bad, f"{PROPERTY_TRIPLES} triples per group d=1,2,3; "
            f"failures {bad or 'none'}")


# --- criterion 2 ---------------------------------------------------------------

def test_criterion_2_planted_key_soundness(verdict, planted):
    zero = sum(1 for r in planted if r[4] == 0 and r[5] == 0)
    nontrivial = sum(1 for r in planted if r[6] > 0)
    verdict(2, len(planted) == 200 and zero == 200 and nontrivial == 200,
            f"{zero}/{len(planted)} planted keys at cost 0 (three parameter sets, d=1,2,3)")


# --- criterion 3 ---------------------------------------------------------------

def test_criterion_3_lba_ordering(verdict, lba):
    rate = {h: Fraction(sum(r.success for r in rs), len(rs)) for h, rs in lba.items()}
    others = [h for h in SWEEP_HEURISTICS if h != H.H2]
    ok = (rate[H.H2] >= Fraction(3, 10)
          and all(rate[H.H2] > rate[h] for h in others)
          and all(rate[h] <= Fraction(1, 10) for h in others))
    shown = ", ".join(f"{h.name} {float(r) * 100:.1f}%" for h, r in rate.items())
    verdict(3, ok, f"LBA success on 30 d=2 instances: {shown} "
            "(need H2 >= 30%, others <= 10% and below H2)")


# --- criteria 4, 5 --------------------------------------------------------------

def test_criterion_4_ea_d1(verdict, ea_d1):
    rate, _, gens = summarize(ea_d1)
    verdict(4, rate == 1 and gens <= 25,
            f"d=1 EA [H2]: success {float(rate) * 100:.1f}%, mean generations "
            f"{float(gens):.2f} (need 100%, <= 25)")


def test_criterion_5_ea_d2(verdict, ea_d2):
    rate, _, gens = summarize(ea_d2)
    verdict(5, rate >= Fraction(9, 10) and gens <= 500,
            f"d=2 EA [H2]: success {float(rate) * 100:.1f}%, mean generations "
            f"{float(gens):.2f} (need >= 90%, <= 500)")


# --- criterion 6 ---------------------------------------------------------------

def test_criterion_6_hyperheuristic_d1(verdict, hh_d1):
    chains = [r.chain for r in hh_d1.records]
    problems = []
    if len(chains) != 10:
        problems.append(f"{len(chains)} chains examined")
    if len(set(chains)) != len(chains):
        problems.append("duplicate chains")
    if any(is_pure_deletion(c) for c in chains):
        problems.append("pure-deletion chain")
    if chains[0] != (H.H2,):
        problems.append("first chain is not H2")
    if hh_d1.best_index != 1:
        v = hh_d1.validation
        if v is None or set(v) != {"best", "initial"}:
            problems.append("validation section missing")
        else:
            valid = [r for r in hh_d1.runs if r.phase == "valid"]
            by_chain = {}
            for r in valid:
                by_chain.setdefault(r.chain, []).append(r)
            best = format_chain(hh_d1.best_chain)
            if set(by_chain) != {best, "H2"} or any(len(x) != 10 for x in by_chain.values()):
                problems.append("validation did not run best and H2 on 10 instances")
            for key, name in (("best", best), ("initial", "H2")):
                rs = by_chain.get(name, [])
                wins = [r.generations for r in rs if r.success]
                fails = [r.best_cost_sum for r in rs if not r.success]
                swapped = (-Fraction(len(wins), len(rs)) if rs else None,
                           Fraction(sum(fails), len(fails)) if fails else 0,
                           Fraction(sum(wins), len(wins)) if wins else 0)
                if tuple(v[key]) != swapped:
                    problems.append(f"validation objective for {key} not rate-first")
    elif hh_d1.validation is not None:
        problems.append("validation ran although C_1 stayed best")
    detail = (f"{len(chains)} unique chains, best i*={hh_d1.best_index} "
              f"({format_chain(hh_d1.best_chain)})")
    if hh_d1.validation:
        detail += (f", validation best {tuple(map(float, hh_d1.validation['best']))} vs H2 "
                   f"{tuple(map(float, hh_d1.validation['initial']))}")
    verdict(6, not problems, detail + (f"; problems {problems}" if problems else ""))


# --- criterion 7 ---------------------------------------------------------------

def _csv_bytes(root: Path) -> dict:
    return {p.relative_to(root).as_posix(): p.read_bytes()
            for p in sorted(root.rglob("*.csv"))}


def test_criterion_7_parallel_equivalence(verdict, runs_w1, planted, lba, ea_d1, ea_d2,
                                          tmp_path_factory):
    w8 = tmp_path_factory.mktemp("workers8")
    planted_key_batch(w8 / "c2", PARALLEL_WORKERS)
    lba_batch(w8 / "c3", PARALLEL_WORKERS)
    ea_batch(w8 / "c4", 1, 20, PARALLEL_WORKERS)
    ea_batch(w8 / "c5", 2, 10, PARALLEL_WORKERS)
    a = {k: v for k, v in _csv_bytes(runs_w1).items() if not k.startswith("c8/")}
    b = _csv_bytes(w8)
    differ = sorted(k for k in set(a) | set(b) if a.get(k) != b.get(k))
    verdict(7, bool(a) and not differ,
            f"{len(a)} CSV files for criteria 2-5 at 1 vs {PARALLEL_WORKERS} workers; "
            f"differing {differ[:5] or 'none'}")


# --- criterion 8 ---------------------------------------------------------------

def test_criterion_8_d3_substitute(verdict, ea_d3):
    props = property_suite(3)
    solved = sum(r.success for r in ea_d3)
    verdict(8, not props and solved >= 1,
            f"d=3 property suite {'clean' if not props else props[:3]}; EA [H2] solved "
            f"{solved}/5 at maxsteps 1250 (need >= 1). Not reproduced: d=5,7 table rows "
            "and exact d=3 generation figures")


# --- criterion 9 ---------------------------------------------------------------

def test_criterion_9_operator_attribution(verdict, runs_w1, ea_d1, ea_d2, ea_d3, hh_d1):
    problems = []
    total_gens = 0
    for name in ("c4", "c5", "c8"):
        problems += [f"{name}: {p}" for p in audit_ea_outputs(runs_w1 / name, 25)]
    for results in (ea_d1, ea_d2, ea_d3):
        for r in results:
            total_gens += len(r.trace)
            for g in r.trace[1:]:
                if g.operator_counts != DEFAULT_OPERATOR_COUNTS:
                    problems.append(f"generation {g.generation}: {g.operator_counts}")
    bad_hh = [r for r in hh_d1.runs if r.offspring_ok is not True]
    if bad_hh:
        problems.append(f"{len(bad_hh)} hyper-heuristic runs failed the audit")
    verdict(9, sum(DEFAULT_OPERATOR_COUNTS.values()) == 25 and not problems,
            f"{total_gens} EA generations + {len(hh_d1.runs)} hyper-heuristic runs "
            f"audited; problems {problems[:3] or 'none'}")
