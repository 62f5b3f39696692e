"""A short hyper-heuristic run on d=1: which chain does the search settle on?"""

from aaghh.aag import TABLE3_PARAMS
from aaghh.ea import EaConfig
from aaghh.harness.experiments import run_hh_experiment
from aaghh.heuristics import format_chain
from aaghh.hyperheuristic import HhConfig
from aaghh.pcgroup import builtin_group

counts = {"train": 3, "test": 5, "valid": 5}
hh = HhConfig(c_max=6, maxsteps_train=30, maxsteps_test=30, maxsteps_valid=300)
report = run_hh_experiment(builtin_group(1), TABLE3_PARAMS, counts, EaConfig(), hh, seed=3)

for r in report.records:
    flag = "*" if r.iteration == report.best_index else " "
    print(f"{flag} {r.iteration:2d} {format_chain(r.chain):<16} train={tuple(map(float, r.train))}")
if report.validation:
    for k, v in report.validation.items():
        print(f"validation {k}: rate {-float(v.first):.0%}, gens {float(v.third):.1f}")
else:
    print("the initial chain [H2] was never beaten")
