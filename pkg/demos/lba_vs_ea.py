"""Single-heuristic hillclimbers against the EA on a handful of d=2 instances."""

from aaghh.aag import TABLE4_PARAMS
from aaghh.ea import EaConfig
from aaghh.harness.experiments import make_instances, run_ea_batch, run_lba_sweep, summarize
from aaghh.lba import SWEEP_HEURISTICS
from aaghh.pcgroup import builtin_group

spec = builtin_group(2)
insts = make_instances(spec, TABLE4_PARAMS, count=6, seed=7)

sweep = run_lba_sweep(insts, SWEEP_HEURISTICS, max_iterations=2000, seed=7)
for h, results in sweep.items():
    print(f"LBA {h.name}: {sum(r.success for r in results)}/{len(results)} solved")

results = run_ea_batch(insts, EaConfig(maxsteps=300), seed=7, trace=False)
rate, fail, gens = summarize(results)
print(f"EA [H2]: {float(rate):.0%} solved, mean generations {float(gens):.1f}")
