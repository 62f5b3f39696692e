"""Experiment orchestration, parallel execution and file I/O."""

from .experiments import (
    ExperimentConfig,
    default_maxsteps,
    make_instances,
    make_phase_instances,
    resolve_group,
    run_ea_batch,
    run_hh_experiment,
    run_hh_repeats,
    run_lba_sweep,
    summarize,
)
from .parallel import TaskError, parallel_map
