"""Quantum Carnot engine driven by two anyons in a 2D harmonic trap."""

from .cycle import (
    ConfigError,
    CycleConfig,
    CycleReport,
    classical_efficiency,
    heat_in,
    heat_in_entropy_form,
    heat_out,
    heat_out_entropy_form,
    run_cycle,
)
from .spectrum import DomainError, LevelClass, LevelIndex, degeneracy, energy, enumerate_levels, levels_by_excitation
from .statmech import (
    SeriesEstimate,
    ThermalPoint,
    cross_mean_energy_closed,
    cross_mean_energy_truncated,
    entropy,
    entropy_truncated,
    log_partition_closed,
    mean_energy_closed,
    mean_energy_truncated,
    occupation,
    partition_closed,
    partition_truncated,
    thermal_point,
)
from .sweep import Objective, Range, SweepSpec, refine_optimum, run_sweep

__version__ = "0.1.0"
