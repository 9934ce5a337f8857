"""Long-memory birth/death chain whose scaling limit is the delayed logistic equation.

Chain simulation, a method-of-steps DDE solver, pathwise semimartingale
diagnostics and a seeded Monte Carlo harness.
"""

__version__ = "0.1.0"

from .chain import (ChainState, OutsideTheoremWarning, SimParams, enumerate_expectation,
                    generator_drift, init_state, sample_jump_chain, theta_minus,
                    theta_plus, window_size)
from .dde import DdeParams, DdeSolution, evaluate, logistic_exact, solve_dde
from .diagnostics import (DecompositionReport, OscillationMetrics, clamp_term, compute_H,
                          decompose, max_jump, oscillation_metrics, path_suprema,
                          poisson_undershoot_bound, poisson_undershoot_exponent,
                          replacement_error, sup_error, sup_initial_deviation)
from .errors import (CapacityError, DivergenceError, DomainError, ParameterError,
                     PreconditionError, ReplicaError, ResourceError)
from .montecarlo import (EnsembleSpec, EnsembleStats, MetricSummary, PowerFit, SweepResult,
                         default_workers, fit_power_law, replica_metrics, run_ensemble,
                         scaling_study)
from .seeding import RNG_ALGORITHM, derive_seed, derive_seeds, make_rng, replica_seed
from .simulate import Trajectory, simulate, time_grid
