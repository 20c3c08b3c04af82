"""Stability of random optimization problems under resampling perturbations."""

from .errors import *  # noqa: F401,F403
from .metric import (CoverReport, SolutionCloud, covering_number_internal, packing_number_exact,
                     packing_number_greedy, partial_cover_count)
from .problem import (InputVector, NearOptimalSet, PerturbationScheme, ProblemInstance, WindowRule,
                      near_optimal_set, perturb_inputs, perturbation_scheme, perturbed_optimizers,
                      sample_inputs, solve, stability_statistic, window_length)
from .seeding import hash64, substream
from .solution import SolutionPoint

__version__ = "0.1.0"
