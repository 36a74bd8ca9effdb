"""Particle filter resampling: multinomial, stratified, systematic and Metropolis."""

import numba

# TBB builds shipped with some distributions are too old for numba; prefer OpenMP.
numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]

from .core import (  # noqa: E402
    InconsistentOffspringError,
    InvalidWeightsError,
    WeightSet,
    ancestors_to_offspring,
    ess,
    max_weight,
    normalize,
    offspring_to_ancestors,
    resampling_error,
)
from .resamplers import (  # noqa: E402
    ResampleConfig,
    Scheme,
    lower_bound,
    metropolis,
    multinomial,
    prefix_sum,
    resample,
    resample_ancestors,
    resample_offspring,
    stratified,
    systematic,
)
from .tuning import chain_params, l_step_matrix, required_B, verify_convergence  # noqa: E402

__version__ = "0.1.0"
