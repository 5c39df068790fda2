"""Free (1+1)D Dirac transitions computed two ways.

* forward-only: evolve a source state, overlap with a detector state at t_f
* time-symmetric: positive (or negative) energy waves anchored at both ends,
  whose product is a complex transition amplitude density

Everything runs on an exact per-mode spectral propagator.
"""
__version__ = "0.1.0"

from .errors import (
    BoundaryContaminationError,
    ConfigurationError,
    DegenerateWeightError,
    DomainError,
    EnergySignError,
    PhysicsContractError,
)
from .field import (
    DensitySnapshot,
    Grid1D,
    SpinorField2,
    TimeSeries,
    gaussian_initial,
    inner_product,
    mean_position,
    probability_current,
    probability_density,
)
from .propagator import (
    ModePropagator,
    build_modes,
    evolve,
    project_negative,
    project_positive,
)
from .ci import CiExperiment, TransitionResult, ZbwTrace, run_ci, zbw_trace_ci
from .rsi import (
    RsiExperiment,
    centroid_trace_rsi,
    local_conservation_rsi,
    run_rsi,
    run_rsi_negative,
)
from .reduction4 import SpinorField4, evolve4, split_blocks, merge_blocks, verify_reduction
