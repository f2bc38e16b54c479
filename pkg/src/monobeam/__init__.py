"""Monopulse beam synthesis on interleaved sparse subarrays.

The library partitions one antenna array into disjoint sparse subarrays,
one per beam, by alternating convex weighted-l1 solves: each beam's
subproblem penalizes elements the other beams are using, so the supports
separate while every beam keeps its gain, slope and side-lobe requirements.
"""

from .analysis import (
    BeamPattern,
    MeasurementError,
    MonteCarloReport,
    beam_pattern,
    beamwidth_3db,
    max_sll,
    monte_carlo,
    slope_at,
    wilson_interval,
)
from .arrays import (
    Angle,
    ArrayGeometry,
    CouplingModel,
    angle_grid,
    coupling_matrix,
    effective_matrix,
    effective_response,
    steering_derivative,
    steering_matrix,
    steering_vector,
)
from .config import ConfigError, SynthesisConfig, load_config, parse_config
from .constraints import (
    BeamSpec,
    ConstraintSystem,
    FeasibilityReport,
    SidelobeRegion,
    check_feasibility,
    compile_constraints,
)
from .reselection import (
    ReselectionOptions,
    SynthesisResult,
    WeightVector,
    pairwise_cost,
    penalizing_vector,
    shared_count,
    synthesize,
)
from .solver import (
    ConeProgram,
    SolverOptions,
    SubproblemSolution,
    real_embedding,
    solve_weighted_l1,
)

__version__ = "0.1.0"

__all__ = [
    "Angle",
    "ArrayGeometry",
    "BeamPattern",
    "BeamSpec",
    "ConeProgram",
    "ConfigError",
    "ConstraintSystem",
    "CouplingModel",
    "FeasibilityReport",
    "MeasurementError",
    "MonteCarloReport",
    "ReselectionOptions",
    "SidelobeRegion",
    "SolverOptions",
    "SubproblemSolution",
    "SynthesisConfig",
    "SynthesisResult",
    "WeightVector",
    "angle_grid",
    "beam_pattern",
    "beamwidth_3db",
    "check_feasibility",
    "compile_constraints",
    "coupling_matrix",
    "effective_matrix",
    "effective_response",
    "load_config",
    "max_sll",
    "monte_carlo",
    "pairwise_cost",
    "parse_config",
    "penalizing_vector",
    "real_embedding",
    "shared_count",
    "slope_at",
    "solve_weighted_l1",
    "steering_derivative",
    "steering_matrix",
    "steering_vector",
    "synthesize",
    "wilson_interval",
]
