"""Generalized Feynman-Kac Monte Carlo for attractive 1D trapped bosons."""

from .estimator import DegenerateWeights, EstimatorResult, gfk_expectation, ground_energy, jackknife_error, replica_average
from .model import ModelConfig, drift, gaussian_delta, local_u, log_trial, pilot_e0, resolve_e0, v_int, v_p, v_trap
from .observables import TooFewParticles, mean_x_sq, pair_distance_sq, pair_distances, pair_histogram
from .regularization import GridNotConverged, RegularizationReport, check_regularization, gaussian_well_ground_state, wkb_bound_count
from .sampler import (
    NonFiniteWalker,
    SamplerConfig,
    Trajectory,
    TrajectorySet,
    WalkerState,
    generate_trajectories,
    generate_trajectory,
    increment,
    init_walker,
    step,
    trajectory_stream,
)
from .theory import (
    ValidityReport,
    pair_variance_prediction,
    quarter_period_map,
    soliton_size,
    validity_conditions,
    vrel_variance,
    zero_point_rel_fluct,
)
from .units import (
    PhysicalParams,
    axial_omega,
    collapse_threshold,
    coupling_si,
    g_tilde_for_omega,
    lithium7_defaults,
    quarter_period_seconds,
    radial_length,
)

__version__ = "0.1.0"
