"""Dimensionless model: trap, regularized contact interaction, trial function.

Units are fixed by hbar = m = omega = 1.  Coordinates are vectors of N
particle positions; every function here also accepts batches of
configurations with shape (..., N) and reduces over the last axis.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

COUPLING_MODES = ("pre_quench", "post_quench")

# Stream index reserved for the pilot estimate of e0 (outside any realistic
# trajectory index range).
PILOT_STREAM_INDEX = 2**64 - 1
PILOT_SAMPLES = 8192


@dataclass(frozen=True)
class ModelConfig:
    """Physical parameters of one simulation.

    The post-quench coupling is ``g_tilde``; the pre-quench coupling is
    ``g_tilde / quench_divisor``.  ``coupling_mode`` selects which of the
    two enters the sampled potential.  ``e0`` is the reference energy of
    the trial function; ``None`` means "estimate it with a pilot run"
    (see :func:`resolve_e0`).
    """

    n_particles: int
    g_tilde: float
    sigma_tilde: float
    quench_divisor: float = 4.0
    trap_enabled: bool = True
    trial_b: float = 0.5
    e0: float | None = None
    coupling_mode: str = "pre_quench"

    def __post_init__(self):
        if self.n_particles < 1:
            raise ValueError(f"n_particles must be >= 1, got {self.n_particles}")
        # g_tilde = 0 is allowed so the noninteracting benchmarks are runnable.
        if self.g_tilde < 0:
            raise ValueError(f"g_tilde must be >= 0, got {self.g_tilde}")
        if self.sigma_tilde <= 0:
            raise ValueError(f"sigma_tilde must be > 0, got {self.sigma_tilde}")
        if self.quench_divisor <= 0:
            raise ValueError(f"quench_divisor must be > 0, got {self.quench_divisor}")
        # trial_b = 0 gives the unguided (driftless) walk, useful for checks.
        if self.trial_b < 0:
            raise ValueError(f"trial_b must be >= 0, got {self.trial_b}")
        if self.coupling_mode not in COUPLING_MODES:
            raise ValueError(f"coupling_mode must be one of {COUPLING_MODES}")

    @property
    def g_pre_quench(self) -> float:
        return self.g_tilde / self.quench_divisor

    @property
    def g_sampled(self) -> float:
        """Coupling that enters the sampled potential."""
        if self.coupling_mode == "pre_quench":
            return self.g_pre_quench
        return self.g_tilde

    def with_e0(self, e0: float) -> "ModelConfig":
        return replace(self, e0=float(e0))


@lru_cache(maxsize=64)
def _pair_indices(n: int):
    return np.triu_indices(n, k=1)


def v_trap(x, enabled: bool = True):
    """Harmonic confinement (1/2) sum_i x_i^2; zero when the trap is off."""
    x = np.asarray(x, dtype=float)
    if not enabled:
        return np.zeros(x.shape[:-1]) if x.ndim > 1 else 0.0
    val = 0.5 * np.sum(x * x, axis=-1)
    return val if x.ndim > 1 else float(val)


def gaussian_delta(r, sigma_tilde: float):
    """Normalized Gaussian of width sigma_tilde standing in for delta(r)."""
    if sigma_tilde <= 0:
        raise ValueError("sigma_tilde must be > 0")
    r = np.asarray(r, dtype=float)
    norm = 1.0 / (np.sqrt(2.0 * np.pi) * sigma_tilde)
    val = norm * np.exp(-(r * r) / (2.0 * sigma_tilde**2))
    return val if val.ndim else float(val)


def v_int(x, g_eff: float, sigma_tilde: float):
    """Attractive pairwise energy -g_eff * sum_{i<j} delta_sigma(x_i - x_j)."""
    x = np.asarray(x, dtype=float)
    n = x.shape[-1]
    if n < 2 or g_eff == 0.0:
        return np.zeros(x.shape[:-1]) if x.ndim > 1 else 0.0
    iu, ju = _pair_indices(n)
    diffs = x[..., iu] - x[..., ju]
    val = -g_eff * np.sum(gaussian_delta(diffs, sigma_tilde), axis=-1)
    return val if x.ndim > 1 else float(val)


def log_trial(x, b: float):
    """log of the Gaussian trial function, up to its additive normalization."""
    x = np.asarray(x, dtype=float)
    val = -b * np.sum(x * x, axis=-1)
    return val if x.ndim > 1 else float(val)


def drift(x, b: float):
    """Drift grad(phi0)/phi0 = -2 b x, componentwise."""
    x = np.asarray(x, dtype=float)
    return (-2.0 * b) * x


def local_u(x, config: ModelConfig):
    """Transformed potential U = V - (1/2) laplacian(phi0)/phi0.

    For the Gaussian trial the correction is sum_i (2 b^2 x_i^2 - b).  The
    trap and the quadratic part of the correction are combined from the
    same sum of squares so that they cancel bitwise when b = 1/2 (the
    exactly solvable trapped case).
    """
    x = np.asarray(x, dtype=float)
    b = config.trial_b
    sumsq = np.sum(x * x, axis=-1)
    quad = (0.5 * sumsq if config.trap_enabled else 0.0) - (2.0 * b * b) * sumsq
    val = quad + v_int(x, config.g_sampled, config.sigma_tilde) + config.n_particles * b
    return val if x.ndim > 1 else float(val)


def v_p(x, config: ModelConfig):
    """Weight-exponent integrand U - e0.

    Trajectory weights are accumulated as exp(-integral of (U - e0) ds), so
    an exact trial function (U identically e0) carries unit weight.
    """
    if config.e0 is None:
        raise ValueError("e0 is unresolved; call resolve_e0 first or set it explicitly")
    val = local_u(x, config) - config.e0
    return val if np.ndim(val) else float(val)


def pilot_e0(config: ModelConfig, rng: np.random.Generator, n_samples: int = PILOT_SAMPLES) -> float:
    """Variational energy of the trial function, by direct sampling.

    Averages U over the stationary density phi0^2 (per-coordinate normal
    with variance 1/(4b)).  Exact whenever U is constant, e.g. any
    noninteracting trapped case with b = 1/2.
    """
    if config.trial_b <= 0:
        raise ValueError("pilot e0 estimate needs trial_b > 0; set e0 explicitly")
    std = np.sqrt(1.0 / (4.0 * config.trial_b))
    samples = rng.normal(0.0, std, size=(n_samples, config.n_particles))
    return float(np.mean(local_u(samples, config)))


def resolve_e0(config: ModelConfig, master_seed: int) -> ModelConfig:
    """Return a config with a concrete e0, running the pilot if needed.

    The pilot stream is derived from the master seed alone, so every
    trajectory of a run (batched or isolated) sees the same e0.
    """
    if config.e0 is not None:
        return config
    key = np.array([master_seed % 2**64, PILOT_STREAM_INDEX], dtype=np.uint64)
    rng = np.random.Generator(np.random.Philox(key=key))
    return config.with_e0(pilot_e0(config, rng))
