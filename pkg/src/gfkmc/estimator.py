"""Expectation values and error bars from weighted trajectory samples.

The central estimator is the weighted ratio

    <A> = sum_m sum_s Z_m(s) A(Y_m(s)) / sum_m sum_s Z_m(s)

over trajectories m and recorded sample times s in a window, with
Z_m(s) = exp(-action_m(s)).  Errors are leave-one-trajectory-out
jackknife; within-trajectory samples are block-averaged into a single
(numerator, denominator) pair per trajectory, which sidesteps
autocorrelation estimation.  Passing a zero-length window pinned at the
final time gives the endpoint-only ratio.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .sampler import Trajectory, TrajectorySet

ESS_THRESHOLD = 5.0


class DegenerateWeights(RuntimeError):
    """Trajectory weights collapsed onto too few replicas to trust."""


@dataclass(frozen=True)
class EstimatorResult:
    mean: float
    std_error: float
    n_trajectories: int
    effective_sample_size: float
    window: tuple[float, float]
    weight_dispersion: float


def _as_arrays(trajectories):
    """Normalize input to (times, positions (M,S,N), actions (M,S), e0)."""
    if isinstance(trajectories, TrajectorySet):
        return trajectories.times, trajectories.positions, trajectories.actions, trajectories.e0
    trajs = list(trajectories)
    if not trajs:
        raise ValueError("no trajectories given")
    times = trajs[0].times
    for t in trajs[1:]:
        if not np.array_equal(t.times, times):
            raise ValueError("trajectories have mismatched sample times")
    positions = np.stack([t.positions for t in trajs])
    actions = np.stack([t.actions for t in trajs])
    return times, positions, actions, trajs[0].e0


def _window_mask(times: np.ndarray, window) -> np.ndarray:
    lo, hi = window
    if lo > hi:
        raise ValueError(f"empty window {window}")
    eps = 1e-12 * max(1.0, abs(hi))
    mask = (times >= lo - eps) & (times <= hi + eps)
    if not mask.any():
        raise ValueError(f"window {window} contains no recorded samples")
    return mask


def replica_average(weights) -> float:
    """Plain mean of independent replica weights."""
    weights = np.asarray(weights, dtype=float)
    if weights.size == 0:
        raise ValueError("no weights given")
    return float(np.mean(weights))


def jackknife_error(nums, dens) -> float:
    """Leave-one-out jackknife standard error of sum(nums)/sum(dens)."""
    nums = np.asarray(nums, dtype=float)
    dens = np.asarray(dens, dtype=float)
    m = nums.size
    if m < 2:
        raise ValueError("jackknife needs at least 2 trajectories")
    tot_n = nums.sum()
    tot_d = dens.sum()
    loo = (tot_n - nums) / (tot_d - dens)
    return float(np.sqrt((m - 1) / m * np.sum((loo - loo.mean()) ** 2)))


def _ess(weights: np.ndarray) -> float:
    s = weights.sum()
    s2 = np.sum(weights * weights)
    return float(s * s / s2) if s2 > 0 else 0.0


def gfk_expectation(trajectories, observable, window) -> EstimatorResult:
    """Weighted expectation of an observable over a time window.

    ``observable`` maps a batch of configurations with shape (..., N) to
    values of shape (...).  Weights carry a common shift in the exponent
    for overflow safety; the ratio is unchanged by it.
    """
    times, positions, actions, _ = _as_arrays(trajectories)
    m = positions.shape[0]
    if m < 2:
        raise ValueError("need at least 2 trajectories")
    mask = _window_mask(times, window)

    act = actions[:, mask]
    shift = act.min()
    weights = np.exp(-(act - shift))          # (M, S_w)
    values = np.asarray(observable(positions[:, mask, :]), dtype=float)

    nums = np.sum(weights * values, axis=1)   # per-trajectory block sums
    dens = np.sum(weights, axis=1)

    ess = _ess(dens)
    if ess < ESS_THRESHOLD:
        raise DegenerateWeights(
            f"effective sample size {ess:.2f} < {ESS_THRESHOLD}; weights collapsed"
        )
    mean = nums.sum() / dens.sum()
    err = jackknife_error(nums, dens)
    log_w = np.log(dens)
    return EstimatorResult(
        mean=float(mean),
        std_error=err,
        n_trajectories=m,
        effective_sample_size=ess,
        window=(float(window[0]), float(window[1])),
        weight_dispersion=float(np.var(log_w)),
    )


def _log_mean_weight(actions: np.ndarray) -> np.ndarray:
    """log of the replica-averaged weight per recorded time, overflow-safe."""
    shift = actions.min(axis=0)
    return -shift + np.log(np.mean(np.exp(-(actions - shift)), axis=0))


def ground_energy(trajectories, fit_window) -> EstimatorResult:
    """Ground-state energy from the decay rate of the averaged weight.

    The replica average Z(t) behaves as exp(-(E0 - e0) t) at large t, so
    E0 = e0 + slope of -log Z(t), fitted by least squares over the window.
    Shifting e0 moves the slope by the opposite amount; the estimate is
    invariant.
    """
    times, _, actions, e0 = _as_arrays(trajectories)
    m = actions.shape[0]
    if m < 2:
        raise ValueError("need at least 2 trajectories")
    mask = _window_mask(times, fit_window)
    t = times[mask]
    if np.unique(t).size < 2:
        raise ValueError("fit window must span at least 2 recorded times")
    act = actions[:, mask]

    end_weights = np.exp(-(act[:, -1] - act[:, -1].min()))
    ess = _ess(end_weights)
    if ess < ESS_THRESHOLD:
        raise DegenerateWeights(
            f"effective sample size {ess:.2f} < {ESS_THRESHOLD} at window end"
        )

    tc = t - t.mean()
    denom = np.sum(tc * tc)

    def slope_of(neg_log_zbar):
        return np.dot(tc, neg_log_zbar) / denom

    full = slope_of(-_log_mean_weight(act))

    # Leave-one-out slopes, using per-time shifted sums for stability.
    shift = act.min(axis=0)
    w = np.exp(-(act - shift))                 # (M, S_w)
    tot = w.sum(axis=0)
    loo_log = -shift + np.log((tot - w) / (m - 1))   # (M, S_w) log Zbar without row
    loo_slopes = (-loo_log) @ tc / denom
    err = float(np.sqrt((m - 1) / m * np.sum((loo_slopes - loo_slopes.mean()) ** 2)))

    return EstimatorResult(
        mean=float(e0 + full),
        std_error=err,
        n_trajectories=m,
        effective_sample_size=ess,
        window=(float(fit_window[0]), float(fit_window[1])),
        weight_dispersion=float(np.var(np.log(end_weights))),
    )
