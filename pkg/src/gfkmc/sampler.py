"""Drifted random-walk trajectories with reproducible per-trajectory streams.

Each unit of imaginary time is split into n = scale^2 steps.  Per step and
per coordinate the walker moves by the trial-function drift times 1/n plus
an independent increment of variance 1/n (binomial +-1/sqrt(n) or
Gaussian).  The running action accumulates (U - e0)/n at the post-move
position, so exp(-action) is the trajectory weight.

Randomness contract (stable across versions): trajectory i of a run with
master seed s consumes the stream of numpy's Philox generator keyed by
(s mod 2^64, i), drawing first the initial positions (trial_density mode
only), then the step increments in step-major, coordinate-minor order.
Batched execution reproduces isolated trajectories bit for bit.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numba
import numpy as np

from .model import ModelConfig, resolve_e0, v_p

INCREMENT_KINDS = ("binomial", "gaussian")
INIT_MODES = ("origin", "trial_density")

# Soft cap on the increment buffer (floats) drawn per trajectory chunk, and
# the minimum steps per chunk worth amortizing a generator call over.
_CHUNK_BUDGET = 16_000_000
_MIN_CHUNK = 250


class NonFiniteWalker(RuntimeError):
    """A walker coordinate or action left the finite floats."""


@dataclass(frozen=True)
class SamplerConfig:
    """Numerical parameters of the walk.

    ``scale`` fixes the step density n = scale^2 per unit imaginary time.
    ``sample_stride`` (steps between recorded samples) defaults to
    ceil(n/10); ``measure_start`` (start of the recording window) defaults
    to t_total/2.  The last step is always recorded.
    """

    scale: int
    t_total: float
    increment_kind: str = "binomial"
    init_mode: str = "origin"
    master_seed: int = 1
    sample_stride: int | None = None
    measure_start: float | None = None

    def __post_init__(self):
        if self.scale < 1:
            raise ValueError(f"scale must be >= 1, got {self.scale}")
        if self.t_total <= 0:
            raise ValueError(f"t_total must be > 0, got {self.t_total}")
        if self.increment_kind not in INCREMENT_KINDS:
            raise ValueError(f"increment_kind must be one of {INCREMENT_KINDS}")
        if self.init_mode not in INIT_MODES:
            raise ValueError(f"init_mode must be one of {INIT_MODES}")
        if self.sample_stride is not None and self.sample_stride < 1:
            raise ValueError("sample_stride must be >= 1")
        if self.measure_start is not None and not (0.0 <= self.measure_start < self.t_total):
            raise ValueError("measure_start must lie in [0, t_total)")

    @property
    def n(self) -> int:
        """Steps per unit imaginary time."""
        return self.scale * self.scale

    @property
    def n_steps(self) -> int:
        return int(round(self.n * self.t_total))

    @property
    def stride(self) -> int:
        return self.sample_stride if self.sample_stride is not None else math.ceil(self.n / 10)

    @property
    def measure_start_time(self) -> float:
        return self.measure_start if self.measure_start is not None else 0.5 * self.t_total

    def sample_steps(self) -> np.ndarray:
        """Ascending step indices at which samples are recorded.

        Anchored at the final step and spaced by ``stride`` going backwards,
        truncated at the start of the measurement window.
        """
        first = math.ceil(self.measure_start_time * self.n - 1e-9)
        first = max(first, 1)
        steps = np.arange(self.n_steps, first - 1, -self.stride)[::-1]
        if steps.size == 0:
            raise ValueError("measurement window contains no steps")
        return steps.copy()


@dataclass
class WalkerState:
    """One walker: positions, running action integral, step counter."""

    positions: np.ndarray
    action: float = 0.0
    step_index: int = 0


@dataclass
class Trajectory:
    """Recorded samples of one walker history.

    ``actions[k]`` is the running integral of (U - e0) at ``times[k]``;
    exp(-actions) are the sample weights and ``final_weight`` is the weight
    at t_total.
    """

    index: int
    times: np.ndarray
    positions: np.ndarray
    actions: np.ndarray
    final_action: float
    n_steps: int
    e0: float

    @property
    def final_weight(self) -> float:
        return float(np.exp(-self.final_action))

    @property
    def weights(self) -> np.ndarray:
        return np.exp(-self.actions)


class TrajectorySet:
    """Struct-of-arrays container for many trajectories of one run."""

    def __init__(self, indices, times, positions, actions, final_actions, n_steps, e0):
        self.indices = np.asarray(indices)
        self.times = np.asarray(times)
        self.positions = positions          # (M, S, N)
        self.actions = actions              # (M, S)
        self.final_actions = final_actions  # (M,)
        self.n_steps = n_steps
        self.e0 = e0

    def __len__(self) -> int:
        return len(self.indices)

    def trajectory(self, k: int) -> Trajectory:
        return Trajectory(
            index=int(self.indices[k]),
            times=self.times,
            positions=self.positions[k],
            actions=self.actions[k],
            final_action=float(self.final_actions[k]),
            n_steps=self.n_steps,
            e0=self.e0,
        )

    def __iter__(self):
        return (self.trajectory(k) for k in range(len(self)))


def trajectory_stream(master_seed: int, trajectory_index: int) -> np.random.Generator:
    """Independent, reproducible stream for one trajectory."""
    key = np.array([master_seed % 2**64, trajectory_index % 2**64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def increment(stream: np.random.Generator, n: int, kind: str, size=None):
    """Random-walk increment(s) with variance 1/n.

    Binomial: +-1/sqrt(n) equiprobably.  Gaussian: normal with the same
    variance (the diffusion both converge to).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    root = np.sqrt(float(n))
    if kind == "binomial":
        eps = 2.0 * stream.integers(0, 2, size=size) - 1.0
        out = eps / root
    elif kind == "gaussian":
        out = stream.standard_normal(size=size) * (1.0 / root)
    else:
        raise ValueError(f"unknown increment kind {kind!r}")
    return out if size is not None else float(out)


def init_walker(model: ModelConfig, sampler: SamplerConfig, stream: np.random.Generator) -> WalkerState:
    """Fresh walker: all particles at the origin, or drawn from phi0^2."""
    n = model.n_particles
    if sampler.init_mode == "origin":
        positions = np.zeros(n)
    else:
        if model.trial_b <= 0:
            raise ValueError("trial_density initialization needs trial_b > 0")
        std = np.sqrt(1.0 / (4.0 * model.trial_b))
        positions = stream.normal(0.0, std, size=n)
    return WalkerState(positions=positions, action=0.0, step_index=0)


def _advance(positions, b: float, inv_n: float, inc):
    """One move: the drift contracts positions by (1 - 2b/n), then add the
    increment.  Shared by the scalar and batched paths."""
    premul = 1.0 + (-2.0 * b) * inv_n
    return positions * premul + inc


def step(state: WalkerState, model: ModelConfig, sampler: SamplerConfig,
         stream: np.random.Generator) -> WalkerState:
    """Advance one walker by one step and accumulate the action."""
    inv_n = 1.0 / sampler.n
    inc = increment(stream, sampler.n, sampler.increment_kind, size=state.positions.shape)
    new_pos = _advance(state.positions, model.trial_b, inv_n, inc)
    if not np.all(np.isfinite(new_pos)):
        raise NonFiniteWalker(
            f"non-finite coordinate at step {state.step_index + 1}; "
            "reduce the step size (increase scale) for this sigma_tilde"
        )
    new_action = state.action + v_p(new_pos, model) * inv_n
    if not np.isfinite(new_action):
        raise NonFiniteWalker(f"non-finite action at step {state.step_index + 1}")
    return WalkerState(positions=new_pos, action=new_action, step_index=state.step_index + 1)


@numba.njit(cache=True, nogil=True)
def _chunk_kernel(positions, buf, action, terms, trap_enabled, b, inv_n,
                  g_eff, sigma_tilde, e0):  # pragma: no cover - compiled
    """Advance every walker through one chunk of steps.

    ``buf`` holds the increments on entry and the post-move positions on
    exit; ``terms`` receives the running action after each step.  Returns
    the first row whose positions or action left the finite floats, or -1.
    """
    n_walkers, k_steps, n_part = buf.shape
    premul = 1.0 + (-2.0 * b) * inv_n
    norm = 1.0 / (np.sqrt(2.0 * np.pi) * sigma_tilde)
    expc = -1.0 / (2.0 * sigma_tilde * sigma_tilde)
    two_b_sq = 2.0 * b * b
    nb = n_part * b
    bad = -1
    for m in range(n_walkers):
        a = action[m]
        ok = True
        for j in range(k_steps):
            sumsq = 0.0
            for i in range(n_part):
                x = positions[m, i] * premul + buf[m, j, i]
                positions[m, i] = x
                buf[m, j, i] = x
                sumsq += x * x
            vint = 0.0
            if g_eff != 0.0:
                for i in range(n_part - 1):
                    xi = positions[m, i]
                    for l in range(i + 1, n_part):
                        d = xi - positions[m, l]
                        vint += np.exp(expc * d * d)
                vint *= -g_eff * norm
            quad = 0.5 * sumsq if trap_enabled else 0.0
            u = quad - two_b_sq * sumsq + vint + nb
            a += (u - e0) * inv_n
            terms[m, j] = a
            if not np.isfinite(a):
                ok = False
                break
        action[m] = a
        if not ok or not np.isfinite(sumsq):
            bad = m
            break
    return bad


def _run_batch(model: ModelConfig, sampler: SamplerConfig, indices,
               out_positions, out_actions, out_final, progress=None):
    """Simulate a batch of trajectories, writing samples into the out arrays.

    ``model.e0`` must already be resolved.  Increments are drawn from each
    trajectory's own stream in step order; drawing them in time chunks is
    bit-identical to per-step draws (numpy fills arrays sequentially from
    the bit stream).
    """
    n = sampler.n
    n_steps = sampler.n_steps
    n_part = model.n_particles
    kind = sampler.increment_kind
    sched = sampler.sample_steps()

    batch = len(indices)
    streams = [trajectory_stream(sampler.master_seed, int(i)) for i in indices]
    positions = np.empty((batch, n_part))
    for k, rng in enumerate(streams):
        positions[k] = init_walker(model, sampler, rng).positions
    action = np.zeros(batch)

    chunk = max(1, min(n_steps, _CHUNK_BUDGET // max(1, batch * n_part)))
    buf = np.empty((batch, chunk, n_part))
    terms = np.empty((batch, chunk))

    step_index = 0
    si = 0
    while step_index < n_steps:
        k_steps = min(chunk, n_steps - step_index)
        for k, rng in enumerate(streams):
            buf[k, :k_steps] = increment(rng, n, kind, size=(k_steps, n_part))
        bad = _chunk_kernel(positions, buf[:, :k_steps, :], action, terms[:, :k_steps],
                            model.trap_enabled, model.trial_b, 1.0 / n,
                            model.g_sampled, model.sigma_tilde,
                            model.e0)
        if bad >= 0:
            raise NonFiniteWalker(
                f"non-finite walker (batch row {bad}) within steps "
                f"{step_index + 1}..{step_index + k_steps}; reduce the step "
                "size (increase scale) for this sigma_tilde"
            )
        while si < len(sched) and sched[si] <= step_index + k_steps:
            j = sched[si] - step_index - 1
            out_positions[:, si, :] = buf[:, j, :]
            out_actions[:, si] = terms[:, j]
            si += 1
        step_index += k_steps
        if progress is not None:
            progress(step_index, n_steps)
    out_final[:] = action


def generate_trajectories(model: ModelConfig, sampler: SamplerConfig, n_trajectories: int,
                          threads: int = 1, progress=None) -> TrajectorySet:
    """Run trajectories 0..n_trajectories-1, optionally across threads.

    Results are bit-identical for any thread count or batch split: every
    trajectory owns its stream, and samples land in index-ordered slices.
    """
    if n_trajectories < 1:
        raise ValueError("n_trajectories must be >= 1")
    model = resolve_e0(model, sampler.master_seed)
    sched = sampler.sample_steps()
    times = sched / float(sampler.n)
    n_samples = len(sched)
    n_part = model.n_particles

    positions = np.empty((n_trajectories, n_samples, n_part))
    actions = np.empty((n_trajectories, n_samples))
    finals = np.empty(n_trajectories)

    if threads < 1:
        threads = 1
    # Batches sized so each still gets usefully long increment chunks.
    max_rows = max(1, _CHUNK_BUDGET // max(1, n_part * _MIN_CHUNK))
    n_batches = max(threads, math.ceil(n_trajectories / max_rows))
    bounds = np.linspace(0, n_trajectories, n_batches + 1).astype(int)
    jobs = [(lo, hi) for lo, hi in zip(bounds[:-1], bounds[1:]) if hi > lo]

    def work(lo, hi):
        _run_batch(model, sampler, range(lo, hi),
                   positions[lo:hi], actions[lo:hi], finals[lo:hi],
                   progress if lo == jobs[0][0] else None)

    if threads == 1 or len(jobs) == 1:
        for lo, hi in jobs:
            work(lo, hi)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [pool.submit(work, lo, hi) for lo, hi in jobs]
            for f in futures:
                f.result()

    return TrajectorySet(np.arange(n_trajectories), times, positions, actions,
                         finals, sampler.n_steps, model.e0)


def generate_trajectory(model: ModelConfig, sampler: SamplerConfig, trajectory_index: int) -> Trajectory:
    """Run a single trajectory, reproducible in isolation."""
    model = resolve_e0(model, sampler.master_seed)
    sched = sampler.sample_steps()
    n_samples = len(sched)
    positions = np.empty((1, n_samples, model.n_particles))
    actions = np.empty((1, n_samples))
    finals = np.empty(1)
    _run_batch(model, sampler, [trajectory_index], positions, actions, finals)
    return TrajectorySet(np.array([trajectory_index]), sched / float(sampler.n),
                         positions, actions, finals, sampler.n_steps, model.e0).trajectory(0)
