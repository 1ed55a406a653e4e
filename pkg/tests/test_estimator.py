import numpy as np
import pytest

from gfkmc.estimator import (
    DegenerateWeights,
    gfk_expectation,
    ground_energy,
    jackknife_error,
    replica_average,
)
from gfkmc.model import ModelConfig
from gfkmc.observables import mean_x_sq, pair_distance_sq
from gfkmc.sampler import SamplerConfig, Trajectory, TrajectorySet, generate_trajectories


def make_set(actions, positions, times=None, e0=0.0):
    """Hand-built trajectory container for estimator unit tests."""
    actions = np.asarray(actions, dtype=float)
    positions = np.asarray(positions, dtype=float)
    m, s = actions.shape
    if times is None:
        times = np.linspace(1.0, float(s), s)
    return TrajectorySet(np.arange(m), np.asarray(times, dtype=float),
                         positions, actions, actions[:, -1].copy(), 100, e0)


def exact_benchmark(npi=4000, seed=21):
    model = ModelConfig(n_particles=2, g_tilde=0.0, sigma_tilde=0.015, trial_b=0.5)
    cfg = SamplerConfig(scale=8, t_total=8.0, master_seed=seed)
    return generate_trajectories(model, cfg, npi)


def test_replica_average_basic():
    assert replica_average([1.0, 1.0, 1.0]) == 1.0
    assert replica_average([2.0, 0.0]) == 1.0


def test_replica_average_lognormal():
    rng = np.random.default_rng(3)
    v = 0.25
    w = np.exp(rng.normal(0.0, np.sqrt(v), size=10_000))
    se = w.std() / 100.0
    assert abs(replica_average(w) - np.exp(v / 2)) <= 3 * se


def test_jackknife_two_point():
    # equal weights, values {0, 2}: leave-one-out estimates are {2, 0}
    assert jackknife_error([0.0, 2.0], [1.0, 1.0]) == pytest.approx(1.0, rel=1e-12)


def test_jackknife_identical_trajectories():
    assert jackknife_error([3.0] * 8, [1.5] * 8) == 0.0


def test_jackknife_permutation_invariant():
    rng = np.random.default_rng(4)
    nums = rng.random(20)
    dens = rng.random(20) + 0.5
    base = jackknife_error(nums, dens)
    perm = rng.permutation(20)
    assert jackknife_error(nums[perm], dens[perm]) == pytest.approx(base, rel=1e-12)


def test_normalization_exact():
    rng = np.random.default_rng(5)
    ts = make_set(rng.normal(size=(6, 4)), rng.normal(size=(6, 4, 2)))
    res = gfk_expectation(ts, lambda x: np.ones(x.shape[:-1]), (1.0, 4.0))
    assert res.mean == 1.0
    assert res.std_error == 0.0


def test_scale_covariance():
    rng = np.random.default_rng(6)
    actions = rng.normal(size=(12, 3)) * 0.3
    positions = rng.normal(size=(12, 3, 2))
    base = gfk_expectation(make_set(actions, positions), pair_distance_sq, (1.0, 3.0))
    # multiplying every weight by a constant = shifting all actions
    shifted = gfk_expectation(make_set(actions + 7.3, positions), pair_distance_sq, (1.0, 3.0))
    assert shifted.mean == pytest.approx(base.mean, rel=1e-10)
    assert shifted.std_error == pytest.approx(base.std_error, rel=1e-10)


def test_e0_shift_invariance_at_fixed_time():
    # shifting e0 multiplies weights by a factor common to all trajectories
    # at equal times; at a single recorded time the ratio is unchanged
    rng = np.random.default_rng(7)
    actions = rng.normal(size=(12, 4)) * 0.3
    positions = rng.normal(size=(12, 4, 2))
    times = np.linspace(1.0, 4.0, 4)
    delta = 0.37
    ts_a = make_set(actions, positions, times)
    ts_b = make_set(actions - delta * times[None, :], positions, times)
    end = (times[-1], times[-1])
    a = gfk_expectation(ts_a, pair_distance_sq, end)
    b = gfk_expectation(ts_b, pair_distance_sq, end)
    assert b.mean == pytest.approx(a.mean, rel=1e-10)


def test_e0_shift_cancels_in_ground_energy():
    rng = np.random.default_rng(8)
    actions = np.cumsum(rng.normal(0.1, 0.05, size=(6, 5)), axis=1)
    positions = rng.normal(size=(6, 5, 1))
    times = np.linspace(1.0, 5.0, 5)
    delta = 0.9
    e_a = ground_energy(make_set(actions, positions, times, e0=0.2), (1.0, 5.0))
    shifted = actions - delta * times[None, :]   # e0 -> e0 + delta
    e_b = ground_energy(make_set(shifted, positions, times, e0=0.2 + delta), (1.0, 5.0))
    assert e_b.mean == pytest.approx(e_a.mean, rel=1e-10)
    assert e_b.std_error == pytest.approx(e_a.std_error, rel=1e-10)


def test_exact_trial_expectation():
    ts = exact_benchmark(npi=4000)
    res = gfk_expectation(ts, mean_x_sq, (4.0, 8.0))
    assert res.effective_sample_size == 4000
    assert res.weight_dispersion <= 1e-28
    assert res.mean == pytest.approx(0.5, abs=3 * res.std_error + 0.01)


def test_noninteracting_pair_distance():
    ts = exact_benchmark(npi=4000, seed=22)
    res = gfk_expectation(ts, pair_distance_sq, (4.0, 8.0))
    assert res.mean == pytest.approx(1.0, abs=3 * res.std_error + 0.02)


def test_ground_energy_exact_cases():
    ts = exact_benchmark(npi=50, seed=23)
    res = ground_energy(ts, (4.0, 8.0))
    assert res.mean == 1.0
    assert res.std_error == 0.0

    model = ModelConfig(n_particles=3, g_tilde=0.0, sigma_tilde=0.015, trial_b=0.5)
    cfg = SamplerConfig(scale=6, t_total=4.0, master_seed=24)
    ts3 = generate_trajectories(model, cfg, 20)
    res3 = ground_energy(ts3, (2.0, 4.0))
    assert res3.mean == 1.5


def test_degenerate_weights_raises():
    actions = np.zeros((10, 3))
    actions[0] -= 60.0   # one trajectory dominates absolutely
    positions = np.zeros((10, 3, 2))
    ts = make_set(actions, positions)
    with pytest.raises(DegenerateWeights):
        gfk_expectation(ts, pair_distance_sq, (1.0, 3.0))
    with pytest.raises(DegenerateWeights):
        ground_energy(ts, (1.0, 3.0))


def test_window_validation():
    rng = np.random.default_rng(9)
    ts = make_set(rng.normal(size=(3, 4)), rng.normal(size=(3, 4, 2)))
    with pytest.raises(ValueError):
        gfk_expectation(ts, pair_distance_sq, (10.0, 12.0))
    with pytest.raises(ValueError):
        ground_energy(ts, (2.0, 2.0))   # only one recorded time in window
    single = make_set(rng.normal(size=(1, 4)), rng.normal(size=(1, 4, 2)))
    with pytest.raises(ValueError):
        gfk_expectation(single, pair_distance_sq, (1.0, 4.0))


def test_trajectory_list_input():
    ts = exact_benchmark(npi=12, seed=25)
    as_list = list(ts)
    assert all(isinstance(t, Trajectory) for t in as_list)
    a = gfk_expectation(ts, pair_distance_sq, (4.0, 8.0))
    b = gfk_expectation(as_list, pair_distance_sq, (4.0, 8.0))
    assert a.mean == b.mean
    assert a.std_error == b.std_error


def test_ground_energy_recovers_decay_rate():
    # synthetic weights with a known decay rate and tiny noise
    rng = np.random.default_rng(10)
    times = np.linspace(2.0, 6.0, 9)
    rate = 0.8
    actions = rate * times[None, :] + rng.normal(0, 0.01, size=(200, 9))
    positions = rng.normal(size=(200, 9, 1))
    res = ground_energy(make_set(actions, positions, times, e0=0.3), (2.0, 6.0))
    # E0 = e0 + rate
    assert res.mean == pytest.approx(1.1, abs=3 * res.std_error + 1e-3)
    assert res.std_error < 0.01
