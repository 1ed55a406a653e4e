import numpy as np
import pytest

from gfkmc.regularization import (
    GridNotConverged,
    check_regularization,
    gaussian_well_ground_state,
    well_parameters,
    wkb_bound_count,
)

BENCHMARK_ROWS = ((0.5, 0.016), (0.55, 0.015), (0.61, 0.015),
                  (0.78, 0.012), (0.83, 0.01), (0.85, 0.01))


def test_wkb_algebraic_fixed_point():
    # v0/alpha = pi/4 makes the root term exactly 1
    assert wkb_bound_count(np.pi / 4, 1.0) == pytest.approx(1.5, rel=1e-12)


def test_wkb_benchmark_row_value():
    v0, alpha = well_parameters(0.5, 0.016)
    assert v0 == pytest.approx(12.467, abs=1e-3)
    assert alpha == pytest.approx(3906.25, rel=1e-12)
    # direct evaluation of the count formula
    expected = 2.0 / np.sqrt(np.pi) * np.sqrt(v0 / alpha) + 0.5
    count = wkb_bound_count(v0, alpha)
    assert count == pytest.approx(expected, rel=1e-12)
    assert count == pytest.approx(0.5637, abs=1e-4)
    assert count < 1.5


def test_wkb_deep_well():
    assert wkb_bound_count(10.0, 1.0) == pytest.approx(4.068, abs=1e-3)


def test_wkb_monotonicity():
    assert wkb_bound_count(2.0, 1.0) > wkb_bound_count(1.0, 1.0)
    assert wkb_bound_count(1.0, 2.0) < wkb_bound_count(1.0, 1.0)


def test_wkb_scale_identity():
    # depends on (v0, alpha) only through v0/alpha
    a = wkb_bound_count(3.0, 7.0)
    b = wkb_bound_count(30.0, 70.0)
    assert a == pytest.approx(b, rel=1e-12)


def test_grid_energy_sharp_delta_limit():
    # binding energy approaches -g^2/4 from above as sigma shrinks
    g = 1.0
    devs = []
    for sigma in (0.05, 0.02, 0.01):
        e, _, _ = gaussian_well_ground_state(g, sigma)
        devs.append(abs(e - (-0.25)) / 0.25)
    assert devs[0] > devs[1] > devs[2]
    assert devs[2] < 0.02


def test_grid_energy_reference_value():
    e, grid, psi = gaussian_well_ground_state(1.0, 0.05)
    assert e == pytest.approx(-0.23679, abs=2e-4)
    h = grid[1] - grid[0]
    assert np.sum(psi * psi) * h == pytest.approx(1.0, rel=1e-10)
    r2 = np.sum(psi * psi * grid * grid) * h
    assert r2 == pytest.approx(2.114, abs=5e-3)


@pytest.mark.parametrize("g,sigma", BENCHMARK_ROWS)
def test_benchmark_rows_ok(g, sigma):
    report = check_regularization(g, sigma)
    assert report.ok
    assert report.count < 1.5
    assert report.bound_energy_estimate < 0
    assert abs(report.bound_energy_estimate) < report.v0


def test_too_wide_well_fails_count_clause():
    # once g*sigma ~ 2 the WKB count crosses the two-state threshold and
    # the well no longer stands in for a contact interaction
    report = check_regularization(50.0, 0.05)
    assert report.count > 1.5
    assert not report.ok


def test_grid_not_converged_raises(monkeypatch):
    from gfkmc import regularization

    original = regularization.gaussian_well_ground_state

    def too_coarse(g_eff, sigma_tilde, extent=None, n_points=None):
        return original(g_eff, sigma_tilde, extent=2.0,
                        n_points=(9 if n_points is None else n_points))

    monkeypatch.setattr(regularization, "gaussian_well_ground_state", too_coarse)
    with pytest.raises(GridNotConverged):
        check_regularization(1.0, 0.05)


def test_input_validation():
    with pytest.raises(ValueError):
        wkb_bound_count(0.0, 1.0)
    with pytest.raises(ValueError):
        well_parameters(1.0, 0.0)
