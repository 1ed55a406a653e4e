"""Observable functionals evaluated on walker configurations."""

from __future__ import annotations

import numpy as np

from .model import _pair_indices

PAIR_MODES = ("first_pair", "all_pairs")


class TooFewParticles(ValueError):
    """Pair observables need at least two particles."""


def pair_distance_sq(x, mode: str = "all_pairs"):
    """Squared pair distance: (x1-x2)^2, or its average over all pairs.

    Both modes have the same expectation for bosonic (exchange-symmetric)
    states; all_pairs has lower variance.
    """
    x = np.asarray(x, dtype=float)
    n = x.shape[-1]
    if n < 2:
        raise TooFewParticles(f"pair_distance_sq needs N >= 2, got N = {n}")
    if mode == "first_pair":
        d = x[..., 0] - x[..., 1]
        val = d * d
    elif mode == "all_pairs":
        iu, ju = _pair_indices(n)
        d = x[..., iu] - x[..., ju]
        val = np.mean(d * d, axis=-1)
    else:
        raise ValueError(f"mode must be one of {PAIR_MODES}")
    return val if x.ndim > 1 else float(val)


def mean_x_sq(x):
    """Mean squared coordinate (1/N) sum_i x_i^2 (trap equilibration gauge)."""
    x = np.asarray(x, dtype=float)
    val = np.mean(x * x, axis=-1)
    return val if x.ndim > 1 else float(val)


def pair_distances(x) -> np.ndarray:
    """All |x_i - x_j| for i<j, flattened over any batch axes."""
    x = np.asarray(x, dtype=float)
    n = x.shape[-1]
    if n < 2:
        raise TooFewParticles(f"pair_distances needs N >= 2, got N = {n}")
    iu, ju = _pair_indices(n)
    return np.abs(x[..., iu] - x[..., ju]).ravel()


def pair_histogram(distances, bin_width: float, r_max: float, weights=None):
    """Weighted histogram of pair distances with unit total mass.

    Returns (bin_centers, mass).  Samples beyond r_max are clipped into
    the last bin so the mass always sums to 1.
    """
    if bin_width <= 0:
        raise ValueError("bin_width must be > 0")
    if r_max <= 0:
        raise ValueError("r_max must be > 0")
    distances = np.asarray(distances, dtype=float).ravel()
    if distances.size == 0:
        raise ValueError("no distance samples given")
    edges = np.arange(0.0, r_max + bin_width, bin_width)
    if edges[-1] < r_max:
        edges = np.append(edges, r_max)
    clipped = np.minimum(distances, edges[-1] * (1 - 1e-12))
    if weights is None:
        counts, _ = np.histogram(clipped, bins=edges)
        mass = counts / counts.sum()
    else:
        weights = np.asarray(weights, dtype=float).ravel()
        counts, _ = np.histogram(clipped, bins=edges, weights=weights)
        mass = counts / weights.sum()
    centers = 0.5 * (edges[:-1] + edges[1:])
    return centers, mass
