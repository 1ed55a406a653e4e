"""Conversions between the dimensionless system (hbar = m = omega = 1)
and SI parameters of a quasi-1D Li-7 experiment.

Angular frequencies are rad/s internally; ordinary frequencies (Hz) are
converted with 2 pi at the boundaries.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

HBAR = 1.054571817e-34          # J s
ATOMIC_MASS_UNIT = 1.66053906660e-27  # kg
BOHR_RADIUS = 5.29177210903e-11       # m


@dataclass(frozen=True)
class PhysicalParams:
    """Experimental inputs: mass in u, scattering length in Bohr radii
    (signed; attractive is negative), radial trap frequency in Hz.
    The axial angular frequency (rad/s) is optional and usually derived."""

    atomic_mass: float
    scattering_length: float
    radial_trap_freq: float
    axial_trap_omega: float | None = None

    def __post_init__(self):
        if self.atomic_mass <= 0:
            raise ValueError("atomic_mass must be > 0")
        if self.radial_trap_freq <= 0:
            raise ValueError("radial_trap_freq must be > 0")

    @property
    def mass_kg(self) -> float:
        return self.atomic_mass * ATOMIC_MASS_UNIT

    @property
    def scattering_length_m(self) -> float:
        return self.scattering_length * BOHR_RADIUS

    @property
    def radial_omega(self) -> float:
        return 2.0 * np.pi * self.radial_trap_freq


def lithium7_defaults() -> PhysicalParams:
    """Li-7 numbers: m = 7.016 u, a_sc = -16.2 a0, radial trap 297 Hz."""
    return PhysicalParams(atomic_mass=7.016, scattering_length=-16.2,
                          radial_trap_freq=297.0)


def coupling_si(params: PhysicalParams) -> float:
    """1D coupling constant g = 2 hbar omega_r |a_sc|, in J m."""
    return 2.0 * HBAR * params.radial_omega * abs(params.scattering_length_m)


def axial_omega(g: float, mass_kg: float, g_tilde: float) -> float:
    """Axial trap angular frequency omega = g^2 m / (g~^2 hbar^3), rad/s."""
    if g <= 0 or mass_kg <= 0 or g_tilde <= 0:
        raise ValueError("g, mass and g_tilde must be > 0")
    return g * g * mass_kg / (g_tilde * g_tilde * HBAR**3)


def g_tilde_for_omega(g: float, mass_kg: float, omega: float) -> float:
    """Dimensionless coupling realized at a given axial omega (rad/s)."""
    if g <= 0 or mass_kg <= 0 or omega <= 0:
        raise ValueError("g, mass and omega must be > 0")
    return g * np.sqrt(mass_kg / (omega * HBAR**3))


def quarter_period_seconds(omega: float) -> float:
    """Quarter of the axial trap period, (2 pi / omega) / 4."""
    if omega <= 0:
        raise ValueError("omega must be > 0")
    return (2.0 * np.pi / omega) / 4.0


def radial_length(params: PhysicalParams) -> float:
    """Radial oscillator length sqrt(hbar / (m omega_r)), in m."""
    return float(np.sqrt(HBAR / (params.mass_kg * params.radial_omega)))


def collapse_threshold(a_r: float, a_sc: float) -> float:
    """Collapse atom-number threshold N_c = 0.67 a_r / |a_sc| (lengths in m)."""
    if a_sc == 0:
        raise ZeroDivisionError("a_sc must be nonzero")
    return 0.67 * a_r / abs(a_sc)
