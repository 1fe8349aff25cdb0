"""Physical constants and unit conversions.

Working units throughout the package: lengths in nm, energies in meV,
electric fields in V/m (converted internally to meV/(e*nm)).
"""

from __future__ import annotations

from dataclasses import dataclass

# Conversion table. Every unit change in the package goes through one of
# these factors; no module defines its own.
MEV_PER_EV = 1.0e3
V_PER_M_TO_MEV_PER_NM = 1.0e-6  # e * 1 V/m acting over 1 nm, in meV
J_PER_EV = 1.602176634e-19
KG_PER_U = 1.66053906660e-27
NM_PER_M = 1.0e9
NM2_PER_S_PER_MM2_PER_S = 1.0e12  # mm^2/s -> nm^2/s
G_EARTH_M_PER_S2 = 9.81

# CODATA values used only to cross-check the meV*nm constants below.
HBAR_SI = 1.054571817e-34  # J*s
M_E_SI = 9.1093837015e-31  # kg
E_CHARGE_SI = 1.602176634e-19  # C
EPS0_SI = 8.8541878128e-12  # F/m


@dataclass(frozen=True)
class PhysicalConstants:
    """Immutable record of the constants entering the electron-on-neon model.

    hbar2_over_2me:  hbar^2 / (2 m_e) in meV*nm^2
    image_prefactor: e^2 / (8 pi eps0) in meV*nm
    barrier_height:  repulsive step modeling Pauli exclusion by the neon
                     shell electrons, in meV
    cutoff_zc:       distance above the neon surface below which the
                     barrier applies, in nm
    """

    hbar2_over_2me: float = 38.0998
    image_prefactor: float = 719.982
    barrier_height: float = 0.7 * MEV_PER_EV
    cutoff_zc: float = 0.23
    eps_neon_default: float = 1.244
    eps_si_default: float = 12.0


DEFAULT_CONSTANTS = PhysicalConstants()
