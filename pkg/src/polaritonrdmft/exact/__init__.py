from .lanczos import LanczosResult, LanczosSettings, lowest_eigenpairs
from .two_body import (
    BondScan,
    BondScanPoint,
    Spectrum,
    TwoBodyHamiltonian,
    TwoBodyState,
    bond_scan,
    exact_ground_state,
    parabola_minimum,
    photon_mode_energy,
    resonance_frequency,
)
from .rdm import ExactOneRDM, densities, dressed_1rdm

__all__ = [
    "LanczosResult",
    "LanczosSettings",
    "lowest_eigenpairs",
    "BondScan",
    "BondScanPoint",
    "Spectrum",
    "TwoBodyHamiltonian",
    "TwoBodyState",
    "bond_scan",
    "exact_ground_state",
    "parabola_minimum",
    "photon_mode_energy",
    "resonance_frequency",
    "ExactOneRDM",
    "densities",
    "dressed_1rdm",
]
