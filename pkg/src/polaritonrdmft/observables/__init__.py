from .densities import DensityDifference, densities_from_rdm, density_difference
from .photons import mode_occupation, occupation_from_energy, photon_mode_energy
from .orbitals import natural_orbital_report

__all__ = [
    "DensityDifference",
    "densities_from_rdm",
    "density_difference",
    "mode_occupation",
    "occupation_from_energy",
    "photon_mode_energy",
    "natural_orbital_report",
]
