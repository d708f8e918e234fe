from .functionals import AbstractFunctional, HartreeFockFunctional, MuellerFunctional
from .rdm import EnergyReport, OneRDM, SCFSettings
from .energy import (
    NaturalOrbitalIntegrals,
    OccupationGradient,
    coulomb_matrix,
    energy,
    exchange_matrix,
    lagrangian,
    natural_orbital_integrals,
    occupation_gradient,
    total_energy,
)
from .occupations import OccupationResult, occupation_minimize
from .orbitals import OrbitalResult, hermiticity_defect, orbital_minimize
from .scf import SCFResult, perturbed_occupations, project_rdm, solve
from .grid_hf import GridHFResult, grid_hartree_fock

__all__ = [
    "AbstractFunctional",
    "HartreeFockFunctional",
    "MuellerFunctional",
    "EnergyReport",
    "OneRDM",
    "SCFSettings",
    "NaturalOrbitalIntegrals",
    "OccupationGradient",
    "coulomb_matrix",
    "energy",
    "exchange_matrix",
    "lagrangian",
    "natural_orbital_integrals",
    "occupation_gradient",
    "total_energy",
    "OccupationResult",
    "occupation_minimize",
    "OrbitalResult",
    "hermiticity_defect",
    "orbital_minimize",
    "SCFResult",
    "perturbed_occupations",
    "project_rdm",
    "solve",
    "GridHFResult",
    "grid_hartree_fock",
]
