#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""Total energy of a 1RDM and its derivatives with respect to occupations and orbitals.

In the natural-orbital basis

    E = sum_i n_i h_ii + 1/2 sum_ij n_i n_j J_ij - 1/2 sum_ij g(n_i) g(n_j) K_ij

with J_ij = <ij|ij> and K_ij = <ij|ji> of the dressed kernel. The same energy is evaluated in
the basis through the Coulomb and exchange matrices J[D] and K[D_g] of the density matrices
D = C diag(n) C^T and D_g = C diag(g) C^T."""

from __future__ import annotations

from collections import namedtuple
from typing import Tuple

import numpy as np

from polaritonrdmft.common.errors import BasisMismatch
from polaritonrdmft.solver.functionals import AbstractFunctional
from polaritonrdmft.solver.rdm import EnergyReport, OneRDM
from polaritonrdmft.spbasis import IntegralTable

NaturalOrbitalIntegrals = namedtuple(
    "NaturalOrbitalIntegrals",
    [
        "h",  # np.ndarray (M,): diagonal one-body elements
        "J",  # np.ndarray (M, M): <ij|ij>
        "K",  # np.ndarray (M, M): <ij|ji>
    ],
)

OccupationGradient = namedtuple(
    "OccupationGradient",
    [
        "dE_dn",  # np.ndarray (M,)
        "dE_dalpha",  # np.ndarray (M,), with n = 2 sin^2(alpha)
    ],
)


def check_compatible(rdm: OneRDM, integrals: IntegralTable) -> None:
    if integrals.size != rdm.size:
        raise BasisMismatch(f"1RDM has {rdm.size} basis functions, the integrals {integrals.size}")
    integrals.check_basis(rdm.basis.fingerprint())


def coulomb_matrix(two_body: np.ndarray, density: np.ndarray) -> np.ndarray:
    """J[D]_pr = sum_qs <pq|rs> D_qs"""
    return np.tensordot(two_body, density, axes=([1, 3], [0, 1]))


def exchange_matrix(two_body: np.ndarray, density: np.ndarray) -> np.ndarray:
    """K[D]_ps = sum_qr <pq|rs> D_qr"""
    return np.tensordot(two_body, density, axes=([1, 2], [0, 1]))


def transform_two_body(two_body: np.ndarray, coefficients: np.ndarray) -> np.ndarray:
    """<ij|kl> in the orbitals given by the columns of `coefficients`."""
    C = coefficients
    result = np.tensordot(two_body, C, axes=([0], [0]))  # q r s i
    result = np.tensordot(result, C, axes=([0], [0]))  # r s i j
    result = np.tensordot(result, C, axes=([0], [0]))  # s i j k
    result = np.tensordot(result, C, axes=([0], [0]))  # i j k l
    return result


def natural_orbital_integrals(rdm: OneRDM, integrals: IntegralTable) -> NaturalOrbitalIntegrals:
    check_compatible(rdm, integrals)
    C = rdm.coefficients
    transformed = transform_two_body(integrals.dressed_two_body(), C)
    h = np.einsum("pi,pq,qi->i", C, integrals.h, C)
    J = np.einsum("ijij->ij", transformed)
    K = np.einsum("ijji->ij", transformed)
    return NaturalOrbitalIntegrals(h, 0.5 * (J + J.T), 0.5 * (K + K.T))


def occupation_energy(occupations: np.ndarray, no_integrals: NaturalOrbitalIntegrals, functional: AbstractFunctional) -> float:
    n = occupations
    g = functional.factor(n)
    return float(n @ no_integrals.h + 0.5 * n @ no_integrals.J @ n - 0.5 * g @ no_integrals.K @ g)


def occupation_energy_gradient(
    occupations: np.ndarray,
    no_integrals: NaturalOrbitalIntegrals,
    functional: AbstractFunctional,
    n_floor: float,
) -> np.ndarray:
    """dE/dn_i = h_ii + sum_j n_j J_ij - g'(n_i) sum_j g(n_j) K_ij"""
    n = occupations
    g = functional.factor(n)
    dg = functional.factor_derivative(n, n_floor)
    return no_integrals.h + no_integrals.J @ n - dg * (no_integrals.K @ g)


def occupations_from_angles(angles: np.ndarray) -> np.ndarray:
    return 2.0 * np.sin(angles) ** 2


def angles_from_occupations(occupations: np.ndarray) -> np.ndarray:
    return np.arcsin(np.sqrt(np.clip(occupations / 2.0, 0.0, 1.0)))


def occupation_gradient(
    rdm: OneRDM,
    integrals: IntegralTable,
    functional: AbstractFunctional,
    n_floor: float = 1e-10,
) -> OccupationGradient:
    no_integrals = natural_orbital_integrals(rdm, integrals)
    dE_dn = occupation_energy_gradient(rdm.occupations, no_integrals, functional, n_floor)
    angles = angles_from_occupations(rdm.occupations)
    return OccupationGradient(dE_dn, dE_dn * 2.0 * np.sin(2.0 * angles))


def _density_matrices(rdm: OneRDM, functional: AbstractFunctional) -> Tuple[np.ndarray, np.ndarray]:
    return rdm.density_matrix(), rdm.density_matrix(functional.factor(rdm.occupations))


def energy_terms(rdm: OneRDM, integrals: IntegralTable, functional: AbstractFunctional) -> Tuple[float, float, float, float]:
    """(kinetic, external, hartree, xc)"""
    two_body = integrals.dressed_two_body()
    D, D_g = _density_matrices(rdm, functional)
    kinetic = float(np.sum(D * integrals.kinetic))
    external = float(np.sum(D * integrals.external))
    hartree = 0.5 * float(np.sum(D * coulomb_matrix(two_body, D)))
    xc = -0.5 * float(np.sum(D_g * exchange_matrix(two_body, D_g)))
    return kinetic, external, hartree, xc


def total_energy(rdm: OneRDM, integrals: IntegralTable, functional: AbstractFunctional) -> float:
    return float(sum(energy_terms(rdm, integrals, functional)))


def photon_energy(rdm: OneRDM, integrals: IntegralTable) -> float:
    """sum over modes of sum_i n_i <phi_i| -d^2/dq^2 / 2 + omega^2 q^2 / 2 |phi_i>"""
    D = rdm.density_matrix()
    return float(sum(np.sum(D * oscillator) for oscillator in integrals.oscillator))


def energy(rdm: OneRDM, integrals: IntegralTable, functional: AbstractFunctional) -> EnergyReport:
    """Energy decomposition of `rdm`.

    Raises:
        BasisMismatch: if `integrals` were built on another basis.
    """
    check_compatible(rdm, integrals)
    kinetic, external, hartree, xc = energy_terms(rdm, integrals, functional)
    e_photon = photon_energy(rdm, integrals)
    n_photon = sum(
        float(np.sum(rdm.density_matrix() * oscillator)) / omega - 0.5 * integrals.n_electrons
        for oscillator, omega in zip(integrals.oscillator, integrals.omegas)
    )
    return EnergyReport(kinetic, external, hartree, xc, e_photon, n_photon, functional.name)


def lagrangian(rdm: OneRDM, integrals: IntegralTable, functional: AbstractFunctional) -> np.ndarray:
    """Lambda = C^T [(h + J[D]) C diag(n) - K[D_g] C diag(g)], symmetric at stationarity."""
    two_body = integrals.dressed_two_body()
    D, D_g = _density_matrices(rdm, functional)
    C = rdm.coefficients
    n = rdm.occupations
    g = functional.factor(n)
    gradient = (integrals.h + coulomb_matrix(two_body, D)) @ C * n[None, :]
    gradient -= exchange_matrix(two_body, D_g) @ C * g[None, :]
    return C.T @ gradient


def orbital_energies(rdm: OneRDM, integrals: IntegralTable) -> np.ndarray:
    """Diagonal of C^T (h + J[D] - K[D] / 2) C, used to precondition orbital rotations."""
    two_body = integrals.dressed_two_body()
    D = rdm.density_matrix()
    fock = integrals.h + coulomb_matrix(two_body, D) - 0.5 * exchange_matrix(two_body, D)
    return np.einsum("pi,pq,qi->i", rdm.coefficients, fock, rdm.coefficients)
