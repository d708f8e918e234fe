#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""Orbital optimization at fixed occupations by preconditioned unitary descent.

The coefficients are rotated as C <- C exp(t kappa) with the antisymmetric generator
kappa_ij = -(Lambda_ij - Lambda_ji) / P_ij, P_ij a level-shifted diagonal Hessian estimate.
Backtracking on t keeps the energy non-increasing; the loop exits once Lambda is symmetric to
eps_Lambda and the energy change is below eps_E."""

from __future__ import annotations

import logging
from collections import namedtuple

import numpy as np
from scipy.linalg import expm

from polaritonrdmft.common.errors import NoConvergence
from polaritonrdmft.solver.energy import lagrangian, orbital_energies, total_energy
from polaritonrdmft.solver.functionals import AbstractFunctional
from polaritonrdmft.solver.rdm import OneRDM, SCFSettings
from polaritonrdmft.spbasis import IntegralTable

logger = logging.getLogger(__name__)

MAX_ROTATION = 0.5
ARMIJO = 1e-4
MIN_STEP = 1e-10

OrbitalResult = namedtuple(
    "OrbitalResult",
    [
        "rdm",  # OneRDM
        "energy",  # float
        "iterations",  # int
        "defect",  # float: max |Lambda - Lambda^T|
        "converged",  # bool
    ],
)


def hermiticity_defect(matrix: np.ndarray) -> float:
    return float(np.max(np.abs(matrix - matrix.T)))


def _generator(rdm: OneRDM, integrals: IntegralTable, antisymmetric: np.ndarray, floor: float) -> np.ndarray:
    n = rdm.occupations
    eps = orbital_energies(rdm, integrals)
    hessian = np.abs((n[:, None] - n[None, :]) * (eps[None, :] - eps[:, None]))
    kappa = -antisymmetric / np.maximum(hessian, floor)
    largest = np.max(np.abs(kappa))
    if largest > MAX_ROTATION:
        kappa *= MAX_ROTATION / largest
    return kappa


def orbital_minimize(
    rdm: OneRDM,
    integrals: IntegralTable,
    functional: AbstractFunctional,
    settings: SCFSettings = SCFSettings(),
    raise_on_failure: bool = True,
) -> OrbitalResult:
    """Minimize the energy over orthogonal coefficient matrices at fixed occupations.

    Raises:
        NoConvergence: if the criteria are not met within `settings.max_orbital` iterations
            (only if `raise_on_failure`); the exception carries the last OrbitalResult.
    """
    current = total_energy(rdm, integrals, functional)
    change = np.inf
    defect = np.inf

    for iteration in range(settings.max_orbital):
        Lambda = lagrangian(rdm, integrals, functional)
        antisymmetric = Lambda - Lambda.T
        defect = hermiticity_defect(Lambda)
        if defect < settings.eps_Lambda and (iteration == 0 or abs(change) < settings.eps_E):
            logger.debug(f"Orbitals converged after {iteration} iterations, defect {defect:.3e}")
            return OrbitalResult(rdm, current, iteration, defect, True)

        kappa = _generator(rdm, integrals, antisymmetric, settings.preconditioner_floor)
        slope = 2.0 * float(np.sum(Lambda * kappa))

        step = 1.0
        accepted = False
        while step > MIN_STEP:
            trial = rdm.with_coefficients(rdm.coefficients @ expm(step * kappa))
            trial_energy = total_energy(trial, integrals, functional)
            if trial_energy <= current + ARMIJO * step * slope:
                accepted = True
                break
            step *= 0.5

        if not accepted:
            # no descent left at machine precision
            converged = defect < settings.eps_Lambda
            logger.debug(f"Orbital line search stalled at defect {defect:.3e}")
            result = OrbitalResult(rdm, current, iteration, defect, converged)
            if converged or not raise_on_failure:
                return result
            raise NoConvergence(f"Orbital optimization stalled with defect {defect:.3e}", partial=result)

        change = trial_energy - current
        rdm, current = trial, trial_energy
        logger.debug(f"Orbital iteration {iteration}: E = {current:.12f}, dE = {change:.3e}, defect = {defect:.3e}")

    result = OrbitalResult(rdm, current, settings.max_orbital, defect, False)
    if raise_on_failure:
        raise NoConvergence(
            f"Orbital optimization did not converge in {settings.max_orbital} iterations (defect {defect:.3e})",
            partial=result,
        )
    return result
