#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""Occupation optimization at fixed natural orbitals.

Occupations are parametrized as n_i = 2 sin^2(alpha_i). For a chemical potential mu the
function F = E - mu (sum_i n_i - N) is minimized over bounded angles with L-BFGS-B; an outer
bisection on mu then enforces the particle number."""

from __future__ import annotations

import logging
from collections import namedtuple
from typing import Tuple

import numpy as np
from scipy.optimize import minimize

from polaritonrdmft.common.errors import MuBracketFailure
from polaritonrdmft.solver.energy import (
    NaturalOrbitalIntegrals,
    angles_from_occupations,
    natural_orbital_integrals,
    occupation_energy,
    occupation_energy_gradient,
    occupations_from_angles,
)
from polaritonrdmft.solver.functionals import AbstractFunctional
from polaritonrdmft.solver.rdm import OneRDM, SCFSettings
from polaritonrdmft.spbasis import IntegralTable

logger = logging.getLogger(__name__)

MAX_BRACKET_EXPANSIONS = 60
MAX_BISECTIONS = 200
ENERGY_SLACK = 1e-10

OccupationResult = namedtuple(
    "OccupationResult",
    [
        "rdm",  # OneRDM
        "energy",  # float
        "mu",  # float: chemical potential
        "accepted",  # bool: False if the step would have raised the energy
    ],
)


def angle_bounds(n_floor: float) -> Tuple[float, float]:
    """Angles keeping n_i within [n_floor, 2 - n_floor]."""
    lower = float(np.arcsin(np.sqrt(n_floor / 2.0)))
    return lower, 0.5 * np.pi - lower


class _FixedMuProblem:
    def __init__(self, no_integrals: NaturalOrbitalIntegrals, functional: AbstractFunctional, settings: SCFSettings):
        self.no_integrals = no_integrals
        self.functional = functional
        self.settings = settings
        self.bounds = [angle_bounds(settings.n_floor)] * len(no_integrals.h)

    def objective(self, angles: np.ndarray, mu: float) -> Tuple[float, np.ndarray]:
        n = occupations_from_angles(angles)
        energy = occupation_energy(n, self.no_integrals, self.functional)
        dE_dn = occupation_energy_gradient(n, self.no_integrals, self.functional, self.settings.n_floor)
        value = energy - mu * np.sum(n)
        return value, (dE_dn - mu) * 2.0 * np.sin(2.0 * angles)

    def solve(self, angles: np.ndarray, mu: float) -> np.ndarray:
        result = minimize(
            self.objective,
            angles,
            args=(mu,),
            jac=True,
            method="L-BFGS-B",
            bounds=self.bounds,
            options={"maxiter": self.settings.max_occupation, "ftol": 1e-15, "gtol": 1e-12},
        )
        return result.x


def _bracket(problem: _FixedMuProblem, angles: np.ndarray, n_electrons: int, lo: float, hi: float):
    """Expand [lo, hi] until N(lo) <= N <= N(hi)."""
    width = hi - lo
    angles_lo = problem.solve(angles, lo)
    angles_hi = problem.solve(angles, hi)
    for _ in range(MAX_BRACKET_EXPANSIONS):
        count_lo = occupations_from_angles(angles_lo).sum()
        count_hi = occupations_from_angles(angles_hi).sum()
        if count_lo <= n_electrons <= count_hi:
            return lo, hi, angles_lo, angles_hi
        width *= 2.0
        if count_lo > n_electrons:
            lo -= width
            angles_lo = problem.solve(angles_lo, lo)
        if count_hi < n_electrons:
            hi += width
            angles_hi = problem.solve(angles_hi, hi)
    raise MuBracketFailure(f"N(mu) does not straddle N = {n_electrons} on [{lo:.3e}, {hi:.3e}]")


def occupation_minimize(
    rdm: OneRDM,
    integrals: IntegralTable,
    functional: AbstractFunctional,
    settings: SCFSettings = SCFSettings(),
) -> OccupationResult:
    """Minimize the energy over occupations with sum_i n_i = N at fixed orbitals.

    The returned occupations are the convex combination of the two bracketing mu-solutions
    that meets the particle number to round-off. The step is rejected (and the input returned)
    if it would raise the energy.

    Raises:
        MuBracketFailure: if no mu bracket straddling N is found.
    """
    n_electrons = 2 * rdm.basis.n_occupied
    no_integrals = natural_orbital_integrals(rdm, integrals)
    start_energy = occupation_energy(rdm.occupations, no_integrals, functional)

    if functional.pinned or rdm.size == rdm.basis.n_occupied:
        return OccupationResult(rdm, start_energy, 0.0, True)

    problem = _FixedMuProblem(no_integrals, functional, settings)
    angles = angles_from_occupations(rdm.occupations)
    gradient = occupation_energy_gradient(rdm.occupations, no_integrals, functional, settings.n_floor)
    lo, hi, angles_lo, angles_hi = _bracket(problem, angles, n_electrons, gradient.min() - 1.0, gradient.max() + 1.0)

    for _ in range(MAX_BISECTIONS):
        if hi - lo < settings.eps_mu:
            break
        mid = 0.5 * (lo + hi)
        angles_mid = problem.solve(0.5 * (angles_lo + angles_hi), mid)
        if occupations_from_angles(angles_mid).sum() < n_electrons:
            lo, angles_lo = mid, angles_mid
        else:
            hi, angles_hi = mid, angles_mid

    n_lo = occupations_from_angles(angles_lo)
    n_hi = occupations_from_angles(angles_hi)
    count_lo, count_hi = n_lo.sum(), n_hi.sum()
    weight = 0.5 if count_hi == count_lo else (n_electrons - count_lo) / (count_hi - count_lo)
    occupations = (1.0 - weight) * n_lo + weight * n_hi
    occupations *= n_electrons / occupations.sum()
    occupations = np.clip(occupations, 0.0, 2.0)

    new_energy = occupation_energy(occupations, no_integrals, functional)
    mu = 0.5 * (lo + hi)
    logger.debug(f"Occupation step: mu = {mu:.10f}, E = {new_energy:.12f}, leading n = {np.sort(occupations)[::-1][:3]}")
    if new_energy > start_energy + ENERGY_SLACK:
        logger.debug(f"Occupation step rejected, energy would rise by {new_energy - start_energy:.3e}")
        return OccupationResult(rdm, start_energy, mu, False)
    return OccupationResult(rdm.with_occupations(occupations), new_energy, mu, True)
