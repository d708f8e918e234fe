#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""Closed-shell Hartree-Fock of the bare electrons directly on the real-space grid.

The Fock matrix acting on grid vectors is

    F = T + diag(v + v_H) - 1/2 h_x gamma(x, x') w(x, x')

with v_H(x) = h_x sum_x' w(x, x') rho(x') and gamma(x, x') = 2 sum_occ phi_i(x) phi_i(x').
Densities are mixed linearly between iterations."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from polaritonrdmft.common.errors import ModelError, NoConvergence
from polaritonrdmft.grid import Field, UniformGrid
from polaritonrdmft.model import ModelSpec, check_grid_arity, interaction_matrix, one_body_operator
from polaritonrdmft.solver.rdm import EnergyReport, SCFSettings

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class GridHFResult:
    grid: UniformGrid
    orbitals: np.ndarray
    eigenvalues: np.ndarray
    report: EnergyReport

    @property
    def occupations(self) -> np.ndarray:
        return np.full(len(self.orbitals), 2.0)

    def natural_orbitals(self) -> np.ndarray:
        return self.orbitals

    @property
    def density(self) -> Field:
        return Field(self.grid, 2.0 * np.sum(self.orbitals**2, axis=0))


def _energy_terms(kinetic_matrix, potential, kernel, orbitals, hx):
    gamma = 2.0 * orbitals.T @ orbitals
    rho = np.diag(gamma)
    kinetic = 2.0 * hx * float(np.sum(orbitals * (kinetic_matrix @ orbitals.T).T))
    external = hx * float(rho @ potential)
    hartree = 0.5 * hx**2 * float(rho @ kernel @ rho)
    exchange = -0.25 * hx**2 * float(np.sum(gamma**2 * kernel))
    return kinetic, external, hartree, exchange


def grid_hartree_fock(model: ModelSpec, grid: UniformGrid, settings: SCFSettings = SCFSettings()) -> GridHFResult:
    """Raises:
    ModelError: for dressed models.
    NoConvergence: if the SCF does not converge in `settings.max_outer` iterations.
    """
    if model.is_dressed:
        raise ModelError("Grid Hartree-Fock treats the bare electrons only")
    check_grid_arity(model, grid)
    hx = grid.axes[0].spacing
    n_occupied = model.n_occupied

    operator = one_body_operator(model, grid)
    kinetic_matrix = operator.kinetic_matrix().toarray()
    potential = operator.potential.ravel()
    kernel = interaction_matrix(grid.points(0), model)
    core = kinetic_matrix + np.diag(potential)

    def occupied(fock: np.ndarray):
        values, vectors = np.linalg.eigh(fock)
        return values[:n_occupied], vectors[:, :n_occupied].T / np.sqrt(hx)

    eigenvalues, orbitals = occupied(core)
    gamma = 2.0 * orbitals.T @ orbitals
    previous_energy = np.inf

    for iteration in range(settings.max_outer):
        rho = np.diag(gamma)
        hartree_potential = hx * kernel @ rho
        fock = core + np.diag(hartree_potential) - 0.5 * hx * gamma * kernel
        eigenvalues, orbitals = occupied(fock)

        terms = _energy_terms(kinetic_matrix, potential, kernel, orbitals, hx)
        current = sum(terms)
        new_gamma = 2.0 * orbitals.T @ orbitals
        density_change = hx * float(np.sum(np.abs(np.diag(new_gamma) - rho)))
        change = current - previous_energy
        logger.debug(f"Grid HF {iteration}: E = {current:.12f}, dE = {change:.3e}, drho = {density_change:.3e}")

        if abs(change) < settings.eps_E and density_change < settings.eps_rho:
            report = EnergyReport(*terms, functional="grid_hf", iterations=iteration + 1, converged=True)
            logger.info(f"Grid HF converged after {iteration + 1} iterations, E = {report.total:.10f}")
            return GridHFResult(grid, orbitals, eigenvalues, report)

        gamma = (1.0 - settings.mixing) * gamma + settings.mixing * new_gamma
        previous_energy = current

    report = EnergyReport(*terms, functional="grid_hf", iterations=settings.max_outer, converged=False)
    raise NoConvergence(
        f"Grid HF did not converge in {settings.max_outer} iterations",
        partial=GridHFResult(grid, orbitals, eigenvalues, report),
    )
