#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""Self-consistent minimization of dressed HF and dressed RDMFT in the IP basis."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Union

import numpy as np

from polaritonrdmft.common.errors import NoConvergence
from polaritonrdmft.grid import UniformGrid
from polaritonrdmft.model import ModelSpec
from polaritonrdmft.solver.energy import energy
from polaritonrdmft.solver.functionals import AbstractFunctional, HartreeFockFunctional
from polaritonrdmft.solver.occupations import occupation_minimize
from polaritonrdmft.solver.orbitals import orbital_minimize
from polaritonrdmft.solver.rdm import EnergyReport, OneRDM, SCFSettings
from polaritonrdmft.spbasis import IntegralTable, OrbitalSet, build_integrals, ip_solve

logger = logging.getLogger(__name__)

N_PERTURBED = 3


@dataclass(frozen=True, eq=False)
class SCFResult:
    rdm: OneRDM
    report: EnergyReport
    basis: OrbitalSet
    integrals: IntegralTable
    hf_report: Optional[EnergyReport] = None
    history: List[float] = field(default_factory=list)

    @property
    def converged(self) -> bool:
        return self.report.converged


def perturbed_occupations(occupations: np.ndarray, n_occupied: int, amount: float) -> np.ndarray:
    """Move `amount` from the highest occupied orbital evenly onto the next (up to three) orbitals."""
    occupations = np.array(occupations, dtype=float)
    receivers = np.arange(n_occupied, min(n_occupied + N_PERTURBED, len(occupations)))
    if len(receivers) == 0:
        return occupations
    occupations[n_occupied - 1] -= amount
    occupations[receivers] += amount / len(receivers)
    return occupations


def project_rdm(previous: OneRDM, basis: OrbitalSet) -> OneRDM:
    """Carry natural orbitals over to another basis on the same grid.

    The projected coefficients Phi_new^T Phi_old C_old dV are made orthogonal again by the polar
    factor of their SVD."""
    assert previous.grid == basis.grid, "Warm starts need both bases on the same grid"
    overlap = basis.grid.volume_element * basis.orbitals @ previous.basis.orbitals.T
    projected = overlap @ previous.coefficients
    if basis.size != previous.size:
        padded = np.zeros((basis.size, basis.size))
        k = min(basis.size, previous.size)
        order = np.argsort(-previous.occupations, kind="stable")[:k]
        padded[:, :k] = projected[:, order]
        occupations = np.zeros(basis.size)
        occupations[:k] = previous.occupations[order]
        occupations *= previous.n_electrons / occupations.sum()
        projected = padded
    else:
        occupations = previous.occupations.copy()
    U, _, Vt = np.linalg.svd(projected)
    return OneRDM(basis, U @ Vt, occupations)


def _density_change(rdm: OneRDM, previous: Optional[np.ndarray]) -> float:
    if previous is None:
        return np.inf
    return float(rdm.grid.volume_element * np.sum(np.abs(rdm.density() - previous)))


def solve(
    model: ModelSpec,
    grid: UniformGrid,
    size: int,
    functional: Union[str, AbstractFunctional] = "mueller",
    settings: SCFSettings = SCFSettings(),
    basis: Optional[OrbitalSet] = None,
    integrals: Optional[IntegralTable] = None,
    initial: Optional[OneRDM] = None,
) -> SCFResult:
    """Ground state of `model` in an IP basis of `size` orbitals.

    HF runs optimize the orbitals of the Aufbau state. RDMFT runs start from the converged HF
    state with slightly depleted HOMO and alternate occupation and orbital steps until both
    the energy change and the density change are below their thresholds.

    Raises:
        NoConvergence: with the partial SCFResult attached.
        RepresentabilityError: if an accepted iterate is not N-representable.
    """
    if isinstance(functional, str):
        functional = AbstractFunctional.create(functional)
    basis = basis if basis is not None else ip_solve(model, grid, size)
    integrals = integrals if integrals is not None else build_integrals(basis, model)
    hf = HartreeFockFunctional()

    hf_report = None
    if initial is None:
        hf_state = orbital_minimize(OneRDM.aufbau(basis), integrals, hf, settings, raise_on_failure=False)
        hf_report = energy(hf_state.rdm, integrals, hf).flagged(hf_state.iterations, hf_state.converged, hf_state.defect)
        logger.info(f"HF energy {hf_report.total:.10f} after {hf_state.iterations} orbital iterations")
        if functional.pinned:
            if not hf_state.converged:
                raise NoConvergence(
                    "HF orbital optimization did not converge",
                    partial=SCFResult(hf_state.rdm, hf_report, basis, integrals, hf_report),
                )
            return SCFResult(hf_state.rdm, hf_report, basis, integrals, hf_report, [hf_report.total])
        rdm = hf_state.rdm
    else:
        rdm = initial if initial.basis is basis else project_rdm(initial, basis)
        if functional.pinned:
            rdm = OneRDM.aufbau(basis, rdm.coefficients)

    if not functional.pinned and np.all((rdm.occupations == 0.0) | (rdm.occupations == 2.0)):
        rdm = rdm.with_occupations(
            perturbed_occupations(rdm.occupations, basis.n_occupied, settings.occupation_perturbation)
        )
    rdm.check(model.n_electrons)

    history = []
    previous_energy = np.inf
    previous_density = None
    defect = np.inf
    for outer in range(settings.max_outer):
        occupation_step = occupation_minimize(rdm, integrals, functional, settings)
        rdm = occupation_step.rdm
        rdm.check(model.n_electrons)

        orbital_step = orbital_minimize(rdm, integrals, functional, settings, raise_on_failure=False)
        rdm = orbital_step.rdm
        rdm.check(model.n_electrons)
        defect = orbital_step.defect

        current = orbital_step.energy
        change = current - previous_energy
        density_change = _density_change(rdm, previous_density)
        history.append(current)
        logger.info(
            f"SCF {outer}: E = {current:.12f}, dE = {change:.3e}, drho = {density_change:.3e}, "
            f"defect = {defect:.3e}, mu = {occupation_step.mu:.6f}"
        )
        if abs(change) < settings.eps_E and density_change < settings.eps_rho and orbital_step.converged:
            report = energy(rdm, integrals, functional).flagged(outer + 1, True, defect)
            return SCFResult(rdm, report, basis, integrals, hf_report, history)
        previous_energy = current
        previous_density = rdm.density()

    report = energy(rdm, integrals, functional).flagged(settings.max_outer, False, defect)
    raise NoConvergence(
        f"SCF did not converge in {settings.max_outer} outer iterations",
        partial=SCFResult(rdm, report, basis, integrals, hf_report, history),
    )
