#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""Reduced quantities of exact two-electron states."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.sparse.linalg as spla

from polaritonrdmft.common.types import DensityBundle
from polaritonrdmft.exact.two_body import TwoBodyState
from polaritonrdmft.grid import Field, UniformGrid, marginal

logger = logging.getLogger(__name__)

DENSE_LIMIT = 4000
DEFAULT_ORBITALS = 50


@dataclass(frozen=True, eq=False)
class ExactOneRDM:
    """Spectral form of the spin-summed 1RDM of an exact state.

    Attributes:
        grid (UniformGrid): single-particle grid.
        occupations (np.ndarray): descending occupation numbers.
        orbitals (np.ndarray): (n_orbitals, grid.size) grid-normalized natural orbitals.
        electron_count (float): 2 dV^2 |Psi|^2, the full trace whether or not the listed
            orbitals are truncated.
    """

    grid: UniformGrid
    occupations: np.ndarray
    orbitals: np.ndarray
    electron_count: float

    def natural_orbitals(self) -> np.ndarray:
        return self.orbitals

    @property
    def trace(self) -> float:
        return self.electron_count

    @property
    def listed_trace(self) -> float:
        """Occupation summed over the listed orbitals only."""
        return float(np.sum(self.occupations))


def _sign_fixed(vectors: np.ndarray) -> np.ndarray:
    """Rows with their largest-magnitude component made positive."""
    pivots = np.argmax(np.abs(vectors), axis=1)
    signs = np.sign(vectors[np.arange(len(vectors)), pivots])
    signs[signs == 0] = 1.0
    return vectors * signs[:, None]


def dressed_1rdm(state: TwoBodyState, n_orbitals: Optional[int] = None) -> ExactOneRDM:
    """gamma(z, z') = 2 int Psi(z, z2) Psi(z', z2) dz2 in natural-orbital form.

    With the symmetric amplitude Psi = U diag(s) U^T, the natural orbitals are the columns of U
    (rescaled to the grid norm) and the occupations are 2 dV^2 s^2. Beyond `DENSE_LIMIT`
    points only the `n_orbitals` leading pairs are computed; the trace always comes from the
    full amplitude."""
    P = state.grid.size
    dV = state.grid.volume_element

    if P <= DENSE_LIMIT:
        singular, vectors = np.linalg.eigh(state.values)
    else:
        k = min(n_orbitals or DEFAULT_ORBITALS, P - 2)
        singular, vectors = spla.eigsh(state.values, k=k, which="LM")

    order = np.argsort(-(singular**2), kind="stable")
    if n_orbitals is not None:
        order = order[:n_orbitals]
    occupations = 2.0 * dV**2 * singular[order] ** 2
    orbitals = _sign_fixed(vectors[:, order].T) / np.sqrt(dV)
    electron_count = 2.0 * dV**2 * float(np.sum(state.values**2))
    logger.debug(
        f"Exact 1RDM: leading occupations {occupations[:3]}, trace {electron_count:.10f}, "
        f"{occupations.sum():.10f} in {len(occupations)} listed orbitals"
    )
    return ExactOneRDM(state.grid, occupations, orbitals, electron_count)


def densities(state: TwoBodyState) -> DensityBundle:
    """rho(z) = 2 int |Psi(z, z2)|^2 dz2 and its marginals."""
    grid = state.grid
    rho = 2.0 * grid.volume_element * np.sum(state.values**2, axis=1)
    rho = rho.reshape(grid.shape)

    if grid.ndim == 1:
        return DensityBundle(rho_x=Field(grid, rho))

    x_grid = grid.subgrid([0])
    q_grid = grid.subgrid([1])
    return DensityBundle(
        rho_x=Field(x_grid, marginal(rho, grid, 0)),
        rho_xq=Field(grid, rho),
        rho_q=Field(q_grid, marginal(rho, grid, 1)),
    )
