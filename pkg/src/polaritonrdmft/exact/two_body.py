#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""Exact two-electron reference solutions.

The spatial two-particle amplitude Psi(z1, z2) is stored as a P x P matrix, P being the number
of points of the single-particle grid. The Hamiltonian acts as

    H Psi = h Psi + Psi h^T + W * Psi

with h the (dressed) one-body matrix and W the (dressed) interaction sampled on all point
pairs. Only the exchange-symmetric (spin singlet) sector is searched."""

from __future__ import annotations

import logging
from collections import namedtuple
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from polaritonrdmft.common.errors import ModelError
from polaritonrdmft.common.types import ParabolaMinimum
from polaritonrdmft.exact.lanczos import LanczosSettings, check_memory, lowest_eigenpairs
from polaritonrdmft.grid import UniformGrid
from polaritonrdmft.model import (
    ModelSpec,
    check_grid_arity,
    dressed_interaction,
    mode_oscillator_matrix,
    nuclear_repulsion,
    one_body_operator,
)

logger = logging.getLogger(__name__)

BondScanPoint = namedtuple(
    "BondScanPoint",
    [
        "separation",  # float: bond length d (bohr)
        "electronic",  # float: E0 of the electrons
        "repulsion",  # float: nuclear repulsion added to the total
        "total",  # float
    ],
)


@dataclass(frozen=True, eq=False)
class TwoBodyState:
    """A normalized, exchange-symmetric two-particle amplitude on `grid` x `grid`."""

    grid: UniformGrid
    values: np.ndarray
    energy: float

    def __post_init__(self):
        P = self.grid.size
        assert self.values.shape == (P, P), f"Expected a {P}x{P} amplitude, got {self.values.shape}"

    def norm(self) -> float:
        return float(self.grid.volume_element * np.linalg.norm(self.values))

    def symmetry_defect(self) -> float:
        return float(np.max(np.abs(self.values - self.values.T)))

    def amplitude(self) -> np.ndarray:
        """Psi with the full (z1, z2) grid shape."""
        return self.values.reshape(self.grid.shape + self.grid.shape)


@dataclass(frozen=True)
class Spectrum:
    energies: np.ndarray
    states: List[TwoBodyState] = field(default_factory=list)

    @property
    def ground(self) -> TwoBodyState:
        return self.states[0]

    @property
    def gap(self) -> float:
        assert len(self.energies) > 1, "The gap needs at least two states"
        return float(self.energies[1] - self.energies[0])


@dataclass(frozen=True)
class BondScan:
    points: List[BondScanPoint]
    minimum: ParabolaMinimum


class TwoBodyHamiltonian:
    """Matrix-free two-electron Hamiltonian on a single-particle grid (1D bare or x-q dressed)."""

    def __init__(self, model: ModelSpec, grid: UniformGrid):
        if model.n_electrons != 2:
            raise ModelError(f"Exact solutions are available for two electrons, got N={model.n_electrons}")
        check_grid_arity(model, grid)
        self.model = model
        self.grid = grid
        self.n_points = grid.size
        self.one_body = one_body_operator(model, grid).matrix()

        x = grid.coordinate(0).ravel()
        qs = [grid.coordinate(1 + a).ravel() for a in range(model.n_modes)]
        self.interaction = dressed_interaction(
            x[:, None], [q[:, None] for q in qs], x[None, :], [q[None, :] for q in qs], model
        )

    @property
    def dim(self) -> int:
        return self.n_points**2

    def apply(self, vector: np.ndarray) -> np.ndarray:
        """H acting on a flattened symmetric amplitude."""
        psi = vector.reshape(self.n_points, self.n_points)
        one_body = self.one_body @ psi
        return (one_body + one_body.T + self.interaction * psi).ravel()

    @staticmethod
    def symmetrize(vector: np.ndarray) -> np.ndarray:
        n = int(round(np.sqrt(vector.size)))
        psi = vector.reshape(n, n)
        return (0.5 * (psi + psi.T)).ravel()

    def expectation(self, values: np.ndarray) -> float:
        """Rayleigh quotient of an arbitrary (not necessarily normalized) symmetric amplitude."""
        vector = np.asarray(values, dtype=float).ravel()
        return float(np.dot(vector, self.apply(vector)) / np.dot(vector, vector))


def _fix_sign(values: np.ndarray) -> np.ndarray:
    pivot = np.unravel_index(np.argmax(np.abs(values)), values.shape)
    return values if values[pivot] >= 0 else -values


def exact_ground_state(
    model: ModelSpec,
    grid: UniformGrid,
    n_states: int = 1,
    settings: LanczosSettings = LanczosSettings(),
) -> Spectrum:
    """Lowest `n_states` exchange-symmetric eigenpairs of the two-electron Hamiltonian.

    `grid` is the single-particle grid: the electronic axis for bare models, x plus one q axis
    per mode for dressed ones. The two-particle product space is built internally.

    Raises:
        ModelError: if the model does not have two electrons.
        ArityMismatch: if the grid does not match the number of modes.
        MemoryBudgetExceeded: if the Lanczos subspace exceeds `settings.max_memory_gib`.
        NoConvergence: if Lanczos does not converge.
    """
    check_memory(grid.size**2, 2, settings.max_memory_gib)
    hamiltonian = TwoBodyHamiltonian(model, grid)
    logger.info(f"Exact solve on {grid.shape} single-particle grid, dimension {hamiltonian.dim}")

    result = lowest_eigenpairs(hamiltonian.apply, hamiltonian.dim, n_states, settings, hamiltonian.symmetrize)
    scale = 1.0 / grid.volume_element
    states = [
        TwoBodyState(grid, _fix_sign(vector.reshape(grid.size, grid.size)) * scale, float(energy))
        for vector, energy in zip(result.vectors, result.energies)
    ]
    return Spectrum(np.asarray(result.energies), states)


def resonance_frequency(model: ModelSpec, grid: UniformGrid, settings: LanczosSettings = LanczosSettings()) -> float:
    """Lowest symmetric excitation energy E1 - E0 of the bare system."""
    spectrum = exact_ground_state(model, grid, n_states=2, settings=settings)
    return spectrum.gap


def parabola_minimum(x: Sequence[float], y: Sequence[float]) -> ParabolaMinimum:
    """Vertex of the parabola through the three lowest points of (x, y).

    Falls back to the lowest sample with fewer than three points or without curvature."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    lowest = int(np.argmin(y))
    if len(x) < 3:
        return ParabolaMinimum(float(x[lowest]), float(y[lowest]))

    picked = np.sort(np.argsort(y)[:3])
    a, b, c = np.polyfit(x[picked], y[picked], 2)
    if a <= 0:
        return ParabolaMinimum(float(x[lowest]), float(y[lowest]))
    vertex = -b / (2.0 * a)
    return ParabolaMinimum(float(vertex), float(c - b**2 / (4.0 * a)))


def bond_scan(
    model: ModelSpec,
    grid: UniformGrid,
    separations: Sequence[float],
    settings: LanczosSettings = LanczosSettings(),
    include_repulsion: bool = True,
) -> BondScan:
    """Ground-state energy along the bond length d of a two-centre model."""
    points = []
    for d in separations:
        scanned = model.with_separation(float(d))
        electronic = exact_ground_state(scanned, grid, 1, settings).energies[0]
        repulsion = nuclear_repulsion(scanned.potential) if include_repulsion else 0.0
        points.append(BondScanPoint(float(d), float(electronic), repulsion, float(electronic + repulsion)))
        logger.info(f"d = {d:.4f}: E0 = {electronic + repulsion:.10f}")

    minimum = parabola_minimum([p.separation for p in points], [p.total for p in points])
    return BondScan(points, minimum)


def photon_mode_energy(state: TwoBodyState, model: ModelSpec, mode_index: Optional[int] = None) -> float:
    """Sum over both particles of <-d^2/dq^2 / 2 + omega^2 q^2 / 2>; all modes if `mode_index` is None."""
    check_grid_arity(model, state.grid)
    indices = range(model.n_modes) if mode_index is None else [mode_index]
    dV = state.grid.volume_element
    total = 0.0
    for index in indices:
        oscillator = mode_oscillator_matrix(model, state.grid, index)
        total += 2.0 * dV**2 * float(np.sum(state.values * (oscillator @ state.values)))
    return total
