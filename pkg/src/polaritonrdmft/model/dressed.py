#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""Dressed-space operators.

Each electron carries one auxiliary displacement coordinate q_a per cavity mode; the
electron-photon problem then becomes a fermionic problem in z = (x, q_0, ..., q_{M-1})
with the dressed local potential

    v'(x, q) = v(x) + sum_a [ w_a^2 q_a^2 / 2 - (w_a / sqrt(N)) q_a lam_a x + (lam_a x)^2 / 2 ]

and the dressed interaction

    w'(z, z') = w(x, x') + sum_a [ -(w_a / sqrt(N)) lam_a (q_a x' + q'_a x) + lam_a^2 x x' ].
"""

from __future__ import annotations

import logging
from typing import List, Optional, Sequence, Union

import numpy as np
import scipy.sparse as sp

from polaritonrdmft.common.errors import ArityMismatch
from polaritonrdmft.grid import Field, UniformGrid, apply_laplacian, laplacian_matrix, second_derivative_matrix
from polaritonrdmft.model.potentials import bare_potential, soft_coulomb
from polaritonrdmft.model.system import ModelSpec, PhotonMode

logger = logging.getLogger(__name__)

PhotonCoordinates = Optional[Union[float, np.ndarray, Sequence]]


def _split_modes(q: PhotonCoordinates, model: ModelSpec) -> List:
    """Normalize the photon coordinates to one entry per mode."""
    if q is None:
        coordinates = []
    elif isinstance(q, (list, tuple)):
        coordinates = list(q)
    elif model.n_modes == 1:
        coordinates = [q]
    else:
        raise ArityMismatch(f"A single photon coordinate was given for {model.n_modes} modes")

    if len(coordinates) != model.n_modes:
        raise ArityMismatch(f"Got {len(coordinates)} photon coordinates for {model.n_modes} modes")
    return coordinates


def mode_prefactor(mode: PhotonMode, n_electrons: int) -> float:
    """omega / sqrt(N), the weight of the bilinear q-x coupling."""
    return mode.omega / np.sqrt(n_electrons)


def dressed_potential(x, q: PhotonCoordinates, model: ModelSpec):
    x = np.asarray(x, dtype=float)
    result = bare_potential(x, model.potential)
    for mode, q_a in zip(model.modes, _split_modes(q, model)):
        q_a = np.asarray(q_a, dtype=float)
        lam_x = mode.lam * x
        result = (
            result
            + 0.5 * mode.omega**2 * q_a**2
            - mode_prefactor(mode, model.n_electrons) * q_a * lam_x
            + 0.5 * lam_x**2
        )
    return result


def dressed_interaction(x, q: PhotonCoordinates, x_prime, q_prime: PhotonCoordinates, model: ModelSpec):
    """Dressed two-body kernel w'(z, z'), symmetric under z <-> z'.

    The soft-Coulomb part is dropped when the model has its interaction disabled."""
    x = np.asarray(x, dtype=float)
    x_prime = np.asarray(x_prime, dtype=float)
    if model.interaction_enabled:
        result = soft_coulomb(x, x_prime, model.interaction_softening)
    else:
        result = np.zeros(np.broadcast(x, x_prime).shape)

    qs, qs_prime = _split_modes(q, model), _split_modes(q_prime, model)
    for mode, q_a, q_a_prime in zip(model.modes, qs, qs_prime):
        prefactor = mode_prefactor(mode, model.n_electrons) * mode.lam
        result = (
            result
            - prefactor * (np.asarray(q_a) * x_prime + np.asarray(q_a_prime) * x)
            + mode.lam**2 * x * x_prime
        )
    return result


def interaction_matrix(points: np.ndarray, model: ModelSpec) -> np.ndarray:
    """Dense w(x_i, x_j) on the electronic axis (zero if the interaction is disabled)."""
    if not model.interaction_enabled:
        return np.zeros((len(points), len(points)))
    return soft_coulomb(points[:, None], points[None, :], model.interaction_softening)


def check_grid_arity(model: ModelSpec, grid: UniformGrid) -> None:
    if grid.ndim != 1 + model.n_modes:
        raise ArityMismatch(f"Grid has {grid.ndim} axes, the model needs {1 + model.n_modes}")


class OneBodyOperator:
    """-Laplacian / 2 + v'(z) on a single-particle grid (x plus one q axis per mode).

    Apply it matrix-free with `apply` (or by calling it) or get its sparse matrix with
    `matrix` for the iterative eigensolvers."""

    def __init__(self, model: ModelSpec, grid: UniformGrid):
        check_grid_arity(model, grid)
        grid.check_stencil_support()
        self.model = model
        self.grid = grid
        photon = [grid.coordinate(1 + a) for a in range(model.n_modes)]
        self.potential = np.asarray(dressed_potential(grid.coordinate(0), photon, model))

    def apply(self, f: Field) -> Field:
        if f.grid != self.grid:
            check_grid_arity(self.model, f.grid)
        laplacian = apply_laplacian(f)
        return Field(f.grid, -0.5 * laplacian.values + self.potential * f.values)

    __call__ = apply

    def kinetic_matrix(self) -> sp.csr_matrix:
        return (-0.5 * laplacian_matrix(self.grid)).tocsr()

    def potential_matrix(self) -> sp.csr_matrix:
        return sp.diags(self.potential.ravel(), format="csr")

    def matrix(self) -> sp.csr_matrix:
        return (self.kinetic_matrix() + self.potential_matrix()).tocsr()


def one_body_operator(model: ModelSpec, grid: UniformGrid) -> OneBodyOperator:
    return OneBodyOperator(model, grid)


def mode_oscillator_matrix(model: ModelSpec, grid: UniformGrid, mode_index: int = 0) -> sp.csr_matrix:
    """Sparse -d^2/dq_a^2 / 2 + omega_a^2 q_a^2 / 2 acting on fields of `grid`.

    Its expectation value in the dressed state is the photon energy of mode `mode_index`."""
    check_grid_arity(model, grid)
    axis = 1 + mode_index
    mode = model.modes[mode_index]
    q_axis = grid.axes[axis]
    local = -0.5 * second_derivative_matrix(q_axis.n_points, q_axis.spacing) + sp.diags(
        0.5 * mode.omega**2 * q_axis.points**2
    )

    factors = [local if idx == axis else sp.identity(a.n_points, format="csr") for idx, a in enumerate(grid.axes)]
    result = factors[0]
    for factor in factors[1:]:
        result = sp.kron(result, factor, format="csr")
    return result.tocsr()
