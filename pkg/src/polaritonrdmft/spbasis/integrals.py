#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""One- and two-body integrals of the dressed Hamiltonian in an orbital basis.

Two-body tensors use physicist ordering, W[i, j, k, l] = <ij|w|kl>
= int int phi_i(z) phi_j(z') w(z, z') phi_k(z) phi_l(z') dz dz'.

The soft-Coulomb part depends on x only, so it is assembled from the q-integrated pair
densities rho_ik(x). The dipole part of the dressed kernel is separable and is rebuilt from the
x and q moment matrices whenever it is needed."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Tuple, Union

import numpy as np

from polaritonrdmft.common.errors import BasisMismatch
from polaritonrdmft.file.container import read_container, write_container
from polaritonrdmft.model import (
    ModelSpec,
    check_grid_arity,
    interaction_matrix,
    mode_oscillator_matrix,
    one_body_operator,
)
from polaritonrdmft.spbasis.ip_solver import OrbitalSet

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class IntegralTable:
    """Matrix elements in an orthonormal basis of size M.

    Attributes:
        kinetic (np.ndarray): (M, M) <i| -Laplacian / 2 |j>.
        external (np.ndarray): (M, M) <i| v'(z) |j>, the dressed local potential.
        X (np.ndarray): (M, M) <i| x |j>.
        Q (np.ndarray): (n_modes, M, M) <i| q_a |j>.
        oscillator (np.ndarray): (n_modes, M, M) <i| -d^2/dq_a^2 / 2 + omega_a^2 q_a^2 / 2 |j>.
        coulomb (np.ndarray): (M, M, M, M) soft-Coulomb <ij|w|kl>.
        omegas, lambdas (Tuple[float, ...]): mode parameters used for the dipole kernel.
        n_electrons (int): N, entering the bilinear prefactor omega / sqrt(N).
        basis_hash (str): fingerprint of the basis the table was built on.
    """

    kinetic: np.ndarray
    external: np.ndarray
    X: np.ndarray
    Q: np.ndarray
    oscillator: np.ndarray
    coulomb: np.ndarray
    omegas: Tuple[float, ...] = ()
    lambdas: Tuple[float, ...] = ()
    n_electrons: int = 2
    basis_hash: str = ""
    model_hash: str = ""
    _dressed: List = field(default_factory=list, repr=False)

    @property
    def size(self) -> int:
        return self.kinetic.shape[0]

    @property
    def h(self) -> np.ndarray:
        return self.kinetic + self.external

    @property
    def n_modes(self) -> int:
        return len(self.omegas)

    def dipole_kernel(self) -> np.ndarray:
        """sum_a [ -(omega_a / sqrt(N)) lam_a (Q_ik X_jl + X_ik Q_jl) + lam_a^2 X_ik X_jl ]."""
        M = self.size
        result = np.zeros((M, M, M, M))
        for a, (omega, lam) in enumerate(zip(self.omegas, self.lambdas)):
            if lam == 0.0:
                continue
            prefactor = omega / np.sqrt(self.n_electrons) * lam
            Q = self.Q[a]
            result -= prefactor * (np.einsum("ik,jl->ijkl", Q, self.X) + np.einsum("ik,jl->ijkl", self.X, Q))
            result += lam**2 * np.einsum("ik,jl->ijkl", self.X, self.X)
        return result

    def dressed_two_body(self) -> np.ndarray:
        """W'[i, j, k, l] = C[i, j, k, l] + dipole kernel, cached after the first call."""
        if not self._dressed:
            self._dressed.append(self.coulomb + self.dipole_kernel())
        return self._dressed[0]

    def pair_matrix(self) -> np.ndarray:
        """C as an M^2 x M^2 matrix over pair densities, rows (i, k) and columns (j, l)."""
        M = self.size
        return self.coulomb.transpose(0, 2, 1, 3).reshape(M * M, M * M)

    def check_basis(self, basis_hash: str) -> None:
        if self.basis_hash and basis_hash and basis_hash != self.basis_hash:
            raise BasisMismatch("The integral table was built on a different basis")

    def save(self, path: Union[str, Path]) -> None:
        arrays = {
            "kinetic": self.kinetic,
            "external": self.external,
            "X": self.X,
            "Q": self.Q,
            "oscillator": self.oscillator,
            "coulomb": self.coulomb,
        }
        metadata = {
            "omegas": list(self.omegas),
            "lambdas": list(self.lambdas),
            "n_electrons": self.n_electrons,
            "basis_hash": self.basis_hash,
            "model_hash": self.model_hash,
            "size": self.size,
        }
        write_container(path, "integral_table", arrays, metadata)

    @classmethod
    def load(cls, path: Union[str, Path]) -> IntegralTable:
        header, arrays = read_container(path)
        metadata = header["metadata"]
        return cls(
            arrays["kinetic"],
            arrays["external"],
            arrays["X"],
            arrays["Q"],
            arrays["oscillator"],
            arrays["coulomb"],
            tuple(metadata["omegas"]),
            tuple(metadata["lambdas"]),
            int(metadata["n_electrons"]),
            metadata["basis_hash"],
            metadata["model_hash"],
        )

    def to_dict(self) -> Dict:
        return {"size": self.size, "n_modes": self.n_modes, "basis_hash": self.basis_hash}


def _projected(orbitals: np.ndarray, matrix, dV: float) -> np.ndarray:
    result = dV * orbitals @ (matrix @ orbitals.T)
    return 0.5 * (result + result.T)


def pair_densities(basis: OrbitalSet) -> np.ndarray:
    """rho_ik(x) = int phi_i(x, q) phi_k(x, q) dq, shape (M, M, n_x)."""
    grid = basis.grid
    M = basis.size
    orbitals = basis.orbitals.reshape(M, grid.shape[0], -1)
    photon_weight = float(np.prod(grid.spacings[1:])) if grid.ndim > 1 else 1.0
    return photon_weight * np.einsum("ixq,kxq->ikx", orbitals, orbitals)


def coulomb_integrals(basis: OrbitalSet, model: ModelSpec) -> np.ndarray:
    """C[i, j, k, l] = h_x^2 sum_{x, x'} rho_ik(x) w(x, x') rho_jl(x')."""
    grid = basis.grid
    M = basis.size
    hx = grid.axes[0].spacing
    densities = pair_densities(basis).reshape(M * M, grid.shape[0])
    kernel = interaction_matrix(grid.points(0), model)
    pairs = hx**2 * densities @ kernel @ densities.T
    return pairs.reshape(M, M, M, M).transpose(0, 2, 1, 3).copy()


def build_integrals(basis: OrbitalSet, model: ModelSpec) -> IntegralTable:
    grid = basis.grid
    check_grid_arity(model, grid)
    dV = grid.volume_element
    orbitals = basis.orbitals
    operator = one_body_operator(model, grid)

    kinetic = _projected(orbitals, operator.kinetic_matrix(), dV)
    external = _projected(orbitals, operator.potential_matrix(), dV)
    X = dV * (orbitals * grid.coordinate(0).ravel()[None, :]) @ orbitals.T
    Q = np.array(
        [dV * (orbitals * grid.coordinate(1 + a).ravel()[None, :]) @ orbitals.T for a in range(model.n_modes)]
    ).reshape(model.n_modes, basis.size, basis.size)
    oscillator = np.array(
        [_projected(orbitals, mode_oscillator_matrix(model, grid, a), dV) for a in range(model.n_modes)]
    ).reshape(model.n_modes, basis.size, basis.size)

    coulomb = coulomb_integrals(basis, model)
    logger.info(f"Built integrals for a basis of {basis.size} orbitals on grid {grid.shape}")
    return IntegralTable(
        kinetic,
        external,
        0.5 * (X + X.T),
        0.5 * (Q + Q.transpose(0, 2, 1)),
        oscillator,
        coulomb,
        tuple(mode.omega for mode in model.modes),
        tuple(mode.lam for mode in model.modes),
        model.n_electrons,
        basis.fingerprint(),
        model.fingerprint(),
    )
