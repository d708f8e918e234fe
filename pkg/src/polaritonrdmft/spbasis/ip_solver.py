#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""Independent-particle basis: lowest eigenstates of the dressed one-body operator."""

from __future__ import annotations

import hashlib
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Union

import numpy as np
import scipy.sparse.linalg as spla

from polaritonrdmft.common.errors import ModelError, NoConvergence
from polaritonrdmft.file.container import read_container, write_container
from polaritonrdmft.grid import Field, UniformGrid
from polaritonrdmft.model import ModelSpec, one_body_operator

logger = logging.getLogger(__name__)

DENSE_LIMIT = 1500
RESIDUAL_TOLERANCE = 1e-8
TIE_TOLERANCE = 1e-6
NODE_FLOOR = 1e-6


def count_nodes(values: np.ndarray, grid: UniformGrid, floor: float = NODE_FLOOR) -> int:
    """Sign changes along x of an orbital, taken on the q-row carrying most weight.

    Samples below `floor` times the largest magnitude of the slice are ignored."""
    values = np.asarray(values).reshape(grid.shape)
    if grid.ndim > 1:
        flat = values.reshape(grid.shape[0], -1)
        row = int(np.argmax(np.sum(flat**2, axis=0)))
        values = flat[:, row]
    significant = values[np.abs(values) > floor * np.max(np.abs(values))]
    signs = np.sign(significant)
    return int(np.count_nonzero(signs[1:] != signs[:-1]))


@dataclass(frozen=True, eq=False)
class OrbitalSet:
    """Orthonormal single-particle basis on `grid`.

    Attributes:
        grid (UniformGrid): single-particle grid.
        orbitals (np.ndarray): (M, grid.size) grid-normalized orbitals.
        eigenvalues (np.ndarray): (M,) non-decreasing one-body eigenvalues.
        n_occupied (int): N / 2, the number of doubly occupied orbitals of the Aufbau state.
    """

    grid: UniformGrid
    orbitals: np.ndarray
    eigenvalues: np.ndarray
    n_occupied: int

    @property
    def size(self) -> int:
        return len(self.eigenvalues)

    @property
    def n_excited(self) -> int:
        return self.size - self.n_occupied

    def field(self, index: int) -> Field:
        return Field(self.grid, self.orbitals[index])

    def overlap(self) -> np.ndarray:
        return self.grid.volume_element * self.orbitals @ self.orbitals.T

    def orthonormality_defect(self) -> float:
        return float(np.max(np.abs(self.overlap() - np.eye(self.size))))

    def truncated(self, size: int) -> OrbitalSet:
        assert self.n_occupied <= size <= self.size, f"Cannot truncate {self.size} orbitals to {size}"
        return OrbitalSet(self.grid, self.orbitals[:size], self.eigenvalues[:size], self.n_occupied)

    def fingerprint(self) -> str:
        digest = hashlib.sha256()
        digest.update(np.ascontiguousarray(self.orbitals).tobytes())
        digest.update(repr(self.grid.to_dict()).encode("utf-8"))
        return digest.hexdigest()

    def save(self, path: Union[str, Path], model: ModelSpec) -> None:
        metadata = {
            "grid": self.grid.to_dict(),
            "model": model.to_dict(),
            "model_hash": model.fingerprint(),
            "n_occupied": self.n_occupied,
            "size": self.size,
        }
        write_container(path, "orbital_set", {"orbitals": self.orbitals, "eigenvalues": self.eigenvalues}, metadata)

    @classmethod
    def load(cls, path: Union[str, Path]) -> OrbitalSet:
        header, arrays = read_container(path)
        metadata = header["metadata"]
        grid = UniformGrid.from_dict(metadata["grid"])
        return cls(grid, arrays["orbitals"], arrays["eigenvalues"], int(metadata["n_occupied"]))

    def to_dict(self) -> Dict:
        return {"size": self.size, "n_occupied": self.n_occupied, "eigenvalues": self.eigenvalues.tolist()}


def _sign_fixed(vectors: np.ndarray) -> np.ndarray:
    pivots = np.argmax(np.abs(vectors), axis=1)
    signs = np.sign(vectors[np.arange(len(vectors)), pivots])
    signs[signs == 0] = 1.0
    return vectors * signs[:, None]


def _ordered(eigenvalues: np.ndarray, vectors: np.ndarray, grid: UniformGrid) -> np.ndarray:
    """Order by eigenvalue, breaking (near-)degenerate ties by the electronic node count."""
    order = list(np.argsort(eigenvalues, kind="stable"))
    result = []
    start = 0
    while start < len(order):
        stop = start + 1
        while stop < len(order) and eigenvalues[order[stop]] - eigenvalues[order[start]] < TIE_TOLERANCE:
            stop += 1
        group = order[start:stop]
        if len(group) > 1:
            group = sorted(group, key=lambda i: (count_nodes(vectors[i], grid), eigenvalues[i]))
        result.extend(group)
        start = stop
    return np.asarray(result, dtype=int)


def ip_solve(model: ModelSpec, grid: UniformGrid, size: int, tolerance: float = RESIDUAL_TOLERANCE) -> OrbitalSet:
    """The `size` lowest eigenstates of the dressed one-body operator on `grid`.

    Raises:
        ModelError: if `size` is below N / 2 or beyond the grid dimension.
        NoConvergence: if an eigenpair misses the residual `tolerance`.
    """
    if size < model.n_occupied:
        raise ModelError(f"Basis size {size} is smaller than N/2 = {model.n_occupied}")
    if size > grid.size - 2:
        raise ModelError(f"Basis size {size} exceeds what a grid of {grid.size} points supports")

    operator = one_body_operator(model, grid)
    matrix = operator.matrix()
    # two spare states order degenerate partners at the cut
    n_wanted = min(size + 2, grid.size - 2)

    if grid.size <= DENSE_LIMIT:
        eigenvalues, vectors = np.linalg.eigh(matrix.toarray())
        eigenvalues, vectors = eigenvalues[:n_wanted], vectors[:, :n_wanted]
    else:
        shift = float(np.min(operator.potential)) - 1.0
        eigenvalues, vectors = spla.eigsh(matrix, k=n_wanted, sigma=shift, which="LM", tol=0.0)

    vectors = vectors.T
    residuals = np.linalg.norm(matrix @ vectors.T - vectors.T * eigenvalues[None, :], axis=0)
    scale = np.maximum(1.0, np.abs(eigenvalues))
    if np.any(residuals / scale > tolerance):
        raise NoConvergence(f"IP eigenpairs missed the residual tolerance, max residual {residuals.max():.3e}")

    order = _ordered(eigenvalues, vectors, grid)[:size]
    orbitals = _sign_fixed(vectors[order]) / np.sqrt(grid.volume_element)
    logger.info(f"IP basis of {size} orbitals, lowest eigenvalues {np.round(eigenvalues[order][:4], 6)}")
    return OrbitalSet(grid, orbitals, eigenvalues[order], model.n_occupied)
