#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""Thick-restart Lanczos for the lowest eigenpairs of a symmetric operator.

The operator is only needed as a matrix-vector product. Every Krylov vector passes through a
user supplied projector (e.g. exchange symmetrization) and is fully reorthogonalized, so the
iteration stays inside the projected sector."""

from __future__ import annotations

import logging
from collections import namedtuple
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from polaritonrdmft.common.errors import MemoryBudgetExceeded, NoConvergence

logger = logging.getLogger(__name__)

GIB = 1024**3

LanczosResult = namedtuple(
    "LanczosResult",
    [
        "energies",  # np.ndarray (n_states,)
        "vectors",  # np.ndarray (n_states, dim), Euclidean-normalized
        "residuals",  # np.ndarray (n_states,)
        "n_restarts",  # int
    ],
)


@dataclass(frozen=True)
class LanczosSettings:
    tolerance: float = 1e-6
    eps_E: float = 1e-9
    max_restarts: int = 500
    krylov_dim: Optional[int] = None
    max_memory_gib: float = 2.0
    seed: int = 0

    def subspace_size(self, n_states: int) -> int:
        if self.krylov_dim is not None:
            return max(self.krylov_dim, n_states + 2)
        return max(3 * n_states + 6, 20)


def check_memory(dim: int, n_vectors: int, max_memory_gib: float, itemsize: int = 8) -> None:
    """Raise if `n_vectors` vectors and their images exceed the budget."""
    needed = 2 * n_vectors * dim * itemsize
    if needed > max_memory_gib * GIB:
        raise MemoryBudgetExceeded(
            f"Lanczos subspace needs {needed / GIB:.2f} GiB, budget is {max_memory_gib:.2f} GiB"
        )


def _orthonormalize(vector: np.ndarray, basis: list, project: Callable) -> Optional[np.ndarray]:
    """Project and Gram-Schmidt `vector` against `basis` twice; None if nothing is left."""
    vector = project(vector)
    initial = np.linalg.norm(vector)
    if initial == 0.0:
        return None
    for _ in range(2):
        for b in basis:
            vector = vector - np.dot(b, vector) * b
        vector = project(vector)
    norm = np.linalg.norm(vector)
    if norm < 1e-10 * initial:
        return None
    return vector / norm


def lowest_eigenpairs(
    apply: Callable[[np.ndarray], np.ndarray],
    dim: int,
    n_states: int,
    settings: LanczosSettings = LanczosSettings(),
    project: Callable[[np.ndarray], np.ndarray] = lambda v: v,
) -> LanczosResult:
    """Lowest `n_states` eigenpairs of the symmetric operator `apply` on R^dim.

    Converged once every Ritz residual is below `settings.tolerance` and the Ritz values
    moved by less than `settings.eps_E` since the previous restart.

    Raises:
        MemoryBudgetExceeded: if the subspace does not fit into `settings.max_memory_gib`.
        NoConvergence: after `settings.max_restarts` restarts; `partial` holds the last result.
    """
    assert n_states >= 1, f"Need at least one state, got {n_states}"
    max_size = min(settings.subspace_size(n_states), dim)
    check_memory(dim, max_size, settings.max_memory_gib)

    rng = np.random.default_rng(settings.seed)
    basis: list = []
    images: list = []
    candidate = rng.standard_normal(dim)
    previous = np.full(n_states, np.inf)
    result = None

    for restart in range(settings.max_restarts):
        while len(basis) < max_size:
            vector = _orthonormalize(candidate, basis, project)
            if vector is None:
                # Krylov space exhausted, continue with a fresh random direction
                vector = _orthonormalize(rng.standard_normal(dim), basis, project)
                if vector is None:
                    break
            basis.append(vector)
            images.append(apply(vector))
            candidate = images[-1]

        V = np.asarray(basis)
        HV = np.asarray(images)
        T = V @ HV.T
        T = 0.5 * (T + T.T)
        theta, S = np.linalg.eigh(T)
        n_found = min(n_states, len(theta))

        ritz = S[:, :n_found].T @ V
        ritz_images = S[:, :n_found].T @ HV
        residual_vectors = ritz_images - theta[:n_found, None] * ritz
        residuals = np.linalg.norm(residual_vectors, axis=1)
        energies = theta[:n_found]
        change = np.max(np.abs(energies - previous[:n_found]))
        result = LanczosResult(energies.copy(), ritz, residuals, restart + 1)

        logger.debug(
            f"Lanczos restart {restart}: E0 = {energies[0]:.12f}, "
            f"max residual = {residuals.max():.3e}, change = {change:.3e}"
        )
        if n_found == n_states and residuals.max() < settings.tolerance and change < settings.eps_E:
            logger.info(f"Lanczos converged after {restart + 1} restarts, E0 = {energies[0]:.10f}")
            return result
        if len(basis) == dim:
            return result

        previous = np.pad(energies, (0, n_states - n_found), constant_values=np.inf)
        worst = int(np.argmax(residuals))
        candidate = residual_vectors[worst]
        basis = [ritz[i] for i in range(n_found)]
        images = [ritz_images[i] for i in range(n_found)]

    raise NoConvergence(
        f"Lanczos did not converge within {settings.max_restarts} restarts "
        f"(max residual {result.residuals.max():.3e})",
        partial=result,
    )
