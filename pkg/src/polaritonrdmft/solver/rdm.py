#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""Solver state and settings: the 1RDM in natural-orbital form, SCF thresholds and the
energy report."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Optional, Union

import numpy as np

from polaritonrdmft.common.errors import ConfigError, RepresentabilityError
from polaritonrdmft.file.container import read_container, write_container
from polaritonrdmft.grid import UniformGrid
from polaritonrdmft.model import ModelSpec
from polaritonrdmft.spbasis import OrbitalSet

UNITARITY_TOLERANCE = 1e-8
SUM_RULE_TOLERANCE = 1e-8
BOUND_SLACK = 1e-12


@dataclass(frozen=True)
class SCFSettings:
    """Thresholds and iteration limits of the SCF.

    `eps_Lambda` defaults to 1e3 * eps_E. The `desk` profile relaxes eps_E and eps_Lambda by
    100x and eps_rho and eps_mu by 10x."""

    eps_E: float = 1e-9
    eps_rho: float = 1e-8
    eps_Lambda: Optional[float] = None
    eps_mu: float = 1e-8
    max_outer: int = 200
    max_orbital: int = 500
    max_occupation: int = 200
    mixing: float = 0.5
    n_floor: float = 1e-10
    preconditioner_floor: float = 1e-2
    occupation_perturbation: float = 1e-2

    def __post_init__(self):
        if self.eps_Lambda is None:
            object.__setattr__(self, "eps_Lambda", 1e3 * self.eps_E)
        for name in ("eps_E", "eps_rho", "eps_Lambda", "eps_mu", "n_floor", "preconditioner_floor"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive, got {getattr(self, name)}")
        if not 0 < self.mixing <= 1:
            raise ConfigError(f"mixing must lie in (0, 1], got {self.mixing}")

    @classmethod
    def profile(cls, name: str = "paper", **overrides) -> SCFSettings:
        overrides = {k: v for k, v in overrides.items() if v is not None}
        if name == "paper":
            return cls(**overrides)
        if name == "desk":
            base = cls()
            relaxed = {
                "eps_E": 100 * base.eps_E,
                "eps_Lambda": 100 * base.eps_Lambda,
                "eps_rho": 10 * base.eps_rho,
                "eps_mu": 10 * base.eps_mu,
            }
            relaxed.update(overrides)
            return cls(**relaxed)
        raise ConfigError(f"Unknown profile {name!r}")

    def to_dict(self) -> Dict:
        return dataclasses.asdict(self)


@dataclass(frozen=True, eq=False)
class OneRDM:
    """Spin-summed 1RDM gamma = sum_i n_i |phi_i><phi_i| with phi_i = sum_p C[p, i] chi_p.

    Attributes:
        basis (OrbitalSet): the basis chi_p.
        coefficients (np.ndarray): (M, M) orthogonal matrix, columns are natural orbitals.
        occupations (np.ndarray): (M,) occupation numbers in [0, 2].
    """

    basis: OrbitalSet
    coefficients: np.ndarray
    occupations: np.ndarray

    def __post_init__(self):
        M = self.basis.size
        assert self.coefficients.shape == (M, M), f"Expected {M}x{M} coefficients, got {self.coefficients.shape}"
        assert self.occupations.shape == (M,), f"Expected {M} occupations, got {self.occupations.shape}"

    @classmethod
    def aufbau(cls, basis: OrbitalSet, coefficients: Optional[np.ndarray] = None) -> OneRDM:
        occupations = np.zeros(basis.size)
        occupations[: basis.n_occupied] = 2.0
        if coefficients is None:
            coefficients = np.eye(basis.size)
        return cls(basis, coefficients, occupations)

    @property
    def grid(self) -> UniformGrid:
        return self.basis.grid

    @property
    def size(self) -> int:
        return self.basis.size

    @property
    def n_electrons(self) -> float:
        return float(np.sum(self.occupations))

    def natural_orbitals(self) -> np.ndarray:
        """(M, grid.size) natural orbitals on the grid."""
        return self.coefficients.T @ self.basis.orbitals

    def density_matrix(self, weights: Optional[np.ndarray] = None) -> np.ndarray:
        """C diag(w) C^T in the basis, w defaulting to the occupations."""
        weights = self.occupations if weights is None else weights
        return (self.coefficients * weights[None, :]) @ self.coefficients.T

    def density(self) -> np.ndarray:
        """rho(z) = sum_i n_i phi_i(z)^2 on the flattened grid."""
        return np.einsum("i,ip->p", self.occupations, self.natural_orbitals() ** 2)

    def with_occupations(self, occupations: np.ndarray) -> OneRDM:
        return OneRDM(self.basis, self.coefficients, np.asarray(occupations, dtype=float))

    def with_coefficients(self, coefficients: np.ndarray) -> OneRDM:
        return OneRDM(self.basis, coefficients, self.occupations)

    def unitarity_defect(self) -> float:
        C = self.coefficients
        return float(np.max(np.abs(C.T @ C - np.eye(self.size))))

    def check(self, n_electrons: int) -> None:
        """Raise RepresentabilityError unless 0 <= n_i <= 2, sum n_i = N and C is orthogonal."""
        n = self.occupations
        if n.min() < -BOUND_SLACK or n.max() > 2.0 + BOUND_SLACK:
            raise RepresentabilityError(f"Occupations leave [0, 2]: min {n.min():.3e}, max {n.max():.12f}")
        if abs(n.sum() - n_electrons) > SUM_RULE_TOLERANCE:
            raise RepresentabilityError(f"Occupations sum to {n.sum():.12f}, expected {n_electrons}")
        if self.unitarity_defect() > UNITARITY_TOLERANCE:
            raise RepresentabilityError(f"Natural orbitals lost orthonormality ({self.unitarity_defect():.3e})")

    def save(self, path: Union[str, Path], model: ModelSpec, settings: Optional[SCFSettings] = None) -> None:
        metadata = {
            "grid": self.grid.to_dict(),
            "model": model.to_dict(),
            "model_hash": model.fingerprint(),
            "n_occupied": self.basis.n_occupied,
            "settings": settings.to_dict() if settings is not None else {},
        }
        arrays = {
            "coefficients": self.coefficients,
            "occupations": self.occupations,
            "basis_orbitals": self.basis.orbitals,
            "basis_eigenvalues": self.basis.eigenvalues,
        }
        write_container(path, "one_rdm", arrays, metadata)

    @classmethod
    def load(cls, path: Union[str, Path]) -> OneRDM:
        header, arrays = read_container(path)
        metadata = header["metadata"]
        basis = OrbitalSet(
            UniformGrid.from_dict(metadata["grid"]),
            arrays["basis_orbitals"],
            arrays["basis_eigenvalues"],
            int(metadata["n_occupied"]),
        )
        return cls(basis, arrays["coefficients"], arrays["occupations"])


@dataclass(frozen=True)
class EnergyReport:
    """Energy decomposition; `total` is always one_body + hartree + xc."""

    kinetic: float
    external: float
    hartree: float
    xc: float
    photon_mode_energy: float = 0.0
    mode_occupation: float = 0.0
    functional: str = ""
    iterations: int = 0
    converged: bool = True
    lagrangian_defect: float = 0.0

    @property
    def one_body(self) -> float:
        return self.kinetic + self.external

    @property
    def total(self) -> float:
        return self.one_body + self.hartree + self.xc

    def flagged(self, iterations: int, converged: bool, lagrangian_defect: float) -> EnergyReport:
        return dataclasses.replace(
            self, iterations=iterations, converged=converged, lagrangian_defect=lagrangian_defect
        )

    def to_dict(self) -> Dict:
        data = dataclasses.asdict(self)
        data["one_body"] = self.one_body
        data["total"] = self.total
        return data
