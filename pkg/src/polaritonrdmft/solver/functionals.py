#!/usr/bin/env python
# coding=utf-8

from abc import ABCMeta, abstractmethod

import numpy as np

from polaritonrdmft.common.errors import ConfigError


class AbstractFunctional(metaclass=ABCMeta):
    """Exchange-correlation functional of the form E_xc = -1/2 sum_ij g(n_i) g(n_j) K_ij.

    `pinned` functionals keep the Aufbau occupations {2, 0} and only optimize orbitals."""

    name = "abstract"
    pinned = False

    @abstractmethod
    def factor(self, occupations: np.ndarray) -> np.ndarray:
        """g(n_i) for every orbital"""
        return NotImplemented

    @abstractmethod
    def factor_derivative(self, occupations: np.ndarray, n_floor: float) -> np.ndarray:
        """dg/dn_i, regularized with `n_floor` where g is singular"""
        return NotImplemented

    def pair_weights(self, occupations: np.ndarray) -> np.ndarray:
        g = self.factor(occupations)
        return np.outer(g, g)

    @classmethod
    def create(cls, name: str) -> "AbstractFunctional":
        functionals = {"hf": HartreeFockFunctional, "mueller": MuellerFunctional, "rdmft": MuellerFunctional}
        key = name.lower().replace("ü", "ue")
        if key not in functionals:
            raise ConfigError(f"Unknown functional {name!r}, choose from {sorted(functionals)}")
        return functionals[key]()

    def __repr__(self):
        return f"{type(self).__name__}()"


class MuellerFunctional(AbstractFunctional):
    """g(n) = sqrt(n)"""

    name = "mueller"

    def factor(self, occupations: np.ndarray) -> np.ndarray:
        return np.sqrt(np.clip(occupations, 0.0, None))

    def factor_derivative(self, occupations: np.ndarray, n_floor: float) -> np.ndarray:
        return 0.5 / np.sqrt(np.maximum(occupations, n_floor))


class HartreeFockFunctional(MuellerFunctional):
    """Closed-shell Hartree-Fock: the Mueller form at pinned occupations {2, 0}, where it
    reduces to -sum_{ij occupied} K_ij."""

    name = "hf"
    pinned = True
