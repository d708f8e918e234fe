#!/usr/bin/env python
# -*- coding: utf-8 -*-
from __future__ import annotations

from collections import namedtuple
from dataclasses import dataclass, field
from typing import Dict, Optional, Protocol

import numpy as np

from polaritonrdmft.grid import Field, UniformGrid

ParabolaMinimum = namedtuple(
    "ParabolaMinimum",
    [
        "position",  # float: abscissa of the vertex
        "value",  # float: ordinate of the vertex
    ],
)

SeriesRow = namedtuple(
    "SeriesRow",
    [
        "value",  # float: the series variable
        "energy",  # float: hartree, nan if the row failed
        "delta_energy",  # float: vs previous row, nan for the first
        "delta_density",  # float: max |rho_x - rho_x(previous)|
        "delta_reference",  # float: max |rho_x - rho_x(reference)|, nan without reference
        "converged",  # bool
        "wall_time",  # float: seconds
    ],
)


class NaturalOrbitalSource(Protocol):
    """Anything that carries a spin-summed 1RDM in spectral form on a grid.

    `natural_orbitals` returns an array of shape (n_orbitals, grid.size) whose rows are
    normalized with the grid quadrature, ordered like `occupations`."""

    grid: UniformGrid
    occupations: np.ndarray

    def natural_orbitals(self) -> np.ndarray: ...


@dataclass(frozen=True, eq=False)
class DensityBundle:
    """Densities of a state.

    Attributes:
        rho_x (Field): electronic density on the x axis.
        rho_xq (Optional[Field]): joint density on the single-particle grid (dressed only).
        rho_q (Optional[Field]): photon-displacement density of the first mode (dressed only).
        orbital_x (np.ndarray): (n_orbitals, n_x) x-marginals |phi_i|^2 of the natural orbitals.
        orbital_q (Optional[np.ndarray]): (n_orbitals, n_q) q-marginals, dressed only.
    """

    rho_x: Field
    rho_xq: Optional[Field] = None
    rho_q: Optional[Field] = None
    orbital_x: np.ndarray = field(default_factory=lambda: np.zeros((0, 0)))
    orbital_q: Optional[np.ndarray] = None

    @property
    def is_dressed(self) -> bool:
        return self.rho_xq is not None

    def electron_count(self) -> float:
        return float(self.rho_x.grid.volume_element * np.sum(self.rho_x.values))

    def to_dict(self) -> Dict:
        return {
            "n_x": int(self.rho_x.values.size),
            "dressed": self.is_dressed,
            "electron_count": self.electron_count(),
        }
