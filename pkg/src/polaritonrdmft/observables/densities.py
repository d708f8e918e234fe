#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""Densities reconstructed from natural orbitals and their differences."""

from __future__ import annotations

from collections import namedtuple
from typing import Optional

import numpy as np

from polaritonrdmft.common.errors import GridMismatch
from polaritonrdmft.common.types import DensityBundle, NaturalOrbitalSource
from polaritonrdmft.grid import Field, marginal

DensityDifference = namedtuple(
    "DensityDifference",
    [
        "delta_x",  # Field: rho_a(x) - rho_b(x)
        "delta_q",  # Optional[Field]: rho_a(q) - rho_b(q), dressed only
        "max_x",  # float: max |delta_x|
        "max_q",  # float: max |delta_q|, 0 for bare densities
    ],
)


def densities_from_rdm(rdm: NaturalOrbitalSource) -> DensityBundle:
    """rho(z) = sum_i n_i phi_i(z)^2 with the x and q marginals of the total and of every orbital."""
    grid = rdm.grid
    orbitals = rdm.natural_orbitals()
    occupations = np.asarray(rdm.occupations)
    squared = orbitals**2
    rho = np.einsum("i,ip->p", occupations, squared).reshape(grid.shape)

    if grid.ndim == 1:
        return DensityBundle(rho_x=Field(grid, rho), orbital_x=squared)

    per_orbital = squared.reshape((len(orbitals),) + grid.shape)
    orbital_x = np.array([marginal(values, grid, 0) for values in per_orbital])
    orbital_q = np.array([marginal(values, grid, 1) for values in per_orbital])
    return DensityBundle(
        rho_x=Field(grid.subgrid([0]), marginal(rho, grid, 0)),
        rho_xq=Field(grid, rho),
        rho_q=Field(grid.subgrid([1]), marginal(rho, grid, 1)),
        orbital_x=orbital_x,
        orbital_q=orbital_q,
    )


def _on_grid(target: Field, source: Field, interpolate: bool) -> np.ndarray:
    if source.grid == target.grid:
        return source.values
    if not interpolate:
        raise GridMismatch(f"Densities live on different grids: {target.grid.to_dict()} vs {source.grid.to_dict()}")
    return np.interp(target.grid.points(0), source.grid.points(0), source.values, left=0.0, right=0.0)


def density_difference(a: DensityBundle, b: DensityBundle, interpolate: bool = False) -> DensityDifference:
    """Pointwise a - b of the electronic (and photonic) densities.

    With `interpolate`, b is linearly interpolated onto the grid of a (zero outside its box);
    otherwise differing grids raise GridMismatch."""
    delta_x = Field(a.rho_x.grid, a.rho_x.values - _on_grid(a.rho_x, b.rho_x, interpolate))
    delta_q: Optional[Field] = None
    max_q = 0.0
    if a.rho_q is not None and b.rho_q is not None:
        delta_q = Field(a.rho_q.grid, a.rho_q.values - _on_grid(a.rho_q, b.rho_q, interpolate))
        max_q = float(np.max(np.abs(delta_q.values)))
    elif (a.rho_q is None) != (b.rho_q is None) and not interpolate:
        raise GridMismatch("Cannot compare a dressed with a bare density")
    return DensityDifference(delta_x, delta_q, float(np.max(np.abs(delta_x.values))), max_q)
