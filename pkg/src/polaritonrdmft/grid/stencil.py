#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""Fourth-order central finite differences with zero padding outside the box."""

from typing import Iterable, Optional, Sequence, Union

import numpy as np
import scipy.sparse as sp
from scipy.ndimage import correlate1d

from polaritonrdmft.grid.uniform_grid import Field, UniformGrid

SECOND_DERIVATIVE_WEIGHTS = np.array([-1.0 / 12.0, 4.0 / 3.0, -5.0 / 2.0, 4.0 / 3.0, -1.0 / 12.0])


def _resolve_axes(grid: UniformGrid, axis_subset: Optional[Iterable[Union[int, str]]]) -> Sequence[int]:
    if axis_subset is None:
        return list(range(grid.ndim))
    return [grid.axis_index(a) for a in axis_subset]


def second_derivative(values: np.ndarray, spacing: float, axis: int) -> np.ndarray:
    """d^2/da^2 of a raw array along `axis`, Dirichlet zero padding."""
    weights = SECOND_DERIVATIVE_WEIGHTS / spacing**2
    if np.iscomplexobj(values):
        return second_derivative(values.real, spacing, axis) + 1j * second_derivative(
            values.imag, spacing, axis
        )
    return correlate1d(np.asarray(values, dtype=float), weights, axis=axis, mode="constant", cval=0.0)


def apply_laplacian(f: Field, axis_subset: Optional[Iterable[Union[int, str]]] = None) -> Field:
    """Return sum over the selected axes of the second derivative of `f`.

    Args:
        f (Field): the field to differentiate.
        axis_subset: axis indices or names; all axes if None.
    """
    grid = f.grid
    axes = _resolve_axes(grid, axis_subset)
    grid.check_stencil_support(axes)

    result = np.zeros(grid.shape, dtype=np.result_type(f.values.dtype, float))
    for axis in axes:
        result += second_derivative(f.values, grid.axes[axis].spacing, axis)
    return Field(grid, result)


def second_derivative_matrix(n_points: int, spacing: float) -> sp.csr_matrix:
    """Banded n x n matrix of the stencil; rows near the edges are truncated (zero padding)."""
    offsets = [-2, -1, 0, 1, 2]
    diagonals = [np.full(n_points - abs(k), w) for k, w in zip(offsets, SECOND_DERIVATIVE_WEIGHTS)]
    return sp.diags(diagonals, offsets, shape=(n_points, n_points), format="csr") / spacing**2


def laplacian_matrix(grid: UniformGrid, axis_subset: Optional[Iterable[Union[int, str]]] = None) -> sp.csr_matrix:
    """Sparse matrix of `apply_laplacian` acting on row-major flattened fields."""
    axes = _resolve_axes(grid, axis_subset)
    grid.check_stencil_support(axes)

    total = sp.csr_matrix((grid.size, grid.size))
    for axis in axes:
        factors = [
            second_derivative_matrix(a.n_points, a.spacing) if idx == axis else sp.identity(a.n_points, format="csr")
            for idx, a in enumerate(grid.axes)
        ]
        term = factors[0]
        for factor in factors[1:]:
            term = sp.kron(term, factor, format="csr")
        total = total + term
    return total.tocsr()
