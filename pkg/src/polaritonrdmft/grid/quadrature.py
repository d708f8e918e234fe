#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""Riemann-sum quadrature consistent with the on-point Dirichlet convention."""

from typing import Iterable, Union

import numpy as np

from polaritonrdmft.common.errors import GridMismatch
from polaritonrdmft.grid.uniform_grid import Field, UniformGrid


def integrate(f: Field) -> float:
    """(prod_a h_a) * sum of all samples."""
    result = f.grid.volume_element * np.sum(f.values)
    return float(result) if np.isrealobj(result) else complex(result)


def inner_product(f: Field, g: Field) -> complex:
    """<f, g> = integral of conj(f) * g."""
    if f.grid != g.grid:
        raise GridMismatch("inner_product needs both fields on the same grid")
    result = f.grid.volume_element * np.vdot(f.values.ravel(), g.values.ravel())
    if np.isrealobj(f.values) and np.isrealobj(g.values):
        return float(np.real(result))
    return complex(result)


def norm(f: Field) -> float:
    return float(np.sqrt(inner_product(f, f).real))


def marginal(values: np.ndarray, grid: UniformGrid, keep_axis: Union[int, str]) -> np.ndarray:
    """Integrate `values` over every axis except `keep_axis`."""
    keep = grid.axis_index(keep_axis)
    others = tuple(i for i in range(grid.ndim) if i != keep)
    weight = float(np.prod([grid.axes[i].spacing for i in others])) if others else 1.0
    return weight * np.sum(values, axis=others) if others else np.array(values, copy=True)


def integrate_over(values: np.ndarray, grid: UniformGrid, axes: Iterable[Union[int, str]]) -> np.ndarray:
    indices = tuple(grid.axis_index(a) for a in axes)
    weight = float(np.prod([grid.axes[i].spacing for i in indices]))
    return weight * np.sum(values, axis=indices)
