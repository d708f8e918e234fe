#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""Uniform tensor-product real-space grids and the fields sampled on them.

Axis points are placed symmetrically about the origin, x_i = (i - (n - 1) / 2) * h, so that
the box [-L'/2, L'/2] with the effective length L' = (n - 1) * h is covered on-point,
endpoints included. Values outside the box are zero (hard-wall Dirichlet convention)."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from polaritonrdmft.common.errors import GridMismatch, NonCommensurate, TooSmall

MIN_STENCIL_POINTS = 7

AxisLike = Union[Mapping[str, float], Tuple[float, float]]


@dataclass(frozen=True)
class Axis:
    """One axis of a uniform grid.

    Attributes:
        length (float): the requested box length L (bohr).
        spacing (float): the grid spacing h (bohr).
        n_points (int): number of points, round(L / h) + 1.
    """

    length: float
    spacing: float
    n_points: int

    @property
    def effective_length(self) -> float:
        return (self.n_points - 1) * self.spacing

    @property
    def points(self) -> np.ndarray:
        centered = np.arange(self.n_points, dtype=float) - 0.5 * (self.n_points - 1)
        return centered * self.spacing

    def to_dict(self) -> Dict:
        return {"L": self.length, "h": self.spacing, "n": self.n_points}


def make_axis(length: float, spacing: float, min_points: int = MIN_STENCIL_POINTS) -> Axis:
    if not (length > 0 and spacing > 0):
        raise NonCommensurate(f"Box length and spacing must be positive, got L={length}, h={spacing}")

    ratio = length / spacing
    # every finite ratio lies within 0.5 of an integer
    if not np.isfinite(ratio):
        raise NonCommensurate(f"L/h = {ratio} is not within 0.5 of an integer")
    n_intervals = int(round(ratio))

    n_points = n_intervals + 1
    if n_points < min_points:
        raise TooSmall(f"Axis with L={length}, h={spacing} has {n_points} points, need >= {min_points}")
    return Axis(float(length), float(spacing), n_points)


@dataclass(frozen=True)
class UniformGrid:
    """Tensor-product mesh. The first axis is always the electronic coordinate x, the
    following ones (if any) are the photon displacement coordinates q of each mode."""

    axes: Tuple[Axis, ...]
    names: Tuple[str, ...] = field(default=())

    def __post_init__(self):
        if not self.names:
            default = ("x",) + tuple(f"q{i}" if len(self.axes) > 2 else "q" for i in range(len(self.axes) - 1))
            object.__setattr__(self, "names", default)
        assert len(self.names) == len(self.axes), f"Got {len(self.names)} names for {len(self.axes)} axes"

    @property
    def ndim(self) -> int:
        return len(self.axes)

    @property
    def shape(self) -> Tuple[int, ...]:
        return tuple(axis.n_points for axis in self.axes)

    @property
    def size(self) -> int:
        return int(np.prod(self.shape))

    @property
    def spacings(self) -> Tuple[float, ...]:
        return tuple(axis.spacing for axis in self.axes)

    @property
    def volume_element(self) -> float:
        return float(np.prod(self.spacings))

    @property
    def effective_lengths(self) -> Tuple[float, ...]:
        return tuple(axis.effective_length for axis in self.axes)

    def axis_index(self, axis: Union[int, str]) -> int:
        if isinstance(axis, str):
            return self.names.index(axis)
        return int(axis)

    def points(self, axis: Union[int, str] = 0) -> np.ndarray:
        return self.axes[self.axis_index(axis)].points

    def mesh(self) -> List[np.ndarray]:
        """Coordinate arrays broadcast to the full grid shape (row-major, 'ij' indexing)."""
        return np.meshgrid(*[axis.points for axis in self.axes], indexing="ij")

    def coordinate(self, axis: Union[int, str]) -> np.ndarray:
        """Coordinate of `axis` evaluated on every grid point."""
        idx = self.axis_index(axis)
        shape = [1] * self.ndim
        shape[idx] = self.shape[idx]
        return np.broadcast_to(self.axes[idx].points.reshape(shape), self.shape)

    def subgrid(self, axes: Iterable[Union[int, str]]) -> UniformGrid:
        indices = [self.axis_index(a) for a in axes]
        return UniformGrid(tuple(self.axes[i] for i in indices), tuple(self.names[i] for i in indices))

    def check_stencil_support(self, axes: Optional[Sequence[int]] = None) -> None:
        for idx in range(self.ndim) if axes is None else axes:
            if self.axes[idx].n_points < MIN_STENCIL_POINTS:
                raise TooSmall(
                    f"Axis {self.names[idx]} has {self.axes[idx].n_points} points, "
                    f"the 4th-order stencil needs >= {MIN_STENCIL_POINTS}"
                )

    def to_dict(self) -> Dict:
        return {"names": list(self.names), "axes": [axis.to_dict() for axis in self.axes]}

    @classmethod
    def from_dict(cls, data: Mapping) -> UniformGrid:
        axes = tuple(Axis(float(a["L"]), float(a["h"]), int(a["n"])) for a in data["axes"])
        return cls(axes, tuple(data["names"]))


def make_grid(
    axes: Sequence[AxisLike],
    names: Optional[Sequence[str]] = None,
    min_points: int = MIN_STENCIL_POINTS,
) -> UniformGrid:
    """Build a grid from a list of {L, h} specifications (or (L, h) pairs).

    Raises:
        NonCommensurate: if L/h deviates from an integer by more than 0.5.
        TooSmall: if an axis ends up with fewer than `min_points` points.
    """

    built = []
    for spec in axes:
        if isinstance(spec, Mapping):
            length, spacing = spec["L"], spec["h"]
        else:
            length, spacing = spec
        built.append(make_axis(length, spacing, min_points))
    return UniformGrid(tuple(built), tuple(names) if names is not None else ())


@dataclass(frozen=True, eq=False)
class Field:
    """Samples of a real or complex function on every point of `grid`, stored with the grid
    shape in row-major axis order. The stored array is read-only."""

    grid: UniformGrid
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values)
        if values.size != self.grid.size:
            raise GridMismatch(f"Got {values.size} values for a grid with {self.grid.size} points")
        values = values.reshape(self.grid.shape).view()
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_function(cls, grid: UniformGrid, func) -> Field:
        return cls(grid, func(*grid.mesh()))

    @classmethod
    def zeros(cls, grid: UniformGrid, dtype=float) -> Field:
        return cls(grid, np.zeros(grid.shape, dtype=dtype))

    def conj(self) -> Field:
        return Field(self.grid, np.conj(self.values))

    def __mul__(self, other) -> Field:
        if isinstance(other, Field):
            _check_same_grid(self, other)
            return Field(self.grid, self.values * other.values)
        return Field(self.grid, self.values * other)

    __rmul__ = __mul__

    def __add__(self, other: Field) -> Field:
        _check_same_grid(self, other)
        return Field(self.grid, self.values + other.values)

    def __sub__(self, other: Field) -> Field:
        _check_same_grid(self, other)
        return Field(self.grid, self.values - other.values)


def _check_same_grid(f: Field, g: Field) -> None:
    if f.grid != g.grid:
        raise GridMismatch(f"Fields live on different grids: {f.grid.to_dict()} vs {g.grid.to_dict()}")
