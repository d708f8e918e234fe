#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""Model potentials of one-dimensional soft-Coulomb atoms and molecules."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from polaritonrdmft.common.errors import ModelError, UnknownKind

DEFAULT_SOFTENING = 1.0
BERYLLIUM_SOFTENING = 0.5


class PotentialKind(enum.Enum):
    SOFT_HELIUM = "SoftHelium"
    SOFT_HYDROGEN_MOLECULE = "SoftHydrogenMolecule"
    SOFT_BERYLLIUM = "SoftBeryllium"
    HARMONIC = "Harmonic"
    CUSTOM = "Custom"

    @classmethod
    def parse(cls, name: str) -> PotentialKind:
        normalized = name.replace("_", "").replace("-", "").lower()
        for kind in cls:
            if kind.value.lower() == normalized or kind.name.replace("_", "").lower() == normalized:
                return kind
        aliases = {"he": cls.SOFT_HELIUM, "h2": cls.SOFT_HYDROGEN_MOLECULE, "be": cls.SOFT_BERYLLIUM}
        if normalized in aliases:
            return aliases[normalized]
        raise UnknownKind(f"Unknown potential kind {name!r}")


@dataclass(frozen=True)
class PotentialSpec:
    """External potential v(x).

    Attributes:
        kind (PotentialKind): the potential family.
        softening (float): soft-Coulomb softening epsilon (bohr).
        separation (float): bond length d, centres at +-d/2 (SoftHydrogenMolecule).
        stiffness (float): k of the harmonic potential k x^2 / 2.
        table (Optional[Tuple]): (x values, v values) for Custom, linearly interpolated.
    """

    kind: PotentialKind
    softening: Optional[float] = None
    separation: float = 0.0
    stiffness: float = 1.0
    table: Optional[Tuple[Tuple[float, ...], Tuple[float, ...]]] = None

    def __post_init__(self):
        if self.softening is None:
            default = BERYLLIUM_SOFTENING if self.kind == PotentialKind.SOFT_BERYLLIUM else DEFAULT_SOFTENING
            object.__setattr__(self, "softening", default)
        if self.softening <= 0:
            raise ModelError(f"Softening must be positive, got {self.softening}")
        if self.separation < 0:
            raise ModelError(f"Separation must be non-negative, got {self.separation}")
        if self.kind == PotentialKind.CUSTOM:
            if self.table is None or len(self.table[0]) != len(self.table[1]) or len(self.table[0]) < 2:
                raise ModelError("Custom potentials need a table of at least two (x, v) pairs")

    @classmethod
    def soft_helium(cls, softening: float = DEFAULT_SOFTENING) -> PotentialSpec:
        return cls(PotentialKind.SOFT_HELIUM, softening)

    @classmethod
    def soft_hydrogen_molecule(cls, separation: float, softening: float = DEFAULT_SOFTENING) -> PotentialSpec:
        return cls(PotentialKind.SOFT_HYDROGEN_MOLECULE, softening, separation=separation)

    @classmethod
    def soft_beryllium(cls, softening: float = BERYLLIUM_SOFTENING) -> PotentialSpec:
        return cls(PotentialKind.SOFT_BERYLLIUM, softening)

    @classmethod
    def harmonic(cls, stiffness: float = 1.0) -> PotentialSpec:
        return cls(PotentialKind.HARMONIC, stiffness=stiffness)

    def with_separation(self, separation: float) -> PotentialSpec:
        return PotentialSpec(self.kind, self.softening, separation, self.stiffness, self.table)

    def to_dict(self) -> Dict:
        data = {
            "kind": self.kind.value,
            "softening": self.softening,
            "separation": self.separation,
            "stiffness": self.stiffness,
        }
        if self.table is not None:
            data["table"] = [list(self.table[0]), list(self.table[1])]
        return data


def soft_coulomb(x, x_prime, softening: float = DEFAULT_SOFTENING):
    """1 / sqrt((x - x')^2 + softening^2), broadcasting over array inputs."""
    assert softening > 0, f"Softening must be positive, got {softening}"
    return 1.0 / np.sqrt((np.asarray(x) - np.asarray(x_prime)) ** 2 + softening**2)


def bare_potential(x, spec: PotentialSpec):
    """Evaluate v(x) for the potential family of `spec`."""
    x = np.asarray(x, dtype=float)
    eps = spec.softening
    if spec.kind == PotentialKind.SOFT_HELIUM:
        return -2.0 * soft_coulomb(x, 0.0, eps)
    if spec.kind == PotentialKind.SOFT_HYDROGEN_MOLECULE:
        half = 0.5 * spec.separation
        return -soft_coulomb(x, half, eps) - soft_coulomb(x, -half, eps)
    if spec.kind == PotentialKind.SOFT_BERYLLIUM:
        return -4.0 * soft_coulomb(x, 0.0, eps)
    if spec.kind == PotentialKind.HARMONIC:
        return 0.5 * spec.stiffness * x**2
    if spec.kind == PotentialKind.CUSTOM:
        table_x, table_v = (np.asarray(t, dtype=float) for t in spec.table)
        return np.interp(x, table_x, table_v)
    raise UnknownKind(f"Unknown potential kind {spec.kind}")


def nuclear_repulsion(spec: PotentialSpec) -> float:
    """Soft-Coulomb repulsion of the two unit charges a bond length d apart; zero for single centres."""
    if spec.kind != PotentialKind.SOFT_HYDROGEN_MOLECULE:
        return 0.0
    return float(soft_coulomb(spec.separation, 0.0, spec.softening))
