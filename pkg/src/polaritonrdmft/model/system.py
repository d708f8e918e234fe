#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""Electron-cavity system definitions and the coupling-constant conventions."""

from __future__ import annotations

import hashlib
import json
from collections import namedtuple
from dataclasses import dataclass, field, replace
from typing import Dict, Mapping, Tuple

import numpy as np

from polaritonrdmft.common.errors import ModelError
from polaritonrdmft.model.potentials import DEFAULT_SOFTENING, PotentialKind, PotentialSpec

EffectiveCoupling = namedtuple(
    "EffectiveCoupling",
    [
        "g",  # float: hartree
        "g_over_omega",  # float: dimensionless
    ],
)


@dataclass(frozen=True)
class PhotonMode:
    """One cavity mode with frequency `omega` (hartree) and coupling amplitude `lam`."""

    omega: float
    lam: float = 0.0

    def __post_init__(self):
        if not self.omega > 0:
            raise ModelError(f"Mode frequency must be positive, got {self.omega}")
        if self.lam < 0:
            raise ModelError(f"Coupling amplitude must be non-negative, got {self.lam}")

    @classmethod
    def from_g_over_omega(cls, g_over_omega: float, omega: float) -> PhotonMode:
        return cls(omega, lambda_for(g_over_omega, omega))

    def to_dict(self) -> Dict:
        return {"omega": self.omega, "lambda": self.lam}


@dataclass(frozen=True)
class ModelSpec:
    """The physical system: external potential, interaction, particle number and modes."""

    potential: PotentialSpec
    n_electrons: int = 2
    modes: Tuple[PhotonMode, ...] = field(default=())
    interaction_softening: float = DEFAULT_SOFTENING
    interaction_enabled: bool = True

    def __post_init__(self):
        object.__setattr__(self, "modes", tuple(self.modes))
        if self.n_electrons < 1 or self.n_electrons % 2:
            raise ModelError(f"Only closed shells are supported, got N={self.n_electrons}")
        if self.interaction_softening <= 0:
            raise ModelError(f"Interaction softening must be positive, got {self.interaction_softening}")

    @property
    def n_modes(self) -> int:
        return len(self.modes)

    @property
    def n_occupied(self) -> int:
        return self.n_electrons // 2

    @property
    def is_dressed(self) -> bool:
        return self.n_modes > 0

    def bare(self) -> ModelSpec:
        """The same electronic system without cavity modes."""
        return replace(self, modes=())

    def with_modes(self, *modes: PhotonMode) -> ModelSpec:
        return replace(self, modes=tuple(modes))

    def with_coupling(self, lam: float, mode_index: int = 0) -> ModelSpec:
        modes = list(self.modes)
        modes[mode_index] = replace(modes[mode_index], lam=lam)
        return replace(self, modes=tuple(modes))

    def with_separation(self, separation: float) -> ModelSpec:
        if self.potential.kind != PotentialKind.SOFT_HYDROGEN_MOLECULE:
            raise ModelError(f"Bond length is undefined for {self.potential.kind.value}")
        return replace(self, potential=self.potential.with_separation(separation))

    def to_dict(self) -> Dict:
        return {
            "potential": self.potential.to_dict(),
            "n_electrons": self.n_electrons,
            "modes": [mode.to_dict() for mode in self.modes],
            "interaction_softening": self.interaction_softening,
            "interaction_enabled": self.interaction_enabled,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> ModelSpec:
        pot = data["potential"]
        table = pot.get("table")
        potential = PotentialSpec(
            PotentialKind.parse(pot["kind"]),
            pot.get("softening"),
            pot.get("separation", 0.0),
            pot.get("stiffness", 1.0),
            (tuple(table[0]), tuple(table[1])) if table is not None else None,
        )
        modes = tuple(PhotonMode(m["omega"], m["lambda"]) for m in data.get("modes", []))
        return cls(
            potential,
            int(data.get("n_electrons", 2)),
            modes,
            float(data.get("interaction_softening", DEFAULT_SOFTENING)),
            bool(data.get("interaction_enabled", True)),
        )

    def fingerprint(self) -> str:
        """SHA-256 of the canonical JSON form, used to key caches and checkpoints."""
        canonical = json.dumps(self.to_dict(), sort_keys=True)
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def effective_coupling(mode: PhotonMode) -> EffectiveCoupling:
    """g = |lambda| sqrt(omega / 2) together with g / omega."""
    if not mode.omega > 0:
        raise ModelError(f"Mode frequency must be positive, got {mode.omega}")
    g = abs(mode.lam) * np.sqrt(mode.omega / 2.0)
    return EffectiveCoupling(float(g), float(g / mode.omega))


def lambda_for(g_over_omega: float, omega: float) -> float:
    """Inverse of `effective_coupling`: the lambda giving the requested g / omega."""
    if not omega > 0:
        raise ModelError(f"Mode frequency must be positive, got {omega}")
    return float(g_over_omega * omega / np.sqrt(omega / 2.0))
