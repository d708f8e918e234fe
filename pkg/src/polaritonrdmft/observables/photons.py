#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""Photonic observables recovered from the dressed auxiliary space.

Each dressed particle carries a copy of the mode oscillator, so the mode energy is the
occupation-weighted expectation of -d^2/dq^2 / 2 + omega^2 q^2 / 2 and the photon number is
E_ph / omega - N / 2."""

from __future__ import annotations

from typing import Union

import numpy as np

from polaritonrdmft.common.types import NaturalOrbitalSource
from polaritonrdmft.exact import TwoBodyState
from polaritonrdmft.exact import photon_mode_energy as exact_photon_mode_energy
from polaritonrdmft.model import ModelSpec, mode_oscillator_matrix

State = Union[NaturalOrbitalSource, TwoBodyState]


def photon_mode_energy(state: State, model: ModelSpec, mode_index: int = 0) -> float:
    if isinstance(state, TwoBodyState):
        return exact_photon_mode_energy(state, model, mode_index)
    oscillator = mode_oscillator_matrix(model, state.grid, mode_index)
    orbitals = state.natural_orbitals()
    expectations = state.grid.volume_element * np.einsum("ip,ip->i", orbitals, (oscillator @ orbitals.T).T)
    return float(np.asarray(state.occupations) @ expectations)


def mode_occupation(state: State, model: ModelSpec, mode_index: int = 0) -> float:
    mode = model.modes[mode_index]
    return photon_mode_energy(state, model, mode_index) / mode.omega - 0.5 * model.n_electrons


def occupation_from_energy(photon_energy: float, omega: float, n_electrons: int) -> float:
    return photon_energy / omega - 0.5 * n_electrons
