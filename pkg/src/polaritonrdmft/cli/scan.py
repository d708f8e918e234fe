#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""Parameter scans over the bond length d or the coupling g/omega.

Values run in the given order. hf and rdmft rows start from the previous row's natural
orbitals unless `scan.warm_start` is false. Each row is compared with the zero-coupling
state at the same geometry."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional

import numpy as np
import pandas as pd

from polaritonrdmft.cli.runner import RunOutcome, execute
from polaritonrdmft.cli.series import config_for
from polaritonrdmft.common.configs import RunConfig
from polaritonrdmft.common.errors import ConfigError, PolaritonError
from polaritonrdmft.common.types import ParabolaMinimum
from polaritonrdmft.exact import parabola_minimum
from polaritonrdmft.file.saver import ArtifactSaver
from polaritonrdmft.model import nuclear_repulsion
from polaritonrdmft.observables import density_difference

logger = logging.getLogger(__name__)

N_REPORTED_OCCUPATIONS = 3
WARM_METHODS = ("hf", "rdmft")


@dataclass(frozen=True, eq=False)
class ScanReport:
    variable: str
    frame: pd.DataFrame
    minimum: Optional[ParabolaMinimum] = None

    def to_dict(self) -> Dict:
        data = {"variable": self.variable, "rows": len(self.frame), "converged": bool(self.frame["converged"].all())}
        if self.minimum is not None:
            data["minimum"] = {"position": self.minimum.position, "value": self.minimum.value}
        return data


def _attempt(config: RunConfig, initial=None) -> Optional[RunOutcome]:
    try:
        return execute(config, initial)
    except PolaritonError as err:
        logger.error(f"Scan row failed: {err}")
        partial = getattr(err, "partial", None)
        return partial if isinstance(partial, RunOutcome) else None


def _uncoupled(config: RunConfig) -> RunConfig:
    return config.copy_with(cavity__lambda=0.0, cavity__g_over_omega=None)


def _occupations(outcome: Optional[RunOutcome]) -> List[float]:
    values = [math.nan] * N_REPORTED_OCCUPATIONS
    if outcome is not None and outcome.state is not None:
        ordered = np.sort(np.asarray(outcome.state.occupations))[::-1]
        for index, occupation in enumerate(ordered[:N_REPORTED_OCCUPATIONS]):
            values[index] = float(occupation)
    return values


def _max_delta_rho(outcome: Optional[RunOutcome], reference: Optional[RunOutcome]) -> float:
    if outcome is None or reference is None or outcome.densities is None or reference.densities is None:
        return math.nan
    return density_difference(outcome.densities, reference.densities).max_x


def _photon_number(outcome: Optional[RunOutcome]) -> float:
    if outcome is None:
        return math.nan
    return float(outcome.report.get("mode_occupation", math.nan))


def run_scan(config: RunConfig, saver: Optional[ArtifactSaver] = None, name: str = "scan.csv") -> ScanReport:
    """One row per scan value with energy, photon number, leading occupations and the largest
    electronic density change against zero coupling; d scans also report the nuclear repulsion
    and the parabolic minimum of the total energy."""
    if "scan.variable" not in config or not config.get("scan.values"):
        raise ConfigError("A scan needs [scan] variable and a non-empty values list")
    variable = config["scan.variable"]
    warm = config["scan.warm_start"] and config.method in WARM_METHODS

    rows = []
    previous: Optional[RunOutcome] = None
    reference: Optional[RunOutcome] = None
    for value in config["scan.values"]:
        row_config = config_for(config, variable, float(value))
        initial = previous.rdm if warm and previous is not None else None
        outcome = _attempt(row_config, initial)

        if row_config.is_dressed and (variable == "d" or reference is None):
            reference = _attempt(_uncoupled(row_config))
        model = row_config.model()
        repulsion = nuclear_repulsion(model.potential)
        energy = outcome.energy if outcome is not None else math.nan
        row = {
            "value": float(value),
            "energy": energy,
            "repulsion": repulsion,
            "total": energy + repulsion,
            "photon_number": _photon_number(outcome),
        }
        row.update({f"n{k + 1}": n for k, n in enumerate(_occupations(outcome))})
        row["max_delta_rho"] = _max_delta_rho(outcome, reference)
        row["converged"] = outcome is not None and outcome.converged

        if config["scan.exact"]:
            exact = _attempt(row_config.copy_with(solver__method="exact"))
            row["energy_exact"] = exact.energy if exact is not None else math.nan
            row["photon_number_exact"] = _photon_number(exact)

        logger.info(f"Scan {variable} = {value}: E = {energy:.10f}, N_ph = {row['photon_number']:.6e}")
        rows.append(row)
        if outcome is not None:
            previous = outcome

    frame = pd.DataFrame(rows)
    minimum = None
    if variable == "d" and frame["total"].notna().sum() >= 1:
        valid = frame[frame["total"].notna()]
        minimum = parabola_minimum(valid["value"], valid["total"])
        logger.info(f"Bond minimum at d = {minimum.position:.4f}, E = {minimum.value:.10f}")

    report = ScanReport(variable, frame, minimum)
    if saver is not None:
        saver.save_table(name, frame)
        saver.save_json("scan_summary.json", report.to_dict())
    return report
