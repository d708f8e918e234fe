#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""Convergence series: one independent run per value of a single variable.

Rows report the energy change and the largest density change against the previous row and,
when `series.reference` is set, the largest density change against the reference row. The
first row meeting both thresholds is marked."""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional

import pandas as pd

from polaritonrdmft.cli.runner import RunOutcome, execute, write_outputs
from polaritonrdmft.common.configs import SERIES_VARIABLES, RunConfig
from polaritonrdmft.common.errors import ConfigError, PolaritonError
from polaritonrdmft.common.types import SeriesRow
from polaritonrdmft.file.saver import ArtifactSaver
from polaritonrdmft.observables import density_difference

logger = logging.getLogger(__name__)

SERIES_KEYS = {
    "Lx": "grid.Lx",
    "dx": "grid.dx",
    "Lq": "grid.Lq",
    "dq": "grid.dq",
    "ES": "solver.ES",
    "d": "system.separation",
    "g_over_omega": "cavity.g_over_omega",
}


def config_for(config: RunConfig, variable: str, value: float) -> RunConfig:
    """Copy of `config` with the series variable set to `value`."""
    if variable not in SERIES_KEYS:
        raise ConfigError(f"Unknown series variable {variable!r}, expected one of {tuple(SERIES_VARIABLES)}")
    overrides = {SERIES_KEYS[variable].replace(".", "__"): value}
    if variable == "ES":
        overrides["solver__M"] = None
    if variable == "g_over_omega":
        overrides["cavity__lambda"] = None
    derived = config.copy_with(**overrides)
    derived.validate()
    return derived


@dataclass(frozen=True, eq=False)
class SeriesReport:
    variable: str
    frame: pd.DataFrame
    outcomes: Dict[float, Optional[RunOutcome]]
    converged_value: Optional[float]

    @property
    def rows(self) -> List[SeriesRow]:
        return [SeriesRow(*row) for row in self.frame[list(SeriesRow._fields)].itertuples(index=False)]

    def outcome(self, value: float) -> Optional[RunOutcome]:
        return self.outcomes.get(float(value))

    def last(self) -> Optional[RunOutcome]:
        """Outcome of the largest series value."""
        return self.outcomes[max(self.outcomes)] if self.outcomes else None


def _max_density_change(a: Optional[RunOutcome], b: Optional[RunOutcome]) -> float:
    if a is None or b is None or a.densities is None or b.densities is None:
        return math.nan
    difference = density_difference(a.densities, b.densities, interpolate=True)
    return max(difference.max_x, difference.max_q)


def _run_row(
    config: RunConfig, variable: str, value: float, row_dir: Optional[Path], dryrun: bool = False
) -> Optional[RunOutcome]:
    row_config = config_for(config, variable, value)
    try:
        outcome = execute(row_config)
    except PolaritonError as err:
        logger.error(f"Series row {variable} = {value} failed: {err}")
        outcome = getattr(err, "partial", None)
        if not isinstance(outcome, RunOutcome):
            return None
    if row_dir is not None:
        write_outputs(outcome, ArtifactSaver(row_dir / f"{variable}={value:g}", dryrun), row_config)
    logger.info(f"Series row {variable} = {value}: E = {outcome.energy:.10f}, converged = {outcome.converged}")
    return outcome


def run_series(
    config: RunConfig,
    jobs: int = 1,
    saver: Optional[ArtifactSaver] = None,
    name: str = "series.csv",
) -> SeriesReport:
    """Run every value of `series.values`; failed rows are kept with nan energies.

    Rows are independent, so up to `jobs` of them run concurrently; the report is assembled
    afterwards in ascending order of the series value."""
    if "series.variable" not in config:
        raise ConfigError("A series needs [series] variable and values")
    variable = config["series.variable"]
    values = sorted({float(value) for value in config["series.values"]})
    if variable == "ES":
        values = [int(value) for value in values]
    reference = config.get("series.reference")
    if reference is not None and float(reference) not in {float(value) for value in values}:
        raise ConfigError(f"series.reference {reference} is not among series.values")

    with ThreadPoolExecutor(max_workers=max(1, jobs)) as executor:
        row_dir = saver.path(Path(name).stem) if saver is not None else None
        dryrun = saver is not None and saver.dryrun
        futures = [executor.submit(_run_row, config, variable, value, row_dir, dryrun) for value in values]
        results = [future.result() for future in futures]
    outcomes = {float(value): outcome for value, outcome in zip(values, results)}

    reference_outcome = outcomes.get(float(reference)) if reference is not None else None
    rows = []
    previous: Optional[RunOutcome] = None
    for value, outcome in zip(values, results):
        energy = outcome.energy if outcome is not None else math.nan
        previous_energy = previous.energy if previous is not None else math.nan
        rows.append(
            SeriesRow(
                float(value),
                energy,
                energy - previous_energy,
                _max_density_change(outcome, previous),
                _max_density_change(outcome, reference_outcome),
                outcome is not None and outcome.converged,
                outcome.wall_time if outcome is not None else math.nan,
            )
        )
        previous = outcome

    frame = pd.DataFrame(rows, columns=list(SeriesRow._fields))
    met = (
        frame["converged"]
        & (frame["delta_energy"].abs() < config["series.eps_E"])
        & (frame["delta_density"] < config["series.eps_rho"])
    )
    frame["threshold_met"] = False
    converged_value = None
    if met.any():
        first = int(met.to_numpy().nonzero()[0][0])
        frame.loc[first, "threshold_met"] = True
        converged_value = float(frame.loc[first, "value"])
        logger.info(f"Series over {variable} meets its thresholds at {converged_value}")
    else:
        thresholds = f"|dE| < {config['series.eps_E']}, drho < {config['series.eps_rho']}"
        logger.warning(f"Series over {variable} never meets {thresholds}")

    if saver is not None:
        # wall times vary from run to run and stay out of the table
        saver.save_table(name, frame.drop(columns=["wall_time"]))
        saver.save_json(f"{Path(name).stem}_timing.json", dict(zip(frame["value"], frame["wall_time"])))
    return SeriesReport(variable, frame, outcomes, converged_value)
