#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""Step-by-step convergence protocol for dressed calculations.

1. box length and spacing of the electronic part (grid HF) and of the photonic part (IP);
2. basis size of electronic HF in the IP basis, checked against grid HF;
3. basis size of dressed HF at zero coupling, checked against electronic HF plus the
   zero-point energy of the modes;
4. basis size of the configured method at the configured coupling, with a final box-length
   sanity series.

Every step produces a ledger entry with its checks. A failed consistency check stops the
protocol, and so does any failed step when `protocol.fail_fast` is set."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from polaritonrdmft.cli.runner import RunOutcome, execute
from polaritonrdmft.cli.series import SeriesReport, run_series
from polaritonrdmft.common.configs import RunConfig
from polaritonrdmft.common.errors import PolaritonError
from polaritonrdmft.file.saver import ArtifactSaver
from polaritonrdmft.observables import density_difference

logger = logging.getLogger(__name__)

REPORT_NAME = "protocol_report.json"


@dataclass
class Check:
    name: str
    value: float
    threshold: float
    passed: bool
    consistency: bool = False

    @classmethod
    def below(cls, name: str, value: Optional[float], threshold: float, consistency: bool = False) -> Check:
        value = math.nan if value is None else float(value)
        return cls(name, value, threshold, bool(value < threshold), consistency)

    def to_dict(self) -> Dict:
        return {
            "name": self.name,
            "value": None if math.isnan(self.value) else self.value,
            "threshold": None if math.isnan(self.threshold) else self.threshold,
            "passed": self.passed,
        }


@dataclass
class ProtocolStep:
    step: int
    name: str
    checks: List[Check] = field(default_factory=list)
    series: List[str] = field(default_factory=list)
    skipped: bool = False
    diagnostic: str = ""

    @property
    def passed(self) -> bool:
        return self.skipped or all(check.passed for check in self.checks)

    def to_dict(self) -> Dict:
        return {
            "step": self.step,
            "name": self.name,
            "passed": self.passed,
            "skipped": self.skipped,
            "diagnostic": self.diagnostic,
            "checks": [check.to_dict() for check in self.checks],
            "series": self.series,
        }


class Protocol:
    """Runs the protocol on a base configuration and keeps the ledger."""

    def __init__(self, config: RunConfig, saver: ArtifactSaver, jobs: int = 1) -> None:
        self._config = config
        self._saver = saver
        self._jobs = jobs
        self.steps: List[ProtocolStep] = []
        self.selected_ES: Optional[int] = None
        self._electronic_hf: Optional[RunOutcome] = None

    @property
    def passed(self) -> bool:
        return len(self.steps) == 4 and all(step.passed for step in self.steps)

    def _bare(self) -> RunConfig:
        return self._config.copy_with(cavity__omega=None, cavity__lambda=None, cavity__g_over_omega=None)

    def _series(self, config: RunConfig, variable: str, values: List, name: str, reference=None) -> SeriesReport:
        series_config = config.copy_with(
            series__variable=variable,
            series__values=list(values),
            series__reference=reference,
            series__eps_E=self._config["protocol.eps_E"],
            series__eps_rho=self._config["protocol.eps_rho"],
        )
        series_config.validate()
        report = run_series(series_config, self._jobs, self._saver, name)
        return report

    def _series_check(self, step: ProtocolStep, report: SeriesReport, name: str) -> None:
        step.series.append(name)
        value = report.converged_value
        found = math.nan if value is None else value
        step.checks.append(Check(f"{report.variable} converged", found, math.nan, value is not None))

    def _single(self, config: RunConfig) -> Optional[RunOutcome]:
        try:
            return execute(config)
        except PolaritonError as err:
            logger.error(f"Protocol reference run failed: {err}")
            partial = getattr(err, "partial", None)
            return partial if isinstance(partial, RunOutcome) else None

    def box_step(self) -> ProtocolStep:
        step = ProtocolStep(1, "box and spacing")
        electronic = self._bare().copy_with(solver__method="grid_hf", solver__M=None, solver__ES=None)
        for variable in ("Lx", "dx"):
            name = f"protocol_step1_{variable}.csv"
            report = self._series(electronic, variable, self._config[f"protocol.{variable}_values"], name)
            self._series_check(step, report, name)

        if self._config.is_dressed:
            photonic = self._config.copy_with(
                solver__method="ip", solver__M=None, solver__ES=3, cavity__lambda=0.0, cavity__g_over_omega=None
            )
            for variable in ("Lq", "dq"):
                name = f"protocol_step1_{variable}.csv"
                report = self._series(photonic, variable, self._config[f"protocol.{variable}_values"], name)
                self._series_check(step, report, name)
        return step

    def _basis_series(self, config: RunConfig, name: str) -> SeriesReport:
        values = [int(value) for value in self._config["protocol.ES_values"]]
        return self._series(config.copy_with(solver__M=None, solver__ES=max(values)), "ES", values, name, max(values))

    def _compare(self, step: ProtocolStep, label: str, a: Optional[RunOutcome], b: Optional[RunOutcome], shift: float = 0.0):
        energy = abs(a.energy - b.energy - shift) if a is not None and b is not None else None
        step.checks.append(Check.below(f"{label} energy", energy, self._config["protocol.consistency_E"], True))
        rho = None
        if a is not None and b is not None and a.densities is not None and b.densities is not None:
            rho = density_difference(a.densities, b.densities, interpolate=True).max_x
        step.checks.append(Check.below(f"{label} electronic density", rho, self._config["protocol.consistency_rho"], True))

    def basis_step(self) -> ProtocolStep:
        step = ProtocolStep(2, "electronic basis size")
        bare = self._bare()
        name = "protocol_step2_ES.csv"
        report = self._basis_series(bare.copy_with(solver__method="hf"), name)
        self._series_check(step, report, name)
        self._electronic_hf = report.last()

        grid_hf = self._single(bare.copy_with(solver__method="grid_hf", solver__M=None, solver__ES=None))
        self._compare(step, "HF basis vs grid HF", report.last(), grid_hf)
        if not step.passed:
            step.diagnostic = "The IP basis does not reproduce grid Hartree-Fock; extend protocol.ES_values."
        return step

    def zero_coupling_step(self) -> ProtocolStep:
        step = ProtocolStep(3, "dressed basis size at zero coupling")
        if not self._config.is_dressed:
            step.skipped = True
            return step
        uncoupled = self._config.copy_with(solver__method="hf", cavity__lambda=0.0, cavity__g_over_omega=None)
        name = "protocol_step3_ES.csv"
        report = self._basis_series(uncoupled, name)
        self._series_check(step, report, name)

        bare = self._electronic_hf if self._electronic_hf is not None else self._electronic_reference()
        model = uncoupled.model()
        zero_point = 0.5 * model.n_electrons * sum(mode.omega for mode in model.modes)
        self._compare(step, "dressed HF vs HF + zero point", report.last(), bare, zero_point)
        if not step.passed:
            step.diagnostic = (
                "Dressed HF at zero coupling does not separate into electronic HF and the oscillator zero "
                "point; the neglected exchange symmetry of the photon coordinate is the likely cause."
            )
        return step

    def _electronic_reference(self) -> Optional[RunOutcome]:
        values = [int(value) for value in self._config["protocol.ES_values"]]
        bare = self._bare().copy_with(solver__method="hf", solver__M=None, solver__ES=max(values))
        return self._single(bare)

    def coupled_step(self) -> ProtocolStep:
        step = ProtocolStep(4, "basis size at coupling")
        if not self._config.is_dressed:
            step.skipped = True
            return step
        method = self._config.method if self._config.method in ("hf", "rdmft") else "rdmft"
        coupled = self._config.copy_with(solver__method=method)
        name = "protocol_step4_ES.csv"
        report = self._basis_series(coupled, name)
        self._series_check(step, report, name)

        values = [int(value) for value in self._config["protocol.ES_values"]]
        self.selected_ES = int(report.converged_value) if report.converged_value is not None else max(values)
        sanity = coupled.copy_with(solver__M=None, solver__ES=self.selected_ES)
        name = "protocol_step4_Lx.csv"
        self._series_check(step, self._series(sanity, "Lx", self._config["protocol.Lx_values"], name), name)
        return step

    def run(self) -> List[ProtocolStep]:
        fail_fast = self._config["protocol.fail_fast"]
        for number, runner in enumerate((self.box_step, self.basis_step, self.zero_coupling_step, self.coupled_step), 1):
            logger.info(f"Protocol step {number}")
            step = runner()
            self.steps.append(step)
            logger.info(f"Protocol step {number} ({step.name}): {'passed' if step.passed else 'FAILED'}")
            consistency_failed = any(check.consistency and not check.passed for check in step.checks)
            if not step.passed and (fail_fast or consistency_failed):
                logger.error(f"Protocol stopped after step {number}: {step.diagnostic or 'checks failed'}")
                break
        self._saver.save_json(REPORT_NAME, self.to_dict())
        return self.steps

    def to_dict(self) -> Dict:
        return {
            "passed": self.passed,
            "selected_ES": self.selected_ES,
            "steps": [step.to_dict() for step in self.steps],
        }
