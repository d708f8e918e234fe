#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""Execution of a single configured run and emission of its artifacts.

`execute` only computes; `write_outputs` only writes. Runs that stop early raise a
ConvergenceError whose `partial` is a RunOutcome flagged `converged = False`, so callers can
still emit the flagged artifacts."""

from __future__ import annotations

import dataclasses
import hashlib
import json
import logging
import os
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, Optional, Tuple

import numpy as np
import pandas as pd

from polaritonrdmft.common.configs import RunConfig
from polaritonrdmft.common.errors import CheckpointError, ConvergenceError, NoConvergence
from polaritonrdmft.common.types import DensityBundle, NaturalOrbitalSource
from polaritonrdmft.exact import LanczosResult, LanczosSettings, densities, dressed_1rdm, exact_ground_state
from polaritonrdmft.file.container import write_container
from polaritonrdmft.file.saver import ArtifactSaver
from polaritonrdmft.grid import UniformGrid
from polaritonrdmft.model import ModelSpec
from polaritonrdmft.observables import densities_from_rdm, mode_occupation, natural_orbital_report, photon_mode_energy
from polaritonrdmft.solver import OneRDM, SCFResult, SCFSettings, grid_hartree_fock, solve
from polaritonrdmft.solver.grid_hf import GridHFResult
from polaritonrdmft.spbasis import IntegralTable, OrbitalSet, build_integrals, count_nodes, ip_solve

logger = logging.getLogger(__name__)

CACHE_ENV = "POLARITON_RDMFT_CACHE"
CHECKPOINT_NAME = "checkpoint.prdm"
EXACT_ORBITALS = 10


@dataclass(frozen=True, eq=False)
class RunOutcome:
    """Everything one run produces.

    Attributes:
        method (str): solver.method of the run.
        energy (float): total energy, nan if the run produced none.
        converged (bool): False for partial results.
        report (Dict): content of energy_report.json.
        densities (Optional[DensityBundle]): densities with per-orbital marginals.
        state (Optional[NaturalOrbitalSource]): source of natural_orbitals.csv.
        rdm (Optional[OneRDM]): basis-set 1RDM, reused for warm starts.
        tables (Dict[str, pd.DataFrame]): extra CSV tables by file name.
        checkpoint (Optional[Callable[[Path], None]]): writes the checkpoint container.
    """

    method: str
    energy: float
    converged: bool
    report: Dict
    densities: Optional[DensityBundle] = None
    state: Optional[NaturalOrbitalSource] = None
    rdm: Optional[OneRDM] = None
    tables: Dict[str, pd.DataFrame] = field(default_factory=dict)
    checkpoint: Optional[Callable[[Path], None]] = None
    wall_time: float = 0.0

    def flagged(self, converged: bool) -> RunOutcome:
        report = dict(self.report, converged=converged)
        return dataclasses.replace(self, converged=converged, report=report)


def scf_settings(config: RunConfig) -> SCFSettings:
    return SCFSettings.profile(
        config["solver.profile"],
        eps_E=config.get("solver.eps_E"),
        eps_rho=config.get("solver.eps_rho"),
        eps_Lambda=config.get("solver.eps_Lambda"),
        eps_mu=config.get("solver.eps_mu"),
        max_outer=config["solver.max_outer"],
        max_orbital=config["solver.max_orbital"],
        max_occupation=config["solver.max_occupation"],
        mixing=config["solver.mixing"],
        n_floor=config["solver.n_floor"],
    )


def lanczos_settings(config: RunConfig) -> LanczosSettings:
    eps_E = config.get("solver.eps_E", scf_settings(config).eps_E)
    return LanczosSettings(eps_E=eps_E, max_memory_gib=config["solver.max_memory_gib"], seed=config["solver.seed"])


def cache_key(model: ModelSpec, grid: UniformGrid, size: int) -> str:
    payload = json.dumps({"model": model.to_dict(), "grid": grid.to_dict(), "size": size}, sort_keys=True)
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def basis_and_integrals(model: ModelSpec, grid: UniformGrid, size: int) -> Tuple[OrbitalSet, IntegralTable]:
    """IP basis and its integral table, read from and stored into $POLARITON_RDMFT_CACHE when set."""
    cache_dir = os.environ.get(CACHE_ENV)
    if not cache_dir:
        basis = ip_solve(model, grid, size)
        return basis, build_integrals(basis, model)

    key = cache_key(model, grid, size)
    basis_path = Path(cache_dir) / f"{key}.basis"
    table_path = Path(cache_dir) / f"{key}.integrals"
    if basis_path.exists() and table_path.exists():
        try:
            basis = OrbitalSet.load(basis_path)
            integrals = IntegralTable.load(table_path)
            integrals.check_basis(basis.fingerprint())
            logger.info(f"Reusing cached basis and integrals {key[:12]}")
            return basis, integrals
        except CheckpointError as err:
            logger.warning(f"Ignoring unreadable cache entry {key[:12]}: {err}")

    basis = ip_solve(model, grid, size)
    integrals = build_integrals(basis, model)
    basis.save(basis_path, model)
    integrals.save(table_path)
    return basis, integrals


def _ip_table(basis: OrbitalSet) -> pd.DataFrame:
    return pd.DataFrame(
        {
            "index": np.arange(basis.size),
            "eigenvalue": basis.eigenvalues,
            "nodes": [count_nodes(orbital, basis.grid) for orbital in basis.orbitals],
        }
    )


def _run_ip(config: RunConfig, model: ModelSpec, grid: UniformGrid) -> RunOutcome:
    basis = ip_solve(model, grid, config.basis_size())
    rdm = OneRDM.aufbau(basis)
    e_ip = 2.0 * float(np.sum(basis.eigenvalues[: basis.n_occupied]))
    report = {"method": "ip", "total": e_ip, "eigenvalues": basis.eigenvalues, "converged": True}
    return RunOutcome(
        "ip",
        e_ip,
        True,
        report,
        densities=densities_from_rdm(rdm),
        state=rdm,
        rdm=rdm,
        tables={"ip_eigenvalues.csv": _ip_table(basis)},
        checkpoint=lambda path: basis.save(path, model),
    )


def _scf_outcome(result: SCFResult, model: ModelSpec, settings: SCFSettings, method: str) -> RunOutcome:
    report = {"method": method, **result.report.to_dict(), "basis_size": result.basis.size}
    if result.hf_report is not None:
        report["hf_total"] = result.hf_report.total
    report["occupations"] = np.sort(result.rdm.occupations)[::-1]
    return RunOutcome(
        method,
        result.report.total,
        result.converged,
        report,
        densities=densities_from_rdm(result.rdm),
        state=result.rdm,
        rdm=result.rdm,
        tables={"scf_history.csv": pd.DataFrame({"iteration": np.arange(len(result.history)), "energy": result.history})},
        checkpoint=lambda path: result.rdm.save(path, model, settings),
    )


def _run_scf(config: RunConfig, model: ModelSpec, grid: UniformGrid, initial: Optional[OneRDM]) -> RunOutcome:
    settings = scf_settings(config)
    basis, integrals = basis_and_integrals(model, grid, config.basis_size())
    functional = "hf" if config.method == "hf" else "mueller"
    try:
        result = solve(model, grid, basis.size, functional, settings, basis, integrals, initial)
    except ConvergenceError as err:
        if isinstance(err.partial, SCFResult):
            raise NoConvergence(str(err), partial=_scf_outcome(err.partial, model, settings, config.method)) from err
        raise
    return _scf_outcome(result, model, settings, config.method)


def _grid_hf_outcome(result: GridHFResult, model: ModelSpec) -> RunOutcome:
    report = {"method": "grid_hf", **result.report.to_dict(), "eigenvalues": result.eigenvalues}

    def checkpoint(path: Path) -> None:
        metadata = {"grid": result.grid.to_dict(), "model": model.to_dict(), "model_hash": model.fingerprint()}
        write_container(path, "grid_hf", {"orbitals": result.orbitals, "eigenvalues": result.eigenvalues}, metadata)

    return RunOutcome(
        "grid_hf",
        result.report.total,
        result.report.converged,
        report,
        densities=densities_from_rdm(result),
        state=result,
        checkpoint=checkpoint,
    )


def _run_grid_hf(config: RunConfig, model: ModelSpec, grid: UniformGrid) -> RunOutcome:
    try:
        result = grid_hartree_fock(model, grid, scf_settings(config))
    except ConvergenceError as err:
        if isinstance(err.partial, GridHFResult):
            raise NoConvergence(str(err), partial=_grid_hf_outcome(err.partial, model)) from err
        raise
    return _grid_hf_outcome(result, model)


def _run_exact(config: RunConfig, model: ModelSpec, grid: UniformGrid) -> RunOutcome:
    try:
        spectrum = exact_ground_state(model, grid, config["solver.n_states"], lanczos_settings(config))
    except ConvergenceError as err:
        if isinstance(err.partial, LanczosResult):
            energies = np.asarray(err.partial.energies)
            report = {"method": "exact", "total": float(energies[0]), "energies": energies, "converged": False}
            raise NoConvergence(str(err), partial=RunOutcome("exact", float(energies[0]), False, report)) from err
        raise

    ground = spectrum.ground
    one_rdm = dressed_1rdm(ground, config.get("solver.M", EXACT_ORBITALS))
    marginals = densities_from_rdm(one_rdm)
    bundle = dataclasses.replace(densities(ground), orbital_x=marginals.orbital_x, orbital_q=marginals.orbital_q)
    report = {
        "method": "exact",
        "total": ground.energy,
        "energies": spectrum.energies,
        "occupations": one_rdm.occupations,
        "trace": one_rdm.trace,
        "listed_trace": one_rdm.listed_trace,
        "converged": True,
    }
    if len(spectrum.energies) > 1:
        report["gap"] = spectrum.gap
    if model.is_dressed:
        report["photon_mode_energy"] = sum(photon_mode_energy(ground, model, k) for k in range(model.n_modes))
        report["mode_occupation"] = sum(mode_occupation(ground, model, k) for k in range(model.n_modes))

    def checkpoint(path: Path) -> None:
        metadata = {"grid": grid.to_dict(), "model": model.to_dict(), "model_hash": model.fingerprint()}
        write_container(path, "two_body_state", {"values": ground.values, "energies": spectrum.energies}, metadata)

    return RunOutcome("exact", ground.energy, True, report, densities=bundle, state=one_rdm, checkpoint=checkpoint)


def execute(config: RunConfig, initial: Optional[OneRDM] = None) -> RunOutcome:
    """Run the configured method. `initial` warm-starts hf and rdmft runs.

    Raises:
        ConfigError: for inconsistent configurations.
        NoConvergence: with a flagged RunOutcome as `partial` where one exists.
        ResourceError: when a memory budget is exceeded.
    """
    model = config.model()
    grid = config.grid(model.n_modes)
    start = time.perf_counter()
    logger.info(f"Running {config.method} on {grid.shape} grid, model {model.fingerprint()[:12]}")

    try:
        if config.method == "exact":
            outcome = _run_exact(config, model, grid)
        elif config.method == "ip":
            outcome = _run_ip(config, model, grid)
        elif config.method == "grid_hf":
            outcome = _run_grid_hf(config, model, grid)
        else:
            outcome = _run_scf(config, model, grid, initial)
    except ConvergenceError as err:
        if isinstance(err.partial, RunOutcome):
            err.partial = dataclasses.replace(err.partial.flagged(False), wall_time=time.perf_counter() - start)
        raise

    outcome = dataclasses.replace(outcome, wall_time=time.perf_counter() - start)
    logger.info(f"{config.method}: E = {outcome.energy:.10f} in {outcome.wall_time:.1f} s")
    return outcome


def write_outputs(outcome: RunOutcome, saver: ArtifactSaver, config: RunConfig) -> None:
    """energy_report.json, densities, natural_orbitals.csv, extra tables and the checkpoint."""
    formats = config["output.formats"]
    if "json" in formats:
        saver.save_json("energy_report.json", outcome.report)
    if "csv" in formats:
        if outcome.densities is not None:
            saver.save_densities(outcome.densities)
            if outcome.state is not None:
                saver.save_natural_orbitals(natural_orbital_report(outcome.state), outcome.densities)
        for name, table in outcome.tables.items():
            saver.save_table(name, table)
    if outcome.checkpoint is not None:
        path = Path(config.get("solver.checkpoint", saver.path(CHECKPOINT_NAME)))
        saver.save_checkpoint(outcome.checkpoint, path)
