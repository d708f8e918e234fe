#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""Command line front-end.

    polaritonrdmft run --config he.toml
    polaritonrdmft series --config he_lx.toml --jobs 4
    polaritonrdmft protocol --config he.toml --profile desk
    polaritonrdmft scan --config h2_scan.toml
    polaritonrdmft inspect out/checkpoint.prdm

Exit status: 0 on success, 2 for configuration errors, 3 when a solver does not converge
(flagged outputs are still written), 4 when a resource budget is exceeded."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np

from polaritonrdmft.cli.protocol import Protocol
from polaritonrdmft.cli.runner import RunOutcome, execute, write_outputs
from polaritonrdmft.cli.scan import run_scan
from polaritonrdmft.cli.series import run_series
from polaritonrdmft.common.configs import PROFILES, RunConfig
from polaritonrdmft.common.errors import ConvergenceError, PolaritonError
from polaritonrdmft.file.container import read_container
from polaritonrdmft.file.saver import ArtifactSaver
from polaritonrdmft.helper.log import setup_logging

logger = logging.getLogger(__name__)

COMMANDS = ("run", "series", "protocol", "scan")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        "polaritonrdmft",
        description="Dressed Hartree-Fock, dressed RDMFT and exact references for electrons in a cavity.",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    parser.add_argument("--log-dir", default=None, help="mirror the log into a timestamped file below this directory")
    parser.add_argument("-v", "--verbose", action="store_true", default=False, help="log inner iterations")
    commands = parser.add_subparsers(dest="command", required=True)

    for command in COMMANDS:
        sub = commands.add_parser(command, formatter_class=argparse.ArgumentDefaultsHelpFormatter)
        sub.add_argument("--config", required=True, type=Path, help="TOML configuration file")
        sub.add_argument("--profile", choices=PROFILES, default=None, help="tolerance profile, overrides solver.profile")
        sub.add_argument("--out", type=Path, default=None, help="output directory, overrides output.directory")
        sub.add_argument("--max-memory", type=float, default=None, help="memory budget in GiB for exact solves")
        sub.add_argument("--jobs", type=int, default=1, help="concurrent series rows")

    inspect = commands.add_parser("inspect", help="dump the header and array summary of a checkpoint")
    inspect.add_argument("checkpoint", type=Path, help="container written by a run")
    return parser


def load_config(args: argparse.Namespace) -> RunConfig:
    config = RunConfig.from_file(args.config)
    overrides = {
        "solver__profile": args.profile,
        "output__directory": None if args.out is None else str(args.out),
        "solver__max_memory_gib": args.max_memory,
    }
    config = config.copy_with(**{key: value for key, value in overrides.items() if value is not None})
    config.validate()
    return config


def inspect_checkpoint(path: Path) -> Dict:
    header, arrays = read_container(path)
    summary = {}
    for name, array in arrays.items():
        entry = {"shape": list(array.shape), "dtype": array.dtype.str}
        if array.size:
            entry["min"] = float(np.min(array))
            entry["max"] = float(np.max(array))
        summary[name] = entry
    return {"header": header, "arrays": summary}


def command_run(config: RunConfig, saver: ArtifactSaver) -> int:
    try:
        outcome = execute(config)
    except ConvergenceError as err:
        if isinstance(err.partial, RunOutcome):
            write_outputs(err.partial, saver, config)
        raise
    write_outputs(outcome, saver, config)
    return 0


def command_series(config: RunConfig, saver: ArtifactSaver, jobs: int) -> int:
    report = run_series(config, jobs, saver)
    return 0 if report.frame["converged"].all() else 3


def command_protocol(config: RunConfig, saver: ArtifactSaver, jobs: int) -> int:
    protocol = Protocol(config, saver, jobs)
    protocol.run()
    if not protocol.passed and config["protocol.fail_fast"]:
        return 3
    return 0


def command_scan(config: RunConfig, saver: ArtifactSaver) -> int:
    report = run_scan(config, saver)
    return 0 if report.frame["converged"].all() else 3


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(args.log_dir, logging.DEBUG if args.verbose else logging.INFO)

    try:
        if args.command == "inspect":
            print(json.dumps(inspect_checkpoint(args.checkpoint), indent=2, sort_keys=True))
            return 0

        config = load_config(args)
        saver = ArtifactSaver(config["output.directory"])
        if args.command == "run":
            status = command_run(config, saver)
        elif args.command == "series":
            status = command_series(config, saver, args.jobs)
        elif args.command == "protocol":
            status = command_protocol(config, saver, args.jobs)
        else:
            status = command_scan(config, saver)
    except PolaritonError as err:
        logger.error(f"{type(err).__name__}: {err}")
        return err.exit_code

    logger.info(f"Wrote {len(saver.written)} files to {saver.directory}")
    return status


if __name__ == "__main__":
    sys.exit(main())
