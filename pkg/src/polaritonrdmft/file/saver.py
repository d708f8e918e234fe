#!/usr/bin/env python3

"""This module implements the ArtifactSaver class which is responsible for writing the result
files of a run (JSON reports, CSV tables, densities) into its output directory."""

import json
import logging
from pathlib import Path
from typing import Any, Callable, List, Mapping, Optional, Union

import numpy as np
import pandas as pd

from polaritonrdmft.common.types import DensityBundle
from polaritonrdmft.file.container import atomic_write_bytes
from polaritonrdmft.grid import Field

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"


def _json_default(value: Any):
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, Path):
        return str(value)
    raise TypeError(f"Cannot serialize {type(value).__name__}")


def field_frame(field: Field) -> pd.DataFrame:
    """One row per grid point: one coordinate column per axis, then `value`."""
    grid = field.grid
    columns = {name: coordinate.ravel() for name, coordinate in zip(grid.names, grid.mesh())}
    columns["value"] = np.asarray(field.values).ravel()
    return pd.DataFrame(columns)


class ArtifactSaver:
    def __init__(self, directory: Union[str, Path], dryrun: bool = False) -> None:
        self._directory = Path(directory)
        self._dryrun = dryrun
        self.written: List[Path] = []

    @property
    def directory(self) -> Path:
        return self._directory

    @property
    def dryrun(self) -> bool:
        return self._dryrun

    def path(self, name: str) -> Path:
        return self._directory / name

    def _write_text(self, name: str, text: str) -> Path:
        path = self.path(name)
        if self._dryrun:
            print(f"*************************************\n[Dryrun] {path}\n*************************************")
            print(text[:2000])
        else:
            atomic_write_bytes(path, text.encode("utf-8"))
            logger.debug(f"Wrote {path}")
        self.written.append(path)
        return path

    def save_checkpoint(self, writer: Callable[[Path], None], path: Union[str, Path]) -> Path:
        """Hands `path` to `writer`, which writes the binary container itself."""
        path = Path(path)
        if self._dryrun:
            print(f"*************************************\n[Dryrun] {path}\n*************************************")
        else:
            writer(path)
            logger.debug(f"Wrote {path}")
        self.written.append(path)
        return path

    def save_json(self, name: str, data: Mapping) -> Path:
        return self._write_text(name, json.dumps(data, indent=2, sort_keys=True, default=_json_default) + "\n")

    def save_table(self, name: str, frame: pd.DataFrame) -> Path:
        return self._write_text(name, frame.to_csv(index=False, float_format=FLOAT_FORMAT))

    def save_field(self, name: str, field: Field) -> Path:
        return self.save_table(name, field_frame(field))

    def save_densities(self, bundle: DensityBundle, prefix: str = "") -> List[Path]:
        paths = [self.save_field(f"{prefix}rho_x.csv", bundle.rho_x)]
        if bundle.rho_q is not None:
            paths.append(self.save_field(f"{prefix}rho_q.csv", bundle.rho_q))
        if bundle.rho_xq is not None:
            paths.append(self.save_field(f"{prefix}rho_xq.csv", bundle.rho_xq))
        return paths

    def save_natural_orbitals(
        self, report: pd.DataFrame, bundle: DensityBundle, name: str = "natural_orbitals.csv", limit: Optional[int] = None
    ) -> Path:
        """Long table of the natural-orbital marginals next to occupation and node count.

        The `index` column of `report` locates each orbital among the marginals of `bundle`."""
        rows = []
        n_rows = len(report) if limit is None else min(limit, len(report))
        for position in range(n_rows):
            entry = report.iloc[position]
            index = int(entry["index"])
            marginals = [("x", bundle.rho_x.grid.points(0), bundle.orbital_x)]
            if bundle.orbital_q is not None:
                marginals.append(("q", bundle.rho_q.grid.points(0), bundle.orbital_q))
            for axis, points, values in marginals:
                if len(values) <= index:
                    continue
                rows.append(
                    pd.DataFrame(
                        {
                            "rank": int(entry["rank"]),
                            "occupation": float(entry["occupation"]),
                            "nodes": int(entry["nodes"]),
                            "axis": axis,
                            "position": points,
                            "density": values[index],
                        }
                    )
                )
        frame = pd.concat(rows, ignore_index=True) if rows else pd.DataFrame(report)
        return self.save_table(name, frame)
