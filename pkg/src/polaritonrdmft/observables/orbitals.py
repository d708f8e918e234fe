#!/usr/bin/env python
# -*- coding: utf-8 -*-

import numpy as np
import pandas as pd

from polaritonrdmft.common.types import NaturalOrbitalSource
from polaritonrdmft.spbasis import count_nodes


def natural_orbital_report(rdm: NaturalOrbitalSource, floor: float = 1e-6) -> pd.DataFrame:
    """Natural orbitals sorted by descending occupation.

    Columns: rank, index (position in the input ordering), occupation, nodes (sign changes
    along x), norm (grid norm) and max_overlap (largest overlap with any other orbital).
    `attrs["trace"]` holds sum n_i."""
    grid = rdm.grid
    occupations = np.asarray(rdm.occupations)
    orbitals = rdm.natural_orbitals()
    order = np.argsort(-occupations, kind="stable")
    orbitals = orbitals[order]

    overlap = grid.volume_element * orbitals @ orbitals.T
    off_diagonal = np.abs(overlap - np.diag(np.diag(overlap)))
    report = pd.DataFrame(
        {
            "rank": np.arange(1, len(order) + 1),
            "index": order,
            "occupation": occupations[order],
            "nodes": [count_nodes(orbital, grid, floor) for orbital in orbitals],
            "norm": np.sqrt(np.diag(overlap)),
            "max_overlap": off_diagonal.max(axis=1) if len(order) > 1 else np.zeros(len(order)),
        }
    )
    report.attrs["trace"] = float(occupations.sum())
    return report
