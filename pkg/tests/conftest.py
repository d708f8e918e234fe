import functools
from collections import namedtuple

import numpy as np
import pytest
import scipy.linalg

from polaritonrdmft.exact import exact_ground_state
from polaritonrdmft.grid import make_grid, second_derivative_matrix
from polaritonrdmft.model import ModelSpec, PhotonMode, PotentialSpec
from polaritonrdmft.solver import OneRDM, SCFSettings, solve
from polaritonrdmft.spbasis import build_integrals, ip_solve

OMEGA_HE = 0.5535
OMEGA_H2 = 0.4194
H2_BOND = 1.628
COUPLED_BASIS = 24

CoupledRuns = namedtuple("CoupledRuns", ["model", "grid", "exact", "rdmft", "hf"])


def oscillator_ground_level(axis, omega):
    """Lowest eigenvalue of the discretized oscillator on `axis`."""
    matrix = -0.5 * second_derivative_matrix(axis.n_points, axis.spacing).toarray()
    matrix += np.diag(0.5 * omega**2 * axis.points**2)
    return scipy.linalg.eigvalsh(matrix)[0]


def reduced_dressed_grid():
    return make_grid([{"L": 10.0, "h": 0.25}, {"L": 10.0, "h": 0.5}])


@functools.lru_cache(maxsize=None)
def coupled_runs(molecule: bool, g_over_omega: float, separation: float = H2_BOND) -> CoupledRuns:
    """Exact, dressed RDMFT and dressed HF ground states of He (or H2) on the reduced 4D grid.

    Cached, so the modules sharing a coupling pay for it once."""
    if molecule:
        potential, omega = PotentialSpec.soft_hydrogen_molecule(separation), OMEGA_H2
    else:
        potential, omega = PotentialSpec.soft_helium(), OMEGA_HE
    model = ModelSpec(potential, 2, (PhotonMode.from_g_over_omega(g_over_omega, omega),))
    grid = reduced_dressed_grid()
    settings = SCFSettings.profile("desk")
    exact = exact_ground_state(model, grid).ground
    rdmft = solve(model, grid, COUPLED_BASIS, "mueller", settings)
    hf = solve(model, grid, COUPLED_BASIS, "hf", settings, basis=rdmft.basis, integrals=rdmft.integrals)
    return CoupledRuns(model, grid, exact, rdmft, hf)


def random_rdm(basis, n_electrons: int = 2, seed: int = 0) -> OneRDM:
    """Orthogonal coefficients and interior occupations summing to N."""
    rng = np.random.default_rng(seed)
    Q, _ = np.linalg.qr(rng.normal(size=(basis.size, basis.size)))
    weights = rng.uniform(0.2, 1.0, size=basis.size)
    occupations = n_electrons * weights / weights.sum()
    while occupations.max() >= 2.0:
        occupations = 0.5 * (occupations + n_electrons / basis.size)
    return OneRDM(basis, Q, occupations)


@pytest.fixture
def helium() -> ModelSpec:
    return ModelSpec(PotentialSpec.soft_helium())


@pytest.fixture
def dressed_helium() -> ModelSpec:
    return ModelSpec(PotentialSpec.soft_helium(), 2, (PhotonMode(OMEGA_HE, 0.3),))


@pytest.fixture
def x_grid():
    return make_grid([{"L": 12.0, "h": 0.3}])


@pytest.fixture
def xq_grid():
    return make_grid([{"L": 8.0, "h": 0.4}, {"L": 8.0, "h": 0.5}])


@pytest.fixture
def bare_basis(helium, x_grid):
    return ip_solve(helium, x_grid, 4)


@pytest.fixture
def dressed_basis(dressed_helium, xq_grid):
    return ip_solve(dressed_helium, xq_grid, 4)


@pytest.fixture
def dressed_integrals(dressed_basis, dressed_helium):
    return build_integrals(dressed_basis, dressed_helium)


@pytest.fixture
def bare_integrals(bare_basis, helium):
    return build_integrals(bare_basis, helium)
