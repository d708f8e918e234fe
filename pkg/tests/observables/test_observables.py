import numpy as np
import pytest
from conftest import OMEGA_HE, random_rdm

from polaritonrdmft.common.errors import GridMismatch
from polaritonrdmft.exact import densities, dressed_1rdm, exact_ground_state
from polaritonrdmft.grid import make_grid
from polaritonrdmft.model import PhotonMode
from polaritonrdmft.observables import (
    densities_from_rdm,
    density_difference,
    mode_occupation,
    natural_orbital_report,
    occupation_from_energy,
    photon_mode_energy,
)
from polaritonrdmft.solver import MuellerFunctional, OneRDM, energy, solve
from polaritonrdmft.spbasis import build_integrals, ip_solve


def test_bare_density_counts_electrons(bare_basis):
    bundle = densities_from_rdm(random_rdm(bare_basis, seed=1))
    assert not bundle.is_dressed
    assert bundle.electron_count() == pytest.approx(2.0, abs=1e-10)
    assert bundle.orbital_x.shape == (4, bare_basis.grid.size)


def test_dressed_marginals(dressed_basis):
    bundle = densities_from_rdm(random_rdm(dressed_basis, seed=2))
    grid = dressed_basis.grid
    assert bundle.is_dressed
    assert bundle.electron_count() == pytest.approx(2.0, abs=1e-10)
    assert grid.spacings[1] * bundle.rho_q.values.sum() == pytest.approx(2.0, abs=1e-10)
    assert bundle.orbital_x.shape == (4, grid.shape[0])
    assert bundle.orbital_q.shape == (4, grid.shape[1])
    np.testing.assert_allclose(grid.spacings[0] * bundle.orbital_x.sum(axis=1), 1.0, atol=1e-10)


def test_density_difference_of_itself(dressed_basis):
    bundle = densities_from_rdm(OneRDM.aufbau(dressed_basis))
    difference = density_difference(bundle, bundle)
    assert difference.max_x == 0.0
    assert difference.max_q == 0.0


def test_density_difference_needs_same_grid(helium):
    a = densities_from_rdm(OneRDM.aufbau(ip_solve(helium, make_grid([{"L": 12.0, "h": 0.3}]), 2)))
    b = densities_from_rdm(OneRDM.aufbau(ip_solve(helium, make_grid([{"L": 14.0, "h": 0.1}]), 2)))
    with pytest.raises(GridMismatch):
        density_difference(a, b)
    interpolated = density_difference(a, b, interpolate=True)
    assert interpolated.max_x < 5e-3
    assert interpolated.delta_q is None


def test_bare_against_dressed(bare_basis, dressed_basis):
    bare = densities_from_rdm(OneRDM.aufbau(bare_basis))
    dressed = densities_from_rdm(OneRDM.aufbau(dressed_basis))
    with pytest.raises(GridMismatch):
        density_difference(dressed, bare)


def test_exact_density_agrees_with_reconstruction(helium, x_grid):
    state = exact_ground_state(helium, x_grid).ground
    reconstructed = densities_from_rdm(dressed_1rdm(state))
    assert density_difference(densities(state), reconstructed).max_x < 1e-10


def test_photon_number_vanishes_without_coupling(helium, xq_grid):
    model = helium.with_modes(PhotonMode(OMEGA_HE, 0.0))
    basis = ip_solve(model, xq_grid, 4)
    rdm = OneRDM.aufbau(basis)
    assert mode_occupation(rdm, model) == pytest.approx(0.0, abs=1e-2)
    report = energy(rdm, build_integrals(basis, model), MuellerFunctional())
    assert photon_mode_energy(rdm, model) == pytest.approx(report.photon_mode_energy, abs=1e-10)


def test_photon_number_grows_with_coupling(helium, xq_grid):
    numbers = []
    for lam in (0.0, 0.5):
        model = helium.with_modes(PhotonMode(OMEGA_HE, lam))
        numbers.append(mode_occupation(OneRDM.aufbau(ip_solve(model, xq_grid, 2)), model))
    assert numbers[1] > numbers[0]


def test_occupation_from_energy():
    assert occupation_from_energy(1.0, 0.5, 2) == pytest.approx(1.0)
    assert occupation_from_energy(0.5535, 0.5535, 2) == pytest.approx(0.0)


def test_natural_orbital_report_sorted(bare_basis):
    rdm = OneRDM(bare_basis, np.eye(4), np.array([0.01, 1.95, 0.03, 0.01]))
    report = natural_orbital_report(rdm)
    assert list(report.columns) == ["rank", "index", "occupation", "nodes", "norm", "max_overlap"]
    assert list(report["index"]) == [1, 2, 0, 3]
    assert list(report["rank"]) == [1, 2, 3, 4]
    assert report["occupation"].is_monotonic_decreasing
    assert list(report["nodes"]) == [1, 2, 0, 3]
    np.testing.assert_allclose(report["norm"], 1.0, atol=1e-10)
    assert report["max_overlap"].max() < 1e-10
    assert report.attrs["trace"] == pytest.approx(2.0)


@pytest.mark.slow
def test_scf_density_close_to_exact(helium):
    grid = make_grid([{"L": 16.0, "h": 0.2}])
    exact = densities(exact_ground_state(helium, grid).ground)
    rdmft = densities_from_rdm(solve(helium, grid, 8, "mueller").rdm)
    assert density_difference(exact, rdmft).max_x < 2e-2
