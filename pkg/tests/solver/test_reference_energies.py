import numpy as np
import pytest
from conftest import COUPLED_BASIS, coupled_runs, oscillator_ground_level

from polaritonrdmft.exact import dressed_1rdm
from polaritonrdmft.grid import make_grid
from polaritonrdmft.model import ModelSpec, PhotonMode, PotentialSpec
from polaritonrdmft.observables import densities_from_rdm
from polaritonrdmft.solver import SCFSettings, solve
from polaritonrdmft.spbasis import build_integrals, ip_solve

DESK = SCFSettings.profile("desk")
HELIUM = ModelSpec(PotentialSpec.soft_helium())


def descending(occupations):
    return np.sort(np.asarray(occupations))[::-1]


def test_zero_coupling_dressed_hartree_fock_separates():
    # a stiff mode keeps the lowest dressed orbitals in the photon ground state
    omega = 5.0
    grid = make_grid([{"L": 10.0, "h": 0.25}, {"L": 4.0, "h": 0.2}])
    dressed = HELIUM.with_modes(PhotonMode(omega, 0.0))
    bare = solve(HELIUM, grid.subgrid(["x"]), 6, "hf", DESK)
    coupled = solve(dressed, grid, 6, "hf", DESK)

    level = oscillator_ground_level(grid.axes[1], omega)
    assert coupled.report.total == pytest.approx(bare.report.total + 2.0 * level, abs=1e-5)
    rho_dressed = densities_from_rdm(coupled.rdm).rho_x.values
    rho_bare = densities_from_rdm(bare.rdm).rho_x.values
    assert np.max(np.abs(rho_dressed - rho_bare)) < 1e-3


@pytest.mark.slow
def test_helium_mueller_basis_trend():
    grid = make_grid([{"L": 20.0, "h": 0.1}])
    full = ip_solve(HELIUM, grid, 2 * 40 - 2)
    energies = {}
    for ES in (20, 30, 40):
        basis = full.truncated(2 * ES - 2)
        result = solve(HELIUM, grid, basis.size, "mueller", DESK, basis=basis, integrals=build_integrals(basis, HELIUM))
        assert result.converged
        energies[ES] = result.report.total
    assert energies[40] == pytest.approx(-2.2427085, abs=5e-4)
    assert energies[30] == pytest.approx(energies[40], abs=5e-5)
    assert energies[20] >= min(energies[30], energies[40]) - 1e-6


@pytest.mark.slow
@pytest.mark.parametrize("g_over_omega", [0.1, 0.5, 1.0])
def test_coupled_energies_ordered(g_over_omega):
    runs = coupled_runs(False, g_over_omega)
    exact, rdmft, hf = runs.exact.energy, runs.rdmft.report.total, runs.hf.report.total
    assert runs.rdmft.converged and runs.hf.converged
    assert runs.rdmft.basis.size == COUPLED_BASIS
    assert exact <= rdmft + 1e-8
    assert rdmft <= hf + 1e-8
    if g_over_omega >= 0.2:
        assert rdmft - exact < hf - exact


@pytest.mark.slow
def test_helium_weak_coupling_occupations():
    runs = coupled_runs(False, 0.1)
    exact = dressed_1rdm(runs.exact, n_orbitals=3).occupations
    np.testing.assert_allclose(exact, [1.978, 0.020, 0.001], atol=1e-2)
    np.testing.assert_allclose(descending(runs.rdmft.rdm.occupations)[:3], [1.978, 0.020, 0.001], atol=1e-2)


@pytest.mark.slow
def test_helium_strong_coupling_occupations():
    n = descending(coupled_runs(False, 0.8).rdmft.rdm.occupations)
    assert n[0] == pytest.approx(1.85, abs=2e-2)
    assert n[1] == pytest.approx(0.14, abs=2e-2)


@pytest.mark.slow
def test_hydrogen_molecule_weak_coupling_occupations():
    n = descending(coupled_runs(True, 0.1).rdmft.rdm.occupations)
    np.testing.assert_allclose(n[:3], [1.878, 0.102, 0.015], atol=1e-2)
