import numpy as np
import pytest
from conftest import OMEGA_HE, random_rdm

from polaritonrdmft.common.errors import BasisMismatch, ConfigError
from polaritonrdmft.grid import second_derivative_matrix
from polaritonrdmft.model import PhotonMode
from polaritonrdmft.solver import (
    AbstractFunctional,
    HartreeFockFunctional,
    MuellerFunctional,
    OneRDM,
    coulomb_matrix,
    energy,
    exchange_matrix,
    natural_orbital_integrals,
    occupation_gradient,
    total_energy,
)
from polaritonrdmft.spbasis import build_integrals, ip_solve
from polaritonrdmft.tests.oracles import central_difference, double_loop_energy


@pytest.mark.parametrize("functional", [MuellerFunctional(), HartreeFockFunctional()])
def test_matches_double_loop(dressed_basis, dressed_integrals, functional):
    rdm = random_rdm(dressed_basis, seed=7)
    expected = double_loop_energy(rdm, dressed_integrals, functional)
    assert total_energy(rdm, dressed_integrals, functional) == pytest.approx(expected, abs=1e-10)


def test_report_is_consistent(dressed_basis, dressed_integrals):
    rdm = random_rdm(dressed_basis, seed=1)
    report = energy(rdm, dressed_integrals, MuellerFunctional())
    assert report.total == pytest.approx(total_energy(rdm, dressed_integrals, MuellerFunctional()), abs=1e-12)
    data = report.to_dict()
    assert data["total"] == report.total
    assert data["one_body"] == pytest.approx(report.kinetic + report.external)
    assert data["functional"] == "mueller"


def test_occupation_gradient_matches_finite_differences(dressed_basis, dressed_integrals):
    rdm = random_rdm(dressed_basis, seed=2)
    functional = MuellerFunctional()
    gradient = occupation_gradient(rdm, dressed_integrals, functional)

    def by_occupations(n):
        return total_energy(rdm.with_occupations(n), dressed_integrals, functional)

    def by_angles(alpha):
        return by_occupations(2.0 * np.sin(alpha) ** 2)

    angles = np.arcsin(np.sqrt(rdm.occupations / 2.0))
    np.testing.assert_allclose(gradient.dE_dn, central_difference(by_occupations, rdm.occupations), atol=1e-7)
    np.testing.assert_allclose(gradient.dE_dalpha, central_difference(by_angles, angles), atol=1e-7)


def test_single_orbital_exchange_cancels_half_hartree(bare_basis, bare_integrals):
    report = energy(OneRDM.aufbau(bare_basis), bare_integrals, HartreeFockFunctional())
    assert report.xc == pytest.approx(-0.5 * report.hartree, abs=1e-12)


def test_aufbau_energy_closed_form(bare_basis, bare_integrals):
    rdm = OneRDM.aufbau(bare_basis)
    no = natural_orbital_integrals(rdm, bare_integrals)
    expected = 2.0 * no.h[0] + no.J[0, 0]
    assert total_energy(rdm, bare_integrals, MuellerFunctional()) == pytest.approx(expected, abs=1e-12)
    assert total_energy(rdm, bare_integrals, HartreeFockFunctional()) == pytest.approx(expected, abs=1e-12)


def random_density(size):
    a = np.random.default_rng(5).normal(size=(size, size))
    return a @ a.T


def test_coulomb_and_exchange_matrices(dressed_integrals):
    W = dressed_integrals.dressed_two_body()
    D = random_density(dressed_integrals.size)
    np.testing.assert_allclose(coulomb_matrix(W, D), np.einsum("pqrs,qs->pr", W, D), atol=1e-12)
    np.testing.assert_allclose(exchange_matrix(W, D), np.einsum("pqrs,qr->ps", W, D), atol=1e-12)


def test_zero_coupling_photon_energy(helium, xq_grid):
    model = helium.with_modes(PhotonMode(OMEGA_HE, 0.0))
    basis = ip_solve(model, xq_grid, 4)
    report = energy(OneRDM.aufbau(basis), build_integrals(basis, model), MuellerFunctional())
    axis = xq_grid.axes[1]
    oscillator = -0.5 * second_derivative_matrix(axis.n_points, axis.spacing).toarray()
    level = np.linalg.eigvalsh(oscillator + np.diag(0.5 * OMEGA_HE**2 * axis.points**2))[0]
    assert report.photon_mode_energy == pytest.approx(2.0 * level, abs=1e-8)
    assert report.mode_occupation == pytest.approx(2.0 * level / OMEGA_HE - 1.0, abs=1e-8)
    assert report.mode_occupation == pytest.approx(0.0, abs=1e-2)


def test_basis_mismatch(bare_basis, dressed_integrals):
    with pytest.raises(BasisMismatch):
        energy(OneRDM.aufbau(bare_basis), dressed_integrals, MuellerFunctional())


def test_functional_registry():
    assert isinstance(AbstractFunctional.create("Müller"), MuellerFunctional)
    assert isinstance(AbstractFunctional.create("rdmft"), MuellerFunctional)
    assert AbstractFunctional.create("HF").pinned
    with pytest.raises(ConfigError):
        AbstractFunctional.create("power")
