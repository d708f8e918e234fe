import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polaritonrdmft.common.errors import ArityMismatch, ModelError
from polaritonrdmft.grid import Field, inner_product, make_grid
from polaritonrdmft.model import (
    ModelSpec,
    PhotonMode,
    PotentialSpec,
    bare_potential,
    dressed_interaction,
    dressed_potential,
    effective_coupling,
    lambda_for,
    mode_oscillator_matrix,
    one_body_operator,
    soft_coulomb,
)

OMEGA = 0.5535
coordinates = st.floats(min_value=-5.0, max_value=5.0, allow_nan=False)


def helium(lam=0.1, n_modes=1):
    return ModelSpec(PotentialSpec.soft_helium(), 2, tuple(PhotonMode(OMEGA, lam) for _ in range(n_modes)))


def test_dressed_potential_value():
    assert dressed_potential(1.0, 1.0, helium()) == pytest.approx(-1.295171, abs=1e-6)


def test_dressed_potential_zero_coupling_separates():
    x = np.linspace(-3, 3, 7)
    expected = bare_potential(x, PotentialSpec.soft_helium()) + 0.5 * OMEGA**2 * 0.7**2
    np.testing.assert_allclose(dressed_potential(x, 0.7, helium(0.0)), expected, rtol=0, atol=1e-15)


def test_dressed_potential_at_origin_independent_of_coupling():
    for lam in (0.0, 0.3, 1.5):
        assert dressed_potential(0.0, 2.0, helium(lam)) == pytest.approx(-2.0 + 0.5 * OMEGA**2 * 4.0)


def test_dressed_interaction_value():
    assert dressed_interaction(1.0, 0.0, 1.0, 0.0, helium()) == pytest.approx(1.01)


def test_dressed_interaction_zero_coupling():
    assert dressed_interaction(0.5, 1.0, -0.5, 2.0, helium(0.0)) == pytest.approx(soft_coulomb(0.5, -0.5))


def test_interaction_can_be_disabled():
    model = ModelSpec(PotentialSpec.soft_helium(), 2, (PhotonMode(OMEGA, 0.0),), interaction_enabled=False)
    assert dressed_interaction(0.3, 0.1, -0.2, 0.4, model) == 0.0


@settings(max_examples=50, deadline=None)
@given(coordinates, coordinates, coordinates, coordinates)
def test_interaction_exchange_symmetric(x, q, xp, qp):
    model = helium(0.7)
    assert dressed_interaction(x, q, xp, qp, model) == dressed_interaction(xp, qp, x, q, model)


@settings(max_examples=50, deadline=None)
@given(coordinates, coordinates, coordinates, coordinates)
def test_joint_parity(x, q, xp, qp):
    model = helium(0.7)
    assert dressed_potential(-x, -q, model) == pytest.approx(dressed_potential(x, q, model), abs=1e-12)
    assert dressed_interaction(-x, -q, -xp, -qp, model) == pytest.approx(
        dressed_interaction(x, q, xp, qp, model), abs=1e-12
    )


def test_effective_coupling_values():
    assert effective_coupling(PhotonMode(OMEGA, 0.0)).g == 0.0
    coupling = effective_coupling(PhotonMode(OMEGA, 0.1))
    assert coupling.g == pytest.approx(0.052607, abs=1e-6)
    assert coupling.g_over_omega == pytest.approx(0.09504, abs=1e-5)
    assert lambda_for(1.0, OMEGA) == pytest.approx(1.05215, abs=1e-5)


@settings(max_examples=50, deadline=None)
@given(st.floats(min_value=0.0, max_value=5.0), st.floats(min_value=0.01, max_value=10.0))
def test_coupling_round_trip(lam, omega):
    mode = PhotonMode(omega, lam)
    assert lambda_for(effective_coupling(mode).g_over_omega, omega) == pytest.approx(lam, abs=1e-12)


def test_mode_validation():
    with pytest.raises(ModelError):
        PhotonMode(0.0, 0.1)
    with pytest.raises(ModelError):
        PhotonMode(0.5, -0.1)
    with pytest.raises(ModelError):
        ModelSpec(PotentialSpec.soft_helium(), 3)


def test_arity_checked():
    with pytest.raises(ArityMismatch):
        dressed_potential(0.0, 1.0, helium(0.1, n_modes=2))
    with pytest.raises(ArityMismatch):
        dressed_potential(0.0, [1.0], helium(0.1, n_modes=2))
    with pytest.raises(ArityMismatch):
        one_body_operator(helium(), make_grid([{"L": 6.0, "h": 0.5}]))


def test_two_modes_add_up():
    model = helium(0.2, n_modes=2)
    single = helium(0.2)
    value = dressed_potential(1.0, [0.5, 0.5], model)
    expected = 2 * dressed_potential(1.0, 0.5, single) - bare_potential(1.0, model.potential)
    assert value == pytest.approx(expected)


def test_harmonic_ground_state_rayleigh_quotient():
    model = ModelSpec(PotentialSpec.harmonic(1.0), 2, interaction_enabled=False)
    grid = make_grid([{"L": 16.0, "h": 0.1}])
    ground = Field.from_function(grid, lambda x: np.exp(-0.5 * x**2))
    operator = one_body_operator(model, grid)
    quotient = inner_product(ground, operator(ground)) / inner_product(ground, ground)
    assert quotient == pytest.approx(0.5, abs=1e-4)


def test_operator_hermitian():
    grid = make_grid([{"L": 6.0, "h": 0.4}, {"L": 6.0, "h": 0.5}])
    operator = one_body_operator(helium(0.5), grid)
    rng = np.random.default_rng(4)
    f = Field(grid, rng.normal(size=grid.shape))
    g = Field(grid, rng.normal(size=grid.shape))
    assert inner_product(f, operator(g)) == pytest.approx(inner_product(operator(f), g), abs=1e-10)
    matrix = operator.matrix()
    assert abs(matrix - matrix.T).max() < 1e-12


def test_oscillator_matrix_on_ground_state():
    model = helium(0.0)
    grid = make_grid([{"L": 6.0, "h": 0.5}, {"L": 14.0, "h": 0.1}])
    x, q = grid.mesh()
    psi = np.exp(-0.5 * x**2) * np.exp(-0.5 * OMEGA * q**2)
    psi = psi.ravel()
    energy = psi @ (mode_oscillator_matrix(model, grid) @ psi) / (psi @ psi)
    assert energy == pytest.approx(0.5 * OMEGA, abs=1e-5)
