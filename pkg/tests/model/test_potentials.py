import numpy as np
import pytest

from polaritonrdmft.common.errors import ModelError, UnknownKind
from polaritonrdmft.model import (
    PotentialKind,
    PotentialSpec,
    bare_potential,
    nuclear_repulsion,
    soft_coulomb,
)


def test_soft_helium_origin():
    assert bare_potential(0.0, PotentialSpec.soft_helium()) == pytest.approx(-2.0)


def test_soft_hydrogen_molecule_origin():
    spec = PotentialSpec.soft_hydrogen_molecule(1.628)
    assert bare_potential(0.0, spec) == pytest.approx(-2.0 / np.sqrt(0.814**2 + 1.0))
    assert bare_potential(0.0, spec) == pytest.approx(-1.55109, abs=1e-5)


def test_soft_hydrogen_molecule_centres_sit_half_a_bond_out():
    spec = PotentialSpec.soft_hydrogen_molecule(2.0)
    x = np.linspace(-3.0, 3.0, 601)
    v = bare_potential(x, spec)
    left, right = x[np.argmin(v[x < 0])], x[x > 0][np.argmin(v[x > 0])]
    # each well is pulled inwards by the other centre
    assert -1.0 < left < -0.5
    assert 0.5 < right < 1.0
    assert left == pytest.approx(-right)


def test_soft_beryllium_default_softening():
    spec = PotentialSpec.soft_beryllium()
    assert spec.softening == 0.5
    assert bare_potential(0.0, spec) == pytest.approx(-8.0)


def test_harmonic_and_custom():
    assert bare_potential(2.0, PotentialSpec.harmonic(0.5)) == pytest.approx(1.0)
    custom = PotentialSpec(PotentialKind.CUSTOM, table=((-1.0, 1.0), (2.0, 4.0)))
    assert bare_potential(0.0, custom) == pytest.approx(3.0)


def test_soft_coulomb_values():
    assert soft_coulomb(1.0, 1.0, 1.0) == pytest.approx(1.0)
    assert soft_coulomb(0.0, 1.0, 1.0) == pytest.approx(1.0 / np.sqrt(2.0))
    assert soft_coulomb(0.0, 1e8, 1.0) < 1e-7


def test_parse_aliases():
    assert PotentialKind.parse("SoftHelium") is PotentialKind.SOFT_HELIUM
    assert PotentialKind.parse("soft_hydrogen_molecule") is PotentialKind.SOFT_HYDROGEN_MOLECULE
    assert PotentialKind.parse("Be") is PotentialKind.SOFT_BERYLLIUM
    with pytest.raises(UnknownKind):
        PotentialKind.parse("Lithium")


@pytest.mark.parametrize(
    "kwargs",
    [
        {"kind": PotentialKind.SOFT_HELIUM, "softening": 0.0},
        {"kind": PotentialKind.SOFT_HYDROGEN_MOLECULE, "separation": -1.0},
        {"kind": PotentialKind.CUSTOM},
    ],
)
def test_invalid_specs(kwargs):
    with pytest.raises(ModelError):
        PotentialSpec(**kwargs)


def test_nuclear_repulsion():
    assert nuclear_repulsion(PotentialSpec.soft_helium()) == 0.0
    spec = PotentialSpec.soft_hydrogen_molecule(2.0)
    assert nuclear_repulsion(spec) == pytest.approx(1.0 / np.sqrt(5.0))
