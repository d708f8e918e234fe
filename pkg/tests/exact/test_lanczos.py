import numpy as np
import pytest

from polaritonrdmft.common.errors import MemoryBudgetExceeded, NoConvergence
from polaritonrdmft.exact import LanczosResult, LanczosSettings, lowest_eigenpairs


def random_symmetric(dim, seed=0):
    rng = np.random.default_rng(seed)
    q, _ = np.linalg.qr(rng.normal(size=(dim, dim)))
    return q @ np.diag(np.linspace(-2.0, 4.0, dim)) @ q.T


def test_diagonal_operator():
    diagonal = np.linspace(-3.0, 5.0, 60)
    result = lowest_eigenpairs(lambda v: diagonal * v, 60, 3)
    np.testing.assert_allclose(result.energies, diagonal[:3], atol=1e-8)
    assert result.residuals.max() < 1e-6


def test_matches_dense_eigh():
    matrix = random_symmetric(120)
    result = lowest_eigenpairs(lambda v: matrix @ v, 120, 2, LanczosSettings(krylov_dim=30))
    expected = np.linalg.eigvalsh(matrix)[:2]
    np.testing.assert_allclose(result.energies, expected, atol=1e-8)
    for energy, vector in zip(result.energies, result.vectors):
        assert np.linalg.norm(matrix @ vector - energy * vector) < 1e-6


def test_projector_restricts_sector():
    # odd vectors have the lowest eigenvalue, the projector keeps only even ones
    n = 20
    diagonal = np.arange(2 * n, dtype=float)
    diagonal[1::2] -= 100.0

    def even(v):
        out = v.copy()
        out[1::2] = 0.0
        return out

    result = lowest_eigenpairs(lambda v: diagonal * v, 2 * n, 1, project=even)
    assert result.energies[0] == pytest.approx(0.0, abs=1e-8)


def test_memory_budget():
    with pytest.raises(MemoryBudgetExceeded):
        lowest_eigenpairs(lambda v: v, 10**6, 1, LanczosSettings(max_memory_gib=1e-6))


def test_no_convergence_carries_partial():
    matrix = random_symmetric(400, seed=3)
    settings = LanczosSettings(max_restarts=1, krylov_dim=5)
    with pytest.raises(NoConvergence) as info:
        lowest_eigenpairs(lambda v: matrix @ v, 400, 1, settings)
    partial = info.value.partial
    assert isinstance(partial, LanczosResult)
    assert partial.n_restarts == 1
    assert np.isfinite(partial.energies[0])
    assert info.value.exit_code == 3
