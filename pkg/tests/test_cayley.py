import numpy as np
import pytest
from numpy.testing import assert_allclose
from bdry_ext.boundary import Disk, random_hermitian, random_unitary
from bdry_ext.cayley import (
    SelfAdjointParam,
    cayley,
    grubb_residual,
    inverse_cayley,
    k_u,
    orthonormal_param,
    param_from_dict,
    param_from_raw,
    param_to_unitary,
    unitary_to_param,
)
from bdry_ext.exceptions import BadConfigError, EigenvalueOneError, NotHermitianError
from bdry_ext.extension import BoundaryPair, in_domain
from bdry_ext.presets import neumann
from bdry_ext.utils import projector_distance


def _random_param(seed: int):
    rng = np.random.default_rng(seed)
    d = int(rng.integers(1, 10))
    r = int(rng.integers(0, d + 1))
    basis = random_unitary(d, seed)[:, :r]
    return SelfAdjointParam(basis, random_hermitian(r, seed + 1000) if r else np.zeros((0, 0)))


def _unitary_away_from_one(seed: int):
    rng = np.random.default_rng(seed)
    d = int(rng.integers(1, 10))
    theta = rng.uniform(0.2, 2.0 * np.pi - 0.2, d)
    Z = random_unitary(d, seed)
    return Z @ np.diag(np.exp(1j * theta)) @ Z.conj().T


class TestCayley:
    """Cayley transform and its inverse."""

    def test_zero(self):
        assert_allclose(cayley(np.zeros((2, 2))), -np.eye(2))

    def test_scalar(self):
        assert_allclose(cayley([[1.0]]), [[-1j]])

    def test_swap(self):
        V = cayley([[0.0, 1.0], [1.0, 0.0]])
        plus = np.array([1.0, 1.0]) / np.sqrt(2.0)
        minus = np.array([1.0, -1.0]) / np.sqrt(2.0)
        assert_allclose(V @ plus, -1j * plus, atol=1e-14)
        assert_allclose(V @ minus, 1j * minus, atol=1e-14)

    def test_inverse_examples(self):
        assert_allclose(inverse_cayley(-np.eye(3)), np.zeros((3, 3)), atol=1e-15)
        assert_allclose(inverse_cayley([[1j]]), [[-1.0]], atol=1e-15)

    def test_inverse_rejects_one(self):
        with pytest.raises(EigenvalueOneError):
            inverse_cayley(np.diag([1.0, -1.0]))

    def test_rejects_non_hermitian(self):
        with pytest.raises(NotHermitianError):
            cayley([[0.0, 1.0], [0.0, 0.0]])

    @pytest.mark.parametrize("seed", range(100))
    def test_round_trip_hermitian(self, seed):
        d = 1 + seed % 9
        M = random_hermitian(d, seed)
        assert np.max(np.abs(inverse_cayley(cayley(M)) - M)) <= 1e-10

    @pytest.mark.parametrize("seed", range(100))
    def test_round_trip_unitary(self, seed):
        V = _unitary_away_from_one(seed)
        assert np.max(np.abs(cayley(inverse_cayley(V)) - V)) <= 1e-10


class TestParametrization:
    """U <-> (X, M)."""

    def test_empty_x_is_dirichlet(self):
        p = SelfAdjointParam(np.zeros((3, 0)), np.zeros((0, 0)))
        assert_allclose(param_to_unitary(p), np.eye(3))

    def test_full_x_zero_m_is_krein(self):
        p = SelfAdjointParam(np.eye(2), np.zeros((2, 2)))
        assert_allclose(param_to_unitary(p), -np.eye(2))

    def test_neumann_interval(self, interval_pi):
        U = neumann(interval_pi)
        plus = np.array([1.0, 1.0]) / np.sqrt(2.0)
        minus = np.array([1.0, -1.0]) / np.sqrt(2.0)
        m = -2.0 / np.pi
        assert_allclose(U @ plus, -plus, atol=1e-14)
        assert_allclose(U @ minus, (m - 1j) / (m + 1j) * minus, atol=1e-14)
        assert (m - 1j) / (m + 1j) == pytest.approx(-0.42320 + 0.90604j, abs=1e-5)

    def test_dirichlet_to_param(self):
        p = unitary_to_param(np.eye(2))
        assert p.rank == 0
        assert p.M.shape == (0, 0)

    def test_krein_to_param(self):
        p = unitary_to_param(-np.eye(3))
        assert p.rank == 3
        assert_allclose(p.M, 0.0, atol=1e-15)

    @pytest.mark.parametrize("seed", range(50))
    def test_round_trip(self, seed):
        p = _random_param(seed)
        q = unitary_to_param(param_to_unitary(p))
        assert q.rank == p.rank
        assert projector_distance(p.basis, q.basis) <= 1e-8
        assert_allclose(np.linalg.eigvalsh(q.M), np.linalg.eigvalsh(p.M), atol=1e-8)

    def test_non_orthonormal_basis_rejected(self):
        with pytest.raises(BadConfigError):
            SelfAdjointParam(np.array([[1.0], [1.0]]), np.zeros((1, 1)))

    def test_orthonormal_param_keeps_condition(self):
        b = np.array([[1.0, 1.0], [0.0, 1.0], [0.0, 0.0]])
        M = np.array([[2.0, 0.5], [0.5, -1.0]])
        p = orthonormal_param(b, M)
        c = np.array([0.3, -1.2j])
        g = b @ c
        u = b @ np.linalg.solve(b.T @ b, M @ c)
        assert_allclose(grubb_residual(p, g, u), 0.0, atol=1e-12)

    def test_dependent_basis(self):
        with pytest.raises(BadConfigError):
            orthonormal_param(np.array([[1.0, 2.0], [1.0, 2.0]]), np.eye(2))

    def test_from_dict(self):
        p = param_from_dict({"X_basis": [[[1.0, 0.0]], [[0.0, 0.0]]], "M": [[[2.0, 0.0]]]}, 2)
        assert p.rank == 1
        assert_allclose(p.M, [[2.0]])
        assert param_from_dict({"X_basis": [], "M": []}, 2).rank == 0

    def test_from_dict_missing_key(self):
        with pytest.raises(BadConfigError):
            param_from_dict({"X_basis": []}, 2)

    def test_raw_l_round_trip(self):
        disk = Disk(1.0, 2)
        L = np.diag(np.arange(disk.dim, dtype=float) - 2.0)
        p = param_from_raw(disk, np.eye(disk.dim), L)
        assert_allclose(p.L(disk), L, atol=1e-12)


class TestBoundaryHamiltonian:
    """K_U on Ran Q_U."""

    def test_dirichlet(self):
        h = k_u(np.eye(2))
        assert_allclose(h.Q, 0.0)
        assert_allclose(h.K, 0.0)
        assert h.basis.shape == (2, 0)

    def test_krein(self):
        h = k_u(-np.eye(2))
        assert_allclose(h.Q, np.eye(2), atol=1e-15)
        assert_allclose(h.K, 0.0, atol=1e-15)

    def test_diagonal(self):
        # K (1 - U) g = -i Q (1 + U) g on the mode with U = i gives K (1 - i) = -i (1 + i).
        h = k_u(np.diag([-1.0, 1j]))
        assert_allclose(h.K, np.diag([0.0, 1.0]), atol=1e-14)

    @pytest.mark.parametrize("seed", range(10))
    def test_defining_relation(self, seed):
        U = random_unitary(4, seed)
        h = k_u(U)
        eye = np.eye(4)
        assert_allclose(h.K @ (eye - U), -1j * h.Q @ (eye + U), atol=1e-9)

    def test_energy(self):
        h = k_u(np.diag([-1.0, 1j]))
        assert h.energy([1.0, 2.0]) == pytest.approx(4.0)


class TestGrubbResidual:
    @pytest.mark.parametrize("seed", range(20))
    def test_agrees_with_unitary_condition(self, seed):
        p = _random_param(seed)
        rng = np.random.default_rng(seed)
        c = rng.standard_normal(p.rank) + 1j * rng.standard_normal(p.rank)
        w = rng.standard_normal(p.dim) + 1j * rng.standard_normal(p.dim)
        g = p.basis @ c
        u = p.basis @ (p.M @ c) + (w - p.projector @ w)
        assert np.linalg.norm(grubb_residual(p, g, u)) <= 1e-12
        assert in_domain(param_to_unitary(p), BoundaryPair(g, u))

    def test_outside_x(self):
        p = SelfAdjointParam(np.array([[1.0], [0.0]]), np.zeros((1, 1)))
        residual = grubb_residual(p, [0.0, 1.0], [0.0, 0.0])
        assert_allclose(residual, [0.0, 1.0, 0.0])
