"""Cayley transforms and the two parametrizations of self-adjoint extensions.

A boundary unitary U and a pair (X, M) describe the same extension: X = Ran Q_U and
U = cayley(M) on X, the identity on the orthogonal complement of X. Everything here works
in hat coordinates; `M` stands for Lambda L.
"""
from dataclasses import dataclass
from typing import Dict
import numpy as np
import scipy.linalg
from bdry_ext.boundary import BoundaryGeometry, sobolev_weights, spectral_split
from bdry_ext.exceptions import BadConfigError, DimensionMismatchError, EigenvalueOneError
from bdry_ext.utils import (
    TOLERANCE,
    as_square,
    as_vector,
    check_hermitian,
    check_unitary,
    orthonormal_columns,
    projector,
)


def cayley(M) -> np.ndarray:
    """V = (M - i)(M + i)^{-1}. M + i is invertible for every Hermitian M."""
    M = check_hermitian(M)
    r = M.shape[0]
    if r == 0:
        return np.zeros((0, 0), dtype=np.complex128)
    eye = np.eye(r, dtype=np.complex128)
    # M - i and (M + i)^{-1} commute.
    return scipy.linalg.solve(M + 1j * eye, M - 1j * eye)


def inverse_cayley(V, tol_one: float = TOLERANCE["one"]) -> np.ndarray:
    """M = i(1 + V)(1 - V)^{-1}.

    Raises:
        EigenvalueOneError: If V has an eigenvalue within `tol_one` of 1.
    """
    V = as_square(V, name="V")
    r = V.shape[0]
    if r == 0:
        return np.zeros((0, 0), dtype=np.complex128)
    w = scipy.linalg.eigvals(V)
    closest = float(np.min(np.abs(w - 1.0)))
    if closest <= tol_one:
        raise EigenvalueOneError(
            f"V has an eigenvalue at distance {closest:.2e} from 1 (tol_one={tol_one:.1e}); split off Ran P_U first."
        )
    eye = np.eye(r, dtype=np.complex128)
    M = 1j * scipy.linalg.solve(eye - V, eye + V)
    return 0.5 * (M + M.conj().T)


@dataclass(frozen=True)
class SelfAdjointParam:
    """The pair (X, Lambda L) in hat coordinates.

    Attributes:
        basis (np.ndarray): d x r orthonormal columns spanning X.
        M (np.ndarray): r x r Hermitian array, Lambda L written in `basis`.
    """

    basis: np.ndarray
    M: np.ndarray

    def __post_init__(self):
        basis = np.asarray(self.basis, dtype=np.complex128)
        if basis.ndim != 2:
            raise DimensionMismatchError(f"X_basis must be a d x r array, got shape {basis.shape}.")
        r = basis.shape[1]
        M = check_hermitian(as_square(self.M, r, "M"), name="M")
        if r and np.linalg.norm(basis.conj().T @ basis - np.eye(r), ord=2) > TOLERANCE["projector"]:
            raise BadConfigError("X_basis columns must be orthonormal (use `orthonormal_param` to build one).")
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "M", 0.5 * (M + M.conj().T))

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def rank(self) -> int:
        return self.basis.shape[1]

    @property
    def projector(self) -> np.ndarray:
        """Pi_X."""
        return projector(self.basis)

    @property
    def M_full(self) -> np.ndarray:
        """Lambda L extended by zero to the whole boundary space."""
        return self.basis @ self.M @ self.basis.conj().T

    def L(self, geom: BoundaryGeometry) -> np.ndarray:
        """L in raw coordinates: Lambda^{-1/2} M_full Lambda^{-1/2}."""
        s = sobolev_weights(geom, -0.5)
        return s[:, None] * self.M_full * s[None, :]

    def to_dict(self) -> Dict:
        return {"X_basis": complex_to_pairs(self.basis), "M": complex_to_pairs(self.M)}


def complex_to_pairs(arr: np.ndarray):
    arr = np.asarray(arr, dtype=np.complex128)
    return np.stack([arr.real, arr.imag], axis=-1).tolist()


def pairs_to_complex(data, name: str) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.shape[-1:] != (2,):
        raise BadConfigError(f"'{name}' must be an array of [re, im] pairs.")
    return arr[..., 0] + 1j * arr[..., 1]


def orthonormal_param(basis, M) -> SelfAdjointParam:
    """Build a SelfAdjointParam from any full-rank spanning set of X, carrying M along the basis change."""
    basis = np.asarray(basis, dtype=np.complex128)
    if basis.ndim != 2:
        raise DimensionMismatchError(f"X_basis must be a d x r array, got shape {basis.shape}.")
    M = check_hermitian(as_square(M, basis.shape[1], "M"), name="M")
    if basis.shape[1] == 0:
        return SelfAdjointParam(basis, M)
    q, r = np.linalg.qr(basis)
    if np.min(np.abs(np.diag(r))) <= TOLERANCE["null_space"] * np.max(np.abs(np.diag(r))):
        raise BadConfigError("X_basis columns are linearly dependent.")
    # M is the matrix of a Hermitian form in the old basis: B^† A B = M with B = q r.
    r_inv = np.linalg.inv(r)
    return SelfAdjointParam(q, r_inv.conj().T @ M @ r_inv)


def param_from_dict(data: Dict, dim: int) -> SelfAdjointParam:
    if not isinstance(data, dict) or "X_basis" not in data or "M" not in data:
        raise BadConfigError("A parameter pair needs the keys 'X_basis' and 'M'.")
    if np.size(data["X_basis"]) == 0:
        return SelfAdjointParam(np.zeros((dim, 0), dtype=np.complex128), np.zeros((0, 0), dtype=np.complex128))
    basis = pairs_to_complex(data["X_basis"], "X_basis")
    if basis.ndim != 2 or basis.shape[0] != dim:
        raise DimensionMismatchError(f"X_basis must have {dim} rows, got shape {basis.shape}.")
    return orthonormal_param(basis, pairs_to_complex(data["M"], "M"))


def param_from_raw(geom: BoundaryGeometry, basis_raw, L_raw) -> SelfAdjointParam:
    """(X, L) given in raw L^2 coordinates -> hat-coordinate SelfAdjointParam.

    `basis_raw` spans X (d x r); `L_raw` is a d x d Hermitian array whose compression to X is L.
    """
    basis_raw = np.asarray(basis_raw, dtype=np.complex128)
    d = geom.dim
    if basis_raw.ndim != 2 or basis_raw.shape[0] != d:
        raise DimensionMismatchError(f"X_basis must have {d} rows, got shape {basis_raw.shape}.")
    L_raw = check_hermitian(as_square(L_raw, d, "L"), name="L")
    B = orthonormal_columns(sobolev_weights(geom, -0.5)[:, None] * basis_raw)
    lift = sobolev_weights(geom, 0.5)
    M_full = lift[:, None] * L_raw * lift[None, :]
    return SelfAdjointParam(B, B.conj().T @ M_full @ B)


def param_to_unitary(p: SelfAdjointParam) -> np.ndarray:
    """U = cayley(M) on X, identity on its orthogonal complement."""
    B = p.basis
    eye = np.eye(p.dim, dtype=np.complex128)
    if p.rank == 0:
        return eye
    U = eye - B @ B.conj().T + B @ cayley(p.M) @ B.conj().T
    return check_unitary(U, tol=1e-10)


def unitary_to_param(U, tol_one: float = TOLERANCE["one"]) -> SelfAdjointParam:
    """X = Ran Q_U, M = inverse Cayley of U restricted to X."""
    U = check_unitary(U)
    _, B = spectral_split(U, tol_one)
    V = B.conj().T @ U @ B
    return SelfAdjointParam(B, inverse_cayley(V, tol_one=tol_one / 10.0))


@dataclass(frozen=True)
class BoundaryHamiltonian:
    """The form operator K_U on Ran Q_U.

    Attributes:
        Q (np.ndarray): d x d projector onto Ran Q_U.
        K (np.ndarray): d x d Hermitian array, zero on Ran P_U.
        basis (np.ndarray): d x r orthonormal basis of Ran Q_U.
        K_restricted (np.ndarray): r x r array of K in `basis`.
    """

    Q: np.ndarray
    K: np.ndarray
    basis: np.ndarray
    K_restricted: np.ndarray

    def energy(self, g_hat) -> complex:
        """<g|K g> in H^{-1/2}."""
        g_hat = as_vector(g_hat, self.Q.shape[0], "g")
        return complex(np.vdot(g_hat, self.K @ g_hat))


def k_u(U, tol_one: float = TOLERANCE["one"]) -> BoundaryHamiltonian:
    """Boundary Hamiltonian defined by K_U (1 - U) g = -i Q_U (1 + U) g.

    On Ran Q_U this is minus the inverse Cayley transform of U: with the boundary condition
    mu = C^{-1}(U) gamma one gets K_U gamma = -Q_U mu, which makes the quadratic form reproduce
    <psi|T_U psi>.
    """
    U = check_unitary(U)
    _, B = spectral_split(U, tol_one)
    K_r = -inverse_cayley(B.conj().T @ U @ B, tol_one=tol_one / 10.0) if B.shape[1] else np.zeros((0, 0), complex)
    K = B @ K_r @ B.conj().T
    return BoundaryHamiltonian(Q=projector(B), K=0.5 * (K + K.conj().T), basis=B, K_restricted=K_r)


def grubb_residual(p: SelfAdjointParam, g_hat, u_hat) -> np.ndarray:
    """Residual of the (X, L) boundary condition.

    The condition reads gamma in X and Pi_X mu = Lambda L gamma. The returned vector stacks
    (1 - Pi_X) g (length d) over B^† u - M B^† g (length r).
    """
    g = as_vector(g_hat, p.dim, "g")
    u = as_vector(u_hat, p.dim, "u")
    B = p.basis
    outside = g - B @ (B.conj().T @ g)
    inside = B.conj().T @ u - p.M @ (B.conj().T @ g)
    return np.concatenate([outside, inside])

