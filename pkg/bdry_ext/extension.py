"""Boundary conditions of T_U, the Gauss-Green form Gamma and maximal isotropy certificates.

A boundary pair is (gamma psi, mu psi) in hat coordinates. Gamma(p1, p2) = <u1|g2> - <g1|u2>,
which as a sesquilinear form on C^{2d} reads w1^† J w2 with J = [[0, -I], [I, 0]].
"""
from dataclasses import dataclass
from typing import Dict
import numpy as np
from bdry_ext.domain import CatalogFunction, ModeState, boundary_pair_data, gamma_hat, mu_from_trace, trace_data
from bdry_ext.domain import l2_inner_tstar
from bdry_ext.exceptions import DimensionMismatchError, RankDeficiencyError
from bdry_ext.utils import TOLERANCE, as_square, as_vector, check_hermitian, check_unitary, null_space
from bdry_ext.utils import orthonormal_columns, projector_distance


@dataclass(frozen=True)
class BoundaryPair:
    """(g, u) = (gamma psi, mu psi) in hat coordinates."""

    g: np.ndarray
    u: np.ndarray

    def __post_init__(self):
        g = as_vector(self.g, name="g")
        u = as_vector(self.u, g.shape[0], "u")
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "u", u)

    @property
    def dim(self) -> int:
        return self.g.shape[0]

    @property
    def stacked(self) -> np.ndarray:
        return np.concatenate([self.g, self.u])

    @classmethod
    def from_function(cls, psi: CatalogFunction) -> "BoundaryPair":
        return cls(*boundary_pair_data(psi))

    @classmethod
    def from_state(cls, state: ModeState) -> "BoundaryPair":
        g, n = trace_data(state)
        return cls(gamma_hat(state.geom, g), mu_from_trace(state.geom, g, n))


def _check_dims(U: np.ndarray, p: BoundaryPair) -> np.ndarray:
    U = as_square(U, name="U")
    if U.shape[0] != p.dim:
        raise DimensionMismatchError(f"U is {U.shape[0]}x{U.shape[0]} but the boundary pair has length {p.dim}.")
    return U


def bc_residual(U, p: BoundaryPair) -> np.ndarray:
    """r = i(1 + U) g - (1 - U) u."""
    U = _check_dims(U, p)
    return 1j * (p.g + U @ p.g) - (p.u - U @ p.u)


def aim_residual(U, p: BoundaryPair) -> np.ndarray:
    """(u - i g) - U (u + i g)."""
    U = _check_dims(U, p)
    return (p.u - 1j * p.g) - U @ (p.u + 1j * p.g)


def in_domain(U, p: BoundaryPair, tol_bc: float = TOLERANCE["bc"]) -> bool:
    """Certified membership of the pair in the boundary data of D(T_U)."""
    scale = 1.0 + np.linalg.norm(p.g) + np.linalg.norm(p.u)
    return bool(np.linalg.norm(bc_residual(U, p)) <= tol_bc * scale)


def gauss_green(p1: BoundaryPair, p2: BoundaryPair) -> complex:
    if p1.dim != p2.dim:
        raise DimensionMismatchError(f"Boundary pairs of length {p1.dim} and {p2.dim}.")
    return complex(np.vdot(p1.u, p2.g) - np.vdot(p1.g, p2.u))


def green_identity_check(phi: CatalogFunction, psi: CatalogFunction) -> float:
    """|Gamma(phi, psi) - (<phi|T* psi> - <T* phi|psi>)| with the volume terms by quadrature."""
    boundary = gauss_green(BoundaryPair.from_function(phi), BoundaryPair.from_function(psi))
    volume = l2_inner_tstar(phi, psi) - np.conj(l2_inner_tstar(psi, phi))
    return float(abs(boundary - volume))


def _j_form(d: int) -> np.ndarray:
    eye = np.eye(d, dtype=np.complex128)
    zero = np.zeros((d, d), dtype=np.complex128)
    return np.block([[zero, -eye], [eye, zero]])


@dataclass(frozen=True)
class IsotropySubspace:
    """A subspace W of the doubled boundary space, spanned by the columns of `basis` (2d x k)."""

    basis: np.ndarray

    def __post_init__(self):
        basis = np.asarray(self.basis, dtype=np.complex128)
        if basis.ndim != 2 or basis.shape[0] % 2:
            raise DimensionMismatchError(f"An isotropy basis must be a 2d x k array, got shape {basis.shape}.")
        object.__setattr__(self, "basis", basis)

    @property
    def d(self) -> int:
        return self.basis.shape[0] // 2

    @property
    def orthonormal(self) -> np.ndarray:
        return orthonormal_columns(self.basis)

    @property
    def rank(self) -> int:
        return self.orthonormal.shape[1]

    def gamma_matrix(self) -> np.ndarray:
        """Gamma on pairs of orthonormal basis vectors of W."""
        W = self.orthonormal
        return W.conj().T @ _j_form(self.d) @ W

    def gamma_orthogonal(self) -> np.ndarray:
        """Orthonormal basis of W^† = {v : Gamma(w, v) = 0 for all w in W}."""
        W = self.orthonormal
        if W.shape[1] == 0:
            return np.eye(2 * self.d, dtype=np.complex128)
        return null_space(W.conj().T @ _j_form(self.d))


def wu_basis(U) -> IsotropySubspace:
    """Columns ((1 - U) h_j, i(1 + U) h_j) over the standard basis h_j.

    Raises:
        RankDeficiencyError: If the columns fail to span a d-dimensional space.
    """
    U = check_unitary(U)
    eye = np.eye(U.shape[0], dtype=np.complex128)
    W = IsotropySubspace(np.vstack([eye - U, 1j * (eye + U)]))
    if W.rank != U.shape[0]:
        raise RankDeficiencyError(f"wu_basis has rank {W.rank}, expected {U.shape[0]}.")
    return W


def graph_subspace(S) -> IsotropySubspace:
    """The graph {(h, S h)} of a boundary operator S."""
    S = as_square(S, name="S")
    return IsotropySubspace(np.vstack([np.eye(S.shape[0], dtype=np.complex128), S]))


def hermitian_graph(S) -> IsotropySubspace:
    return graph_subspace(check_hermitian(S, tol=1e-10, name="S"))


@dataclass(frozen=True)
class IsotropyReport:
    isotropy: bool
    dim: int
    gamma_max_defect: float
    projector_distance: float

    def to_dict(self) -> Dict:
        return {
            "isotropy": self.isotropy,
            "dim": self.dim,
            "gamma_max_defect": self.gamma_max_defect,
            "projector_distance": self.projector_distance,
        }


def isotropy_report(W: IsotropySubspace, tol_gamma: float = 1e-10, tol_projector: float = 1e-8) -> IsotropyReport:
    """Checks (i) Gamma vanishes on W, (ii) dim W = d, (iii) W^† = W."""
    gram = W.gamma_matrix()
    defect = float(np.max(np.abs(gram))) if gram.size else 0.0
    W_dagger = W.gamma_orthogonal()
    if W_dagger.shape[1] == W.rank:
        distance = projector_distance(W.orthonormal, W_dagger)
    else:
        distance = 1.0
    ok = defect <= tol_gamma and W.rank == W.d and distance <= tol_projector
    return IsotropyReport(isotropy=bool(ok), dim=W.rank, gamma_max_defect=defect, projector_distance=distance)


def maximal_isotropy_certificate(W: IsotropySubspace) -> bool:
    return isotropy_report(W).isotropy
