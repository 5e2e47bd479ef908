from typing import Final, Dict, Optional
import numpy as np
from bdry_ext.exceptions import DimensionMismatchError, NotUnitaryError, NotHermitianError


TOLERANCE: Final[Dict[str, float]] = {
    # Eigenvalue-1 detection for boundary unitaries.
    "one": 1e-9,
    # Relative residual for D(T_U) membership.
    "bc": 1e-9,
    # Unitarity of user supplied boundary arrays.
    "unitary": 1e-12,
    "hermitian": 1e-12,
    "projector": 1e-10,
    # Secular solver: acceptance of a refined root, merging of nearby roots.
    "accept": 1e-8,
    "merge": 1e-9,
    # Null-space threshold relative to the largest singular value.
    "null_space": 1e-10,
    # Form domain: P_U gamma must vanish relative to the boundary data.
    "form_domain": 1e-8,
}


def as_vector(v, dim: Optional[int] = None, name: str = "vector") -> np.ndarray:
    """Return `v` as a 1-D complex array, checking its length when `dim` is given."""
    arr = np.asarray(v, dtype=np.complex128)
    if arr.ndim != 1:
        raise DimensionMismatchError(f"{name} must be one-dimensional, got shape {arr.shape}.")
    if dim is not None and arr.shape[0] != dim:
        raise DimensionMismatchError(f"{name} has length {arr.shape[0]}, expected {dim}.")
    return arr


def as_square(a, dim: Optional[int] = None, name: str = "array") -> np.ndarray:
    arr = np.asarray(a, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionMismatchError(f"{name} must be square, got shape {arr.shape}.")
    if dim is not None and arr.shape[0] != dim:
        raise DimensionMismatchError(f"{name} is {arr.shape[0]}x{arr.shape[0]}, expected {dim}x{dim}.")
    return arr


def same_length(u: np.ndarray, v: np.ndarray):
    if u.shape != v.shape:
        raise DimensionMismatchError(f"Length mismatch: {u.shape} vs {v.shape}.")


def unitarity_defect(U: np.ndarray) -> float:
    return float(np.linalg.norm(U.conj().T @ U - np.eye(U.shape[0]), ord=2)) if U.size else 0.0


def check_unitary(U, tol: float = TOLERANCE["unitary"], name: str = "U") -> np.ndarray:
    """Validate a boundary unitary.

    Raises:
        DimensionMismatchError: If the array is not square.
        NotUnitaryError: If ||U^† U - I|| exceeds `tol`.
    """
    U = as_square(U, name=name)
    defect = unitarity_defect(U)
    if defect > tol:
        raise NotUnitaryError(f"{name} is not unitary: ||{name}^† {name} - I|| = {defect:.3e} > {tol:.1e}.")
    return U


def check_hermitian(M, tol: float = TOLERANCE["hermitian"], name: str = "M") -> np.ndarray:
    M = as_square(M, name=name)
    if M.size == 0:
        return M
    defect = float(np.max(np.abs(M - M.conj().T)))
    scale = max(1.0, float(np.max(np.abs(M))))
    if defect > tol * scale:
        raise NotHermitianError(f"{name} is not Hermitian: max|{name} - {name}^†| = {defect:.3e}.")
    return M


def orthonormal_columns(A: np.ndarray, rel_tol: float = TOLERANCE["null_space"]) -> np.ndarray:
    """Orthonormal basis of the column span of `A` (rank revealed by SVD)."""
    if A.size == 0:
        return np.zeros((A.shape[0], 0), dtype=np.complex128)
    u, s, _ = np.linalg.svd(A, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros((A.shape[0], 0), dtype=np.complex128)
    rank = int(np.sum(s > rel_tol * s[0]))
    return u[:, :rank]


def null_space(A: np.ndarray, rel_tol: float = TOLERANCE["null_space"]) -> np.ndarray:
    """Orthonormal basis of the kernel of `A`, threshold `rel_tol * sigma_max`."""
    n = A.shape[1]
    if A.shape[0] == 0:
        return np.eye(n, dtype=np.complex128)
    _, s, vh = np.linalg.svd(A, full_matrices=True)
    smax = s[0] if s.size else 0.0
    rank = int(np.sum(s > rel_tol * smax)) if smax > 0 else 0
    return vh[rank:].conj().T


def projector(basis: np.ndarray) -> np.ndarray:
    return basis @ basis.conj().T


def projector_distance(basis_1: np.ndarray, basis_2: np.ndarray) -> float:
    """Spectral-norm distance between the orthogonal projectors onto two column spans."""
    return float(np.linalg.norm(projector(basis_1) - projector(basis_2), ord=2))
