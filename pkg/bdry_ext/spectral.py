"""Eigenvalues and eigenfunctions of T_U from the secular matrix of the energy basis.

At energy lambda the solutions of -Delta u = lambda u kept by `ModeState` span a space E(lambda).
Their boundary pairs (gamma u, mu u) span a subspace D(lambda) of C^{2d}, and lambda is an
eigenvalue of T_U exactly when some nonzero pair in D(lambda) satisfies

    i(1 + U) g - (1 - U) u = 0,

i.e. when B = [i(1 + U), -(1 - U)] has a nontrivial kernel on D(lambda). The scan measures this
through the smallest singular value of B applied to an orthonormal basis of D(lambda). That
quantity depends on the subspace only, so it stays continuous when the fundamental system
changes (trigonometric, polynomial, hyperbolic, exponential) and is comparable across lambda.
"""
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple
import warnings
import numpy as np
from joblib import Parallel, delayed
from bdry_ext.bessel import bessel_j_zeros
from bdry_ext.boundary import BoundaryGeometry, Interval, sobolev_weights
from bdry_ext.domain import ModeState, basis_trace_data, dtn
from bdry_ext.exceptions import BadConfigError, DimensionMismatchError, RootNotFoundError
from bdry_ext.utils import TOLERANCE, check_unitary


DEFAULT_GRID_POINTS = 4000
MIN_GRID_POINTS = 16
REFINE_WIDTH = 1e-12
REFINE_MAX_ITER = 200
# Refined minima this far below their grid value are reported even when not accepted.
NEAR_MISS_RATIO = 1e-3
GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass
class SpectrumResult:
    """Eigenvalues found in a window, merged by multiplicity.

    Attributes:
        eigenvalues (List[float]): Strictly increasing.
        multiplicities (List[int]): Kernel dimension of the secular matrix at each eigenvalue.
        residuals (List[float]): Smallest singular value at each root.
        window (Tuple[float, float]): The scanned energy window.
    """

    eigenvalues: List[float] = field(default_factory=list)
    multiplicities: List[int] = field(default_factory=list)
    residuals: List[float] = field(default_factory=list)
    window: Tuple[float, float] = (0.0, 0.0)

    def __len__(self):
        return len(self.eigenvalues)

    def expanded(self) -> List[float]:
        """Eigenvalues repeated according to multiplicity."""
        return [lam for lam, m in zip(self.eigenvalues, self.multiplicities) for _ in range(m)]

    def rows(self) -> List[Tuple[int, float, int, float]]:
        return [(i, lam, m, res) for i, (lam, m, res) in enumerate(zip(self.eigenvalues, self.multiplicities, self.residuals))]

    def to_dict(self) -> Dict:
        return {
            "eigenvalues": list(self.eigenvalues),
            "multiplicities": list(self.multiplicities),
            "residuals": list(self.residuals),
            "window": list(self.window),
        }


def default_window(geom: BoundaryGeometry) -> Tuple[float, float]:
    """Interval: (-(10/l)^2 * 25, (10 pi / l)^2). Disk: (-2500 / R^2, 400 / R^2)."""
    ell = geom.length
    if isinstance(geom, Interval):
        return -2500.0 / ell**2, (10.0 * np.pi / ell) ** 2
    return -2500.0 / ell**2, 400.0 / ell**2


def _secular_operator(U: np.ndarray) -> np.ndarray:
    eye = np.eye(U.shape[0], dtype=np.complex128)
    return np.hstack([1j * (eye + U), -(eye - U)])


def _pair_columns(geom: BoundaryGeometry, G: np.ndarray, Nn: np.ndarray) -> np.ndarray:
    """Stack hat coordinates (gamma, mu) of the basis columns into a 2d x k array."""
    g_hat = sobolev_weights(geom, -0.5)[:, None] * G
    u_hat = sobolev_weights(geom, 0.5)[:, None] * (Nn - dtn(geom) @ G)
    return np.vstack([g_hat, u_hat])


def _boundary_subspace(geom: BoundaryGeometry, energy: float) -> Tuple[np.ndarray, np.ndarray]:
    """Orthonormal basis Q of D(energy) and T with Q = D_exact T.

    Disk columns that underflow (J_m(kR) for m >> kR) are replaced by their lambda = 0 limit; the
    matching entry of T is zero, so such modes never contribute to eigenfunction coefficients.
    """
    D = _pair_columns(geom, *basis_trace_data(geom, energy))
    norms = np.linalg.norm(D, axis=0)
    if isinstance(geom, Interval):
        q, r = np.linalg.qr(D / norms[None, :])
        return q, np.diag(1.0 / norms) @ np.linalg.inv(r)
    # Disk columns are supported on distinct modes, hence already orthogonal.
    underflow = ~(norms > np.finfo(float).tiny * 1e3)
    scale = np.where(underflow, 0.0, 1.0 / np.where(underflow, 1.0, norms))
    Q = D * scale[None, :]
    for j in np.flatnonzero(underflow):
        Q[:, j] = 0.0
        Q[j, j] = 1.0
    T = np.diag(scale).astype(np.complex128)
    return Q, T


def secular_matrix(geom: BoundaryGeometry, U, energy: float) -> np.ndarray:
    """Column j = bc_residual(U, pair of basis solution j at this energy)."""
    U = _check_geometry(geom, U)
    D = _pair_columns(geom, *basis_trace_data(geom, float(energy)))
    return _secular_operator(U) @ D


def secular_singular_values(geom: BoundaryGeometry, U, energy: float) -> np.ndarray:
    """Singular values (descending) of the secular operator on an orthonormal basis of D(energy)."""
    U = _check_geometry(geom, U)
    return _singular_values(geom, _secular_operator(U), float(energy))


def _singular_values(geom: BoundaryGeometry, B: np.ndarray, energy: float) -> np.ndarray:
    Q, _ = _boundary_subspace(geom, energy)
    return np.linalg.svd(B @ Q, compute_uv=False)


def _sigma_min(geom: BoundaryGeometry, B: np.ndarray, energy: float) -> float:
    return float(_singular_values(geom, B, energy)[-1])


def _check_geometry(geom: BoundaryGeometry, U) -> np.ndarray:
    U = check_unitary(U)
    if U.shape[0] != geom.dim:
        raise DimensionMismatchError(f"U is {U.shape[0]}x{U.shape[0]} but the {geom.kind} boundary has dimension {geom.dim}.")
    return U


def _sigma_chunk(geom: BoundaryGeometry, B: np.ndarray, energies: np.ndarray) -> np.ndarray:
    return np.array([_sigma_min(geom, B, lam) for lam in energies])


def _refine(geom: BoundaryGeometry, B: np.ndarray, lo: float, hi: float, seed: float, f_seed: float) -> Tuple[float, float]:
    """Golden-section search for the minimum of sigma_min on [lo, hi].

    Stops once the bracket is narrower than REFINE_WIDTH max(1, |lambda|). The grid point `seed` is
    kept as the answer if no interior point beats it.
    """
    def f(lam: float) -> float:
        return _sigma_min(geom, B, lam)

    c = hi - GOLDEN * (hi - lo)
    d = lo + GOLDEN * (hi - lo)
    fc, fd = f(c), f(d)
    for _ in range(REFINE_MAX_ITER):
        if hi - lo <= REFINE_WIDTH * max(1.0, abs(lo), abs(hi)):
            break
        if fc <= fd:
            hi, d, fd = d, c, fc
            c = hi - GOLDEN * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + GOLDEN * (hi - lo)
            fd = f(d)
    else:
        warnings.warn(f"Root refinement on [{lo:.12g}, {hi:.12g}] stopped after {REFINE_MAX_ITER} steps.", RuntimeWarning)
    x, fx = min([(c, fc), (d, fd), (seed, f_seed)], key=lambda p: p[1])
    return float(x), float(fx)


def _local_minima(values: np.ndarray) -> List[int]:
    n = values.shape[0]
    minima = []
    for i in range(n):
        left = values[i - 1] if i > 0 else np.inf
        right = values[i + 1] if i < n - 1 else np.inf
        if values[i] <= left and values[i] <= right and (values[i] < left or values[i] < right):
            minima.append(i)
    return minima


def _multiplicity(geom: BoundaryGeometry, B: np.ndarray, energy: float, tol_accept: float) -> int:
    return int(np.sum(_singular_values(geom, B, energy) <= tol_accept))


def _merge(roots: List[Tuple[float, float, int, bool]], tol_merge: float) -> SpectrumResult:
    """Cluster roots closer than tol_merge * max(1, |lambda|).

    A cluster keeps the root with the smallest residual (an explicit lambda = 0 root wins) and the
    largest multiplicity seen in it: every member measures the kernel dimension of the same root.
    """
    result = SpectrumResult()
    roots = sorted(roots)
    clusters: List[List[Tuple[float, float, int, bool]]] = []
    for root in roots:
        if clusters and abs(root[0] - clusters[-1][-1][0]) <= tol_merge * max(1.0, abs(root[0])):
            clusters[-1].append(root)
        else:
            clusters.append([root])
    for cluster in clusters:
        exact = [r for r in cluster if r[3]]
        lam, res, _, _ = exact[0] if exact else min(cluster, key=lambda r: r[1])
        result.eigenvalues.append(lam)
        result.residuals.append(res)
        result.multiplicities.append(max(r[2] for r in cluster))
    return result


def scan_spectrum(
    geom: BoundaryGeometry,
    U,
    lam_min: Optional[float] = None,
    lam_max: Optional[float] = None,
    grid_points: int = DEFAULT_GRID_POINTS,
    tol_accept: float = TOLERANCE["accept"],
    tol_merge: float = TOLERANCE["merge"],
    workers: int = 1,
) -> SpectrumResult:
    """Eigenvalues of T_U in [lam_min, lam_max].

    Args:
        geom (BoundaryGeometry): Interval or disk.
        U (np.ndarray): Boundary unitary in hat coordinates.
        lam_min (float, optional): Lower end of the window (default: `default_window`).
        lam_max (float, optional): Upper end of the window.
        grid_points (int): Number of sampling points, at least 16.
        tol_accept (float): A refined minimum is a root when sigma_min <= tol_accept. Minima that
            sharpen under refinement but stay above it raise a RuntimeWarning.
        tol_merge (float): Relative distance below which roots are merged.
        workers (int): Sub-windows evaluated concurrently. The result does not depend on it.

    Returns:
        SpectrumResult: Possibly empty.
    """
    U = _check_geometry(geom, U)
    default_lo, default_hi = default_window(geom)
    lam_min = default_lo if lam_min is None else float(lam_min)
    lam_max = default_hi if lam_max is None else float(lam_max)
    if not lam_min < lam_max:
        raise BadConfigError(f"Empty window: lam_min={lam_min} must be smaller than lam_max={lam_max}.")
    if grid_points < MIN_GRID_POINTS:
        raise BadConfigError(f"grid_points must be at least {MIN_GRID_POINTS}, got {grid_points}.")
    workers = max(1, int(workers))
    B = _secular_operator(U)

    grid = np.linspace(lam_min, lam_max, int(grid_points))
    chunks = np.array_split(grid, workers)
    parallel = Parallel(n_jobs=workers, prefer="threads")
    values = np.concatenate(parallel(delayed(_sigma_chunk)(geom, B, chunk) for chunk in chunks))

    minima = _local_minima(values)
    refined = parallel(
        delayed(_refine)(geom, B, grid[max(i - 1, 0)], grid[min(i + 1, grid.shape[0] - 1)], grid[i], values[i])
        for i in minima
    )

    roots = []
    for i, (lam, res) in zip(minima, refined):
        if res <= tol_accept:
            roots.append((lam, res, _multiplicity(geom, B, lam, tol_accept), False))
        elif res <= NEAR_MISS_RATIO * values[i]:
            warnings.warn(
                f"Sharp minimum of sigma_min near lambda={lam:.12g} (sigma_min={res:.3e}) "
                f"was not accepted: tol_accept={tol_accept:.1e}.",
                RuntimeWarning,
            )
    if lam_min <= 0.0 <= lam_max:
        res_zero = _sigma_min(geom, B, 0.0)
        if res_zero <= tol_accept:
            roots.append((0.0, res_zero, _multiplicity(geom, B, 0.0, tol_accept), True))

    result = _merge(roots, tol_merge)
    result.window = (lam_min, lam_max)
    return result


def eigenfunctions(geom: BoundaryGeometry, U, energy: float, tol_accept: float = TOLERANCE["accept"]) -> List[ModeState]:
    """L^2-normalised ModeStates spanning the kernel of the secular operator at `energy`.

    Raises:
        RootNotFoundError: If `energy` is not within the acceptance tolerance of a root.
    """
    U = _check_geometry(geom, U)
    energy = float(energy)
    Q, T = _boundary_subspace(geom, energy)
    _, s, vh = np.linalg.svd(_secular_operator(U) @ Q)
    if s[-1] > tol_accept:
        raise RootNotFoundError(f"lambda={energy:.12g} is not an eigenvalue: sigma_min={s[-1]:.3e} > {tol_accept:.1e}.")
    kernel = vh[s <= tol_accept].conj().T
    return [ModeState(geom, energy, T @ kernel[:, j]).normalized() for j in range(kernel.shape[1])]


def eigenfunction(geom: BoundaryGeometry, U, energy: float, tol_accept: float = TOLERANCE["accept"]) -> ModeState:
    """Kernel vector of the smallest singular value, normalised in L^2(Omega)."""
    U = _check_geometry(geom, U)
    energy = float(energy)
    Q, T = _boundary_subspace(geom, energy)
    _, s, vh = np.linalg.svd(_secular_operator(U) @ Q)
    if s[-1] > tol_accept:
        raise RootNotFoundError(f"lambda={energy:.12g} is not an eigenvalue: sigma_min={s[-1]:.3e} > {tol_accept:.1e}.")
    return ModeState(geom, energy, T @ vh[-1].conj()).normalized()


def disk_dirichlet_eigenvalues(R: float, m: int, count: int) -> List[float]:
    """(j_{m,k} / R)^2 for k = 1..count, from the bisection zeros of J_m."""
    return [(z / R) ** 2 for z in bessel_j_zeros(abs(m), count)]
