"""P1 finite-element eigenvalues of T_U on the interval, computed from the quadratic form.

The discrete form on continuous piecewise-linear v with end values g = (v(a), v(b)) is

    t_h(v) = ||v'||^2 - <g|DtN g> + <g|K_U g> + rho ||P_U g||^2,

where ||v'||^2 - <g|DtN g> = ||grad v_D||^2 for the regular part and the penalty rho enforces the
form-domain constraint P_U gamma v = 0. Hat and raw coordinates coincide on the interval.
"""
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence
import numpy as np
import scipy.linalg
import scipy.sparse
from scipy.sparse.linalg import eigsh, ArpackError, ArpackNoConvergence
from bdry_ext.boundary import BoundaryGeometry, Interval, spectral_projectors
from bdry_ext.cayley import k_u
from bdry_ext.domain import dtn
from bdry_ext.exceptions import BadConfigError, CountMismatchError, EigensolverError, InvalidGeometryError
from bdry_ext.spectral import SpectrumResult
from bdry_ext.utils import TOLERANCE, check_unitary


PENALTY = 1e8
MIN_ELEMENTS = 64
COARSE_ELEMENTS = 256


@dataclass(frozen=True)
class FemProblem:
    """Generalised eigenproblem (A + boundary terms) v = lambda B v on a uniform mesh.

    Attributes:
        geom (Interval): The interval.
        n (int): Number of elements; n + 1 nodal values.
        stiffness (scipy.sparse.csr_matrix): int v' w'.
        mass (scipy.sparse.csr_matrix): int v w.
        boundary (np.ndarray): 2 x 2 Hermitian array acting on (v(a), v(b)).
    """

    geom: Interval
    n: int
    stiffness: scipy.sparse.csr_matrix
    mass: scipy.sparse.csr_matrix
    boundary: np.ndarray

    @property
    def nodes(self) -> np.ndarray:
        return np.linspace(self.geom.a, self.geom.b, self.n + 1)

    @property
    def operator(self) -> scipy.sparse.csr_matrix:
        ends = np.array([0, self.n])
        rows, cols = np.meshgrid(ends, ends, indexing="ij")
        coupling = scipy.sparse.coo_matrix(
            (self.boundary.ravel(), (rows.ravel(), cols.ravel())), shape=(self.n + 1, self.n + 1)
        )
        return (self.stiffness.astype(np.complex128) + coupling).tocsr()


def fem_problem(geom: BoundaryGeometry, U, n: int, rho: float = PENALTY, tol_one: float = TOLERANCE["one"]) -> FemProblem:
    """Assemble the P1 matrices and the boundary block -DtN + K_U + rho P_U.

    Raises:
        InvalidGeometryError: For anything but an interval.
        BadConfigError: If n < 64.
    """
    if not isinstance(geom, Interval):
        raise InvalidGeometryError("The finite-element oracle works on the interval only.")
    if n < MIN_ELEMENTS:
        raise BadConfigError(f"n_elements must be at least {MIN_ELEMENTS}, got {n}.")
    U = check_unitary(U)
    if U.shape != (2, 2):
        raise BadConfigError(f"The interval carries a 2 x 2 boundary unitary, got {U.shape}.")
    h = geom.length / n
    main = np.full(n + 1, 2.0)
    main[[0, -1]] = 1.0
    off = np.ones(n)
    stiffness = scipy.sparse.diags([-off, main, -off], [-1, 0, 1], format="csr") / h
    mass = scipy.sparse.diags([off, 2.0 * main, off], [-1, 0, 1], format="csr") * (h / 6.0)
    P, _ = spectral_projectors(U, tol_one)
    boundary = -dtn(geom) + k_u(U, tol_one).K + rho * P
    return FemProblem(geom=geom, n=n, stiffness=stiffness, mass=mass, boundary=0.5 * (boundary + boundary.conj().T))


def _dense_eigenvalues(problem: FemProblem, count: int) -> np.ndarray:
    try:
        return scipy.linalg.eigh(
            problem.operator.toarray(), problem.mass.toarray(), eigvals_only=True, subset_by_index=[0, count - 1]
        )
    except (np.linalg.LinAlgError, ValueError) as e:
        raise EigensolverError(f"Dense generalised eigensolver failed: {e}")


def _sparse_eigenvalues(problem: FemProblem, count: int, shift: float) -> np.ndarray:
    try:
        values = eigsh(problem.operator, k=count, M=problem.mass.astype(np.complex128), sigma=shift, which="LM",
                       return_eigenvectors=False)
    except (ArpackError, ArpackNoConvergence, RuntimeError) as e:
        raise EigensolverError(f"Shift-invert eigensolver failed: {e}")
    return np.sort(np.real(values))


def fem_spectrum(
    geom: BoundaryGeometry,
    U,
    n: int = 2048,
    count: int = 6,
    solver: str = "sparse",
    rho: float = PENALTY,
    tol_one: float = TOLERANCE["one"],
) -> List[float]:
    """Lowest `count` eigenvalues of the discretised form.

    `solver="dense"` runs scipy.linalg.eigh on the full arrays. `solver="sparse"` runs shift-invert
    ARPACK below the lowest eigenvalue of a coarse dense solve, which returns the same values
    for meshes where the dense problem is impractical.
    """
    if count < 1 or count > n:
        raise BadConfigError(f"count must lie in [1, n_elements={n}], got {count}.")
    problem = fem_problem(geom, U, n, rho, tol_one)
    if solver == "dense":
        return [float(v) for v in _dense_eigenvalues(problem, count)]
    if solver != "sparse":
        raise BadConfigError(f"Unknown FEM solver '{solver}' (Should be 'dense' or 'sparse'.)")
    coarse = fem_problem(geom, U, min(n, COARSE_ELEMENTS), rho, tol_one)
    lowest = float(_dense_eigenvalues(coarse, 1)[0])
    # Conforming P1 eigenvalues approach the form's eigenvalues from above, so the fine spectrum
    # starts below `lowest`.
    shift = lowest - (1.0 + 0.5 * abs(lowest))
    return [float(v) for v in _sparse_eigenvalues(problem, count, shift)]


def rayleigh_quotient(problem: FemProblem, values: Sequence[complex]) -> float:
    """t_h(v) / ||v||^2 for nodal values v."""
    v = np.asarray(values, dtype=np.complex128)
    if v.shape != (problem.n + 1,):
        raise BadConfigError(f"Expected {problem.n + 1} nodal values, got shape {v.shape}.")
    numerator = np.vdot(v, problem.operator @ v)
    denominator = np.vdot(v, problem.mass @ v)
    return float(numerator.real / denominator.real)


@dataclass(frozen=True)
class ComparisonRow:
    index: int
    secular: float
    fem: float
    abs_dev: float
    rel_dev: float
    ok: bool


@dataclass(frozen=True)
class ComparisonReport:
    rows: List[ComparisonRow]
    passed: bool

    def to_dict(self) -> Dict:
        return {
            "passed": self.passed,
            "rows": [
                {"index": r.index, "secular": r.secular, "fem": r.fem, "abs_dev": r.abs_dev, "rel_dev": r.rel_dev, "ok": r.ok}
                for r in self.rows
            ],
        }


def compare_spectra(
    mode_result: SpectrumResult, fem_result: Sequence[float], count: Optional[int] = None
) -> ComparisonReport:
    """PASS iff each of the first `count` values agrees within max(1e-3, 5e-3 |lambda|).

    Raises:
        CountMismatchError: If either side holds fewer than `count` values.
    """
    secular = mode_result.expanded()
    fem = sorted(float(v) for v in fem_result)
    count = min(len(secular), len(fem)) if count is None else count
    if count < 1 or len(secular) < count or len(fem) < count:
        raise CountMismatchError(
            f"Cannot compare {count} eigenvalues: the secular solver found {len(secular)}, the oracle {len(fem)}."
        )
    rows = []
    for i in range(count):
        deviation = abs(secular[i] - fem[i])
        rel = deviation / max(abs(secular[i]), np.finfo(float).tiny)
        ok = deviation <= max(1e-3, 5e-3 * abs(secular[i]))
        rows.append(ComparisonRow(i, secular[i], fem[i], deviation, rel, bool(ok)))
    return ComparisonReport(rows=rows, passed=all(r.ok for r in rows))
