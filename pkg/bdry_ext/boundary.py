"""Boundary spaces: geometries, the Sobolev weights Lambda_t, the H^{-1/2} inner product and boundary unitaries.

Coordinates
-----------
Boundary vectors are stored in the Lambda-orthonormal basis of H^{-1/2}(dOmega),

    ê_j = (1 + lambda_j)^{1/4} e_j,

where e_j are the L^2-orthonormal boundary harmonics and lambda_j the Laplace-Beltrami
eigenvalues. With ||u||_{H^{-1/2}} := ||Lambda_{-1/2} u||_{L^2} the metric becomes Euclidean,
so a boundary unitary is a plain unitary array. Vectors in the e_j basis are called *raw*;
`to_hat` / `from_hat` convert between the two.

Disk modes are ordered m = 0, +1, -1, +2, -2, ..., +N, -N. The ordering is fixed for file I/O.
"""
from dataclasses import dataclass
from typing import ClassVar, Dict, Tuple, Union
import warnings
import numpy as np
import scipy.linalg
from bdry_ext.exceptions import InvalidGeometryError, BadConfigError, EigensolverError
from bdry_ext.utils import TOLERANCE, as_vector, as_square, same_length, check_unitary


@dataclass(frozen=True)
class Interval:
    """The interval [a, b]. Its boundary is the two points {a, b}; coordinates are (value at a, value at b)."""

    a: float
    b: float
    kind: ClassVar[str] = "interval"

    def __post_init__(self):
        if not (np.isfinite(self.a) and np.isfinite(self.b)) or not self.a < self.b:
            raise InvalidGeometryError(f"Interval requires a < b, got a={self.a}, b={self.b}.")

    @property
    def dim(self) -> int:
        return 2

    @property
    def length(self) -> float:
        return self.b - self.a

    def to_dict(self) -> Dict:
        return {"kind": self.kind, "a": float(self.a), "b": float(self.b)}


@dataclass(frozen=True)
class Disk:
    """The disk of radius R, boundary harmonics e^{im theta} truncated to |m| <= N."""

    R: float
    N: int
    kind: ClassVar[str] = "disk"

    def __post_init__(self):
        if not np.isfinite(self.R) or self.R <= 0:
            raise InvalidGeometryError(f"Disk requires R > 0, got R={self.R}.")
        if int(self.N) != self.N or self.N < 0:
            raise InvalidGeometryError(f"Disk requires an integer cutoff N >= 0, got N={self.N}.")

    @property
    def dim(self) -> int:
        return 2 * self.N + 1

    @property
    def length(self) -> float:
        return self.R

    @property
    def modes(self) -> np.ndarray:
        """Angular mode numbers in storage order: 0, 1, -1, 2, -2, ..."""
        modes = [0]
        for m in range(1, self.N + 1):
            modes.extend([m, -m])
        return np.array(modes, dtype=int)

    def mode_index(self, m: int) -> int:
        if abs(m) > self.N:
            raise InvalidGeometryError(f"Mode m={m} exceeds the cutoff N={self.N}.")
        return 0 if m == 0 else 2 * abs(m) - (1 if m > 0 else 0)

    def to_dict(self) -> Dict:
        return {"kind": self.kind, "R": float(self.R), "N": int(self.N)}


BoundaryGeometry = Union[Interval, Disk]


def geometry_from_dict(data: Dict) -> BoundaryGeometry:
    """Parse the geometry JSON, e.g. `{"kind": "disk", "R": 1.0, "N": 8}`.

    Raises:
        BadConfigError: If the kind is unknown, or a required key is missing or not a number.
        InvalidGeometryError: If the disk cutoff N is not an integer.
    """
    if not isinstance(data, dict) or "kind" not in data:
        raise BadConfigError("Geometry must be a mapping with a 'kind' key.")
    kind = str(data["kind"]).lower()
    try:
        if kind == "interval":
            return Interval(float(data["a"]), float(data["b"]))
        if kind == "disk":
            N = float(data["N"])
            if not N.is_integer():
                raise InvalidGeometryError(f"Disk cutoff N must be an integer, got {data['N']!r}.")
            return Disk(float(data["R"]), int(N))
    except KeyError as e:
        raise BadConfigError(f"Geometry '{kind}' is missing the key {e}.")
    except (TypeError, ValueError) as e:
        raise BadConfigError(f"Geometry '{kind}' has a non-numeric parameter: {e}")
    raise BadConfigError(f"Unknown geometry kind: {data['kind']} (Should be 'interval' or 'disk'.)")


def lb_eigenvalues(geom: BoundaryGeometry) -> np.ndarray:
    """Laplace-Beltrami eigenvalues of the boundary in storage order."""
    if isinstance(geom, Interval):
        # The boundary is zero-dimensional.
        return np.zeros(2)
    return geom.modes.astype(float) ** 2 / geom.R**2


def sobolev_weights(geom: BoundaryGeometry, t: float) -> np.ndarray:
    """Diagonal of Lambda_t = (I - Delta_LB)^{t/2} in mode coordinates."""
    return (1.0 + lb_eigenvalues(geom)) ** (t / 2.0)


def to_hat(geom: BoundaryGeometry, g) -> np.ndarray:
    """Raw L^2 coefficients -> Lambda-orthonormal coordinates: ĝ_j = (1 + lambda_j)^{-1/4} g_j."""
    g = as_vector(g, geom.dim, "raw vector")
    return sobolev_weights(geom, -0.5) * g


def from_hat(geom: BoundaryGeometry, g_hat) -> np.ndarray:
    g_hat = as_vector(g_hat, geom.dim, "hat vector")
    return sobolev_weights(geom, 0.5) * g_hat


def operator_to_hat(geom: BoundaryGeometry, A) -> np.ndarray:
    """Â = S A S^{-1} with S = diag((1 + lambda_j)^{-1/4})."""
    A = as_square(A, geom.dim, "raw operator")
    s = sobolev_weights(geom, -0.5)
    return (s[:, None] * A) / s[None, :]


def h_inner(u, v) -> complex:
    """<u|v> in H^{-1/2}(dOmega), anti-linear in the first argument."""
    u = as_vector(u, name="u")
    v = as_vector(v, name="v")
    same_length(u, v)
    return complex(np.vdot(u, v))


def pairing(geom: BoundaryGeometry, s: float, u, v) -> complex:
    """Duality pairing <u, v>_{s,-s} = <Lambda_s u | Lambda_{-s} v>_{L^2} on raw coefficients."""
    u = as_vector(u, geom.dim, "u")
    v = as_vector(v, geom.dim, "v")
    return complex(np.vdot(sobolev_weights(geom, s) * u, sobolev_weights(geom, -s) * v))


def _unitary_schur(U: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    # A normal matrix has a diagonal complex Schur form, so Z holds orthonormal eigenvectors
    # even inside degenerate eigenspaces.
    try:
        T, Z = scipy.linalg.schur(U, output="complex")
    except (np.linalg.LinAlgError, ValueError) as e:
        raise EigensolverError(f"Schur decomposition of the boundary unitary failed: {e}")
    return np.diag(T), Z


def unitary_eigenvalues(U) -> np.ndarray:
    U = as_square(U, name="U")
    return _unitary_schur(U)[0]


def spectral_split(U, tol_one: float = TOLERANCE["one"]) -> Tuple[np.ndarray, np.ndarray]:
    """Orthonormal bases of the eigenspace of 1 (Ran P_U) and of its complement (Ran Q_U).

    Eigenvalues w with |w - 1| <= tol_one count as 1. Eigenvalues just outside the threshold
    (within a factor 1e3) make the split ambiguous and trigger a RuntimeWarning.
    """
    U = as_square(U, name="U")
    if U.shape[0] == 0:
        empty = np.zeros((0, 0), dtype=np.complex128)
        return empty, empty
    w, Z = _unitary_schur(U)
    dist = np.abs(w - 1.0)
    at_one = dist <= tol_one
    straddling = (dist > tol_one) & (dist <= 1e3 * tol_one)
    if np.any(straddling):
        warnings.warn(
            f"Eigenvalues of U at distance {dist[straddling].min():.2e} from 1 lie close to tol_one={tol_one:.1e}; "
            "the split into Ran P_U and Ran Q_U is ill-determined.",
            RuntimeWarning,
            stacklevel=2,
        )
    return Z[:, at_one], Z[:, ~at_one]


def spectral_projectors(U, tol_one: float = TOLERANCE["one"]) -> Tuple[np.ndarray, np.ndarray]:
    """(P_U, Q_U): projectors onto the eigenspace of 1 and onto its orthogonal complement."""
    basis_one, basis_rest = spectral_split(U, tol_one)
    d = np.asarray(U).shape[0]
    P = basis_one @ basis_one.conj().T if basis_one.size else np.zeros((d, d), dtype=np.complex128)
    Q = np.eye(d, dtype=np.complex128) - P
    # Hermitian symmetrisation keeps P, Q idempotent to rounding.
    P = 0.5 * (P + P.conj().T)
    Q = 0.5 * (Q + Q.conj().T)
    return P, Q


def random_unitary(d: int, seed: int) -> np.ndarray:
    """Haar-distributed unitary from a seeded complex Gaussian array (QR with phase correction)."""
    if d < 1:
        raise InvalidGeometryError(f"Unitary dimension must be >= 1, got {d}.")
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    phases = np.diag(r) / np.abs(np.diag(r))
    return check_unitary(q * phases[None, :])


def random_hermitian(d: int, seed: int, scale: float = 1.0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return scale * 0.5 * (z + z.conj().T)


def unitary_from_json(data, dim: int = None) -> np.ndarray:
    """Row-major array of [re, im] pairs -> complex array (validated unitary)."""
    arr = np.asarray(data, dtype=float)
    if arr.ndim != 3 or arr.shape[-1] != 2:
        raise BadConfigError("A unitary must be given as a row-major array of [re, im] pairs.")
    U = arr[..., 0] + 1j * arr[..., 1]
    return check_unitary(as_square(U, dim, "U"))
