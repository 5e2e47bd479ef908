"""Geometry-side operators: traces, normal derivatives, Dirichlet-to-Neumann map, harmonic extension, Pi_D and mu.

Functions on the domain are represented by `CatalogFunction`: a map from an angular mode m to a
radial profile f_m(r) (value and first two derivatives), so that psi(r, theta) = sum_m f_m(r) e^{i m theta}.
On the interval the single key 0 holds the profile in the coordinate x itself.

Boundary data are expanded in the L^2(dOmega)-orthonormal harmonics (raw coordinates):
interval -> point values at (a, b); disk -> e_m(theta) = e^{i m theta} / sqrt(2 pi R).
Normals point outwards: -d/dx at a, +d/dx at b, +d/dr on the circle.
"""
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Dict, List, Mapping, Tuple
import numpy as np
from scipy.integrate import simpson
from bdry_ext.boundary import BoundaryGeometry, Interval, Disk, sobolev_weights
from bdry_ext.bessel import (
    bessel_j,
    bessel_j_prime,
    bessel_j_second,
    bessel_i,
    bessel_i_prime,
    bessel_i_second,
    bessel_j_zeros,
)
from bdry_ext.exceptions import DimensionMismatchError, DomainError
from bdry_ext.utils import as_vector


SIMPSON_PANELS = 2048
GAUSS_NODES = 128

Profile = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class RadialProfile:
    """A smooth profile with its first and second derivatives (vectorised callables)."""

    value: Profile
    d1: Profile
    d2: Profile

    def combine(self, other: "RadialProfile", alpha: complex, beta: complex) -> "RadialProfile":
        return RadialProfile(
            value=lambda t: alpha * self.value(t) + beta * other.value(t),
            d1=lambda t: alpha * self.d1(t) + beta * other.d1(t),
            d2=lambda t: alpha * self.d2(t) + beta * other.d2(t),
        )

    def scaled(self, alpha: complex) -> "RadialProfile":
        return RadialProfile(
            value=lambda t: alpha * self.value(t),
            d1=lambda t: alpha * self.d1(t),
            d2=lambda t: alpha * self.d2(t),
        )


def _zero(t):
    return np.zeros_like(np.asarray(t, dtype=float), dtype=np.complex128)


ZERO_PROFILE = RadialProfile(_zero, _zero, _zero)


def constant_profile(c: complex) -> RadialProfile:
    return RadialProfile(lambda t: c + _zero(t), _zero, _zero)


def power_profile(c: complex, p: int, origin: float = 0.0, scale: float = 1.0) -> RadialProfile:
    """c * ((t - origin) / scale)^p."""
    if p == 0:
        return constant_profile(c)
    k = c / scale**p

    def d1(t):
        return k * p * (np.asarray(t) - origin) ** (p - 1) + _zero(t)

    def d2(t):
        return (k * p * (p - 1) * (np.asarray(t) - origin) ** (p - 2) if p >= 2 else 0.0) + _zero(t)

    return RadialProfile(lambda t: k * (np.asarray(t) - origin) ** p + _zero(t), d1, d2)


@dataclass(frozen=True)
class CatalogFunction:
    """A closed-form function on the closure of Omega.

    Attributes:
        geom (BoundaryGeometry): The domain.
        profiles (Mapping[int, RadialProfile]): Mode number -> radial profile (interval: {0: profile in x}).
        name (str): Label used by the CLI and in reports.
    """

    geom: BoundaryGeometry
    profiles: Mapping[int, RadialProfile]
    name: str = "anonymous"

    def __post_init__(self):
        if isinstance(self.geom, Interval) and set(self.profiles) - {0}:
            raise DimensionMismatchError("Interval functions carry a single profile under key 0.")
        if isinstance(self.geom, Disk):
            for m in self.profiles:
                self.geom.mode_index(m)

    def __call__(self, x, theta=None):
        if isinstance(self.geom, Interval):
            return self.profiles[0].value(np.asarray(x, dtype=float))
        r = np.asarray(x, dtype=float)
        theta = np.zeros_like(r) if theta is None else np.asarray(theta, dtype=float)
        return sum(p.value(r) * np.exp(1j * m * theta) for m, p in self.profiles.items())

    def _combined(self, other: "CatalogFunction", alpha: complex, beta: complex, name: str) -> "CatalogFunction":
        if self.geom != other.geom:
            raise DimensionMismatchError(f"Cannot combine functions on {self.geom} and {other.geom}.")
        keys = sorted(set(self.profiles) | set(other.profiles))
        profiles = {
            m: self.profiles.get(m, ZERO_PROFILE).combine(other.profiles.get(m, ZERO_PROFILE), alpha, beta) for m in keys
        }
        return CatalogFunction(self.geom, profiles, name)

    def __add__(self, other: "CatalogFunction") -> "CatalogFunction":
        return self._combined(other, 1.0, 1.0, f"({self.name} + {other.name})")

    def __sub__(self, other: "CatalogFunction") -> "CatalogFunction":
        return self._combined(other, 1.0, -1.0, f"({self.name} - {other.name})")

    def scaled(self, alpha: complex) -> "CatalogFunction":
        return CatalogFunction(self.geom, {m: p.scaled(alpha) for m, p in self.profiles.items()}, self.name)

    def trace(self) -> Tuple[np.ndarray, np.ndarray]:
        """Analytic boundary data (g, n) in raw coordinates."""
        geom = self.geom
        if isinstance(geom, Interval):
            p = self.profiles[0]
            ends = np.array([geom.a, geom.b])
            g = p.value(ends).astype(np.complex128)
            d = p.d1(ends).astype(np.complex128)
            return g, np.array([-d[0], d[1]])
        g = np.zeros(geom.dim, dtype=np.complex128)
        n = np.zeros(geom.dim, dtype=np.complex128)
        s = np.sqrt(2.0 * np.pi * geom.R)
        R = np.array([geom.R])
        for m, p in self.profiles.items():
            j = geom.mode_index(m)
            g[j] = s * p.value(R)[0]
            n[j] = s * p.d1(R)[0]
        return g, n

    def boundary_data_defect(self, rel_step: float = 1e-5) -> float:
        """Max deviation of the analytic (g, n) from second-order one-sided differences."""
        geom = self.geom
        g, n = self.trace()
        h = rel_step * geom.length
        if isinstance(geom, Interval):
            f = self.profiles[0].value
            a, b = geom.a, geom.b
            g_fd = np.array([f(np.array([a]))[0], f(np.array([b]))[0]])
            da = (-3 * f(np.array([a]))[0] + 4 * f(np.array([a + h]))[0] - f(np.array([a + 2 * h]))[0]) / (2 * h)
            db = (3 * f(np.array([b]))[0] - 4 * f(np.array([b - h]))[0] + f(np.array([b - 2 * h]))[0]) / (2 * h)
            n_fd = np.array([-da, db])
        else:
            g_fd = np.zeros(geom.dim, dtype=np.complex128)
            n_fd = np.zeros(geom.dim, dtype=np.complex128)
            s = np.sqrt(2.0 * np.pi * geom.R)
            rs = np.array([geom.R, geom.R - h, geom.R - 2 * h])
            for m, p in self.profiles.items():
                v = p.value(rs)
                j = geom.mode_index(m)
                g_fd[j] = s * v[0]
                n_fd[j] = s * (3 * v[0] - 4 * v[1] + v[2]) / (2 * h)
        return float(max(np.max(np.abs(g - g_fd)), np.max(np.abs(n - n_fd))))


# Quadrature ##################################################################


@lru_cache(maxsize=None)
def _gauss_legendre(R: float) -> Tuple[np.ndarray, np.ndarray]:
    t, w = np.polynomial.legendre.leggauss(GAUSS_NODES)
    return 0.5 * R * (t + 1.0), 0.5 * R * w


@lru_cache(maxsize=None)
def _simpson_grid(a: float, b: float) -> np.ndarray:
    return np.linspace(a, b, 2 * SIMPSON_PANELS + 1)


def _minus_laplacian(m: int, p: RadialProfile, r: np.ndarray) -> np.ndarray:
    return -(p.d2(r) + p.d1(r) / r - (m * m) * p.value(r) / r**2)


def l2_inner(phi: CatalogFunction, psi: CatalogFunction) -> complex:
    """<phi|psi>_{L^2(Omega)} by quadrature."""
    return _volume_pairing(phi, psi, lambda m, p, t: p.value(t))


def l2_inner_tstar(phi: CatalogFunction, psi: CatalogFunction) -> complex:
    """<phi|T* psi>_{L^2(Omega)} with T* = -Delta, by quadrature."""
    if isinstance(psi.geom, Interval):
        return _volume_pairing(phi, psi, lambda m, p, t: -p.d2(t))
    return _volume_pairing(phi, psi, _minus_laplacian)


def l2_norm(psi: CatalogFunction) -> float:
    return float(np.sqrt(max(l2_inner(psi, psi).real, 0.0)))


def _volume_pairing(phi: CatalogFunction, psi: CatalogFunction, apply) -> complex:
    if phi.geom != psi.geom:
        raise DimensionMismatchError(f"Functions live on different domains: {phi.geom} vs {psi.geom}.")
    geom = phi.geom
    if isinstance(geom, Interval):
        x = _simpson_grid(geom.a, geom.b)
        integrand = np.conj(phi.profiles[0].value(x)) * apply(0, psi.profiles[0], x)
        return complex(simpson(integrand, x=x))
    r, w = _gauss_legendre(geom.R)
    total = 0.0 + 0.0j
    for m in set(phi.profiles) & set(psi.profiles):
        integrand = np.conj(phi.profiles[m].value(r)) * apply(m, psi.profiles[m], r)
        total += 2.0 * np.pi * np.sum(w * r * integrand)
    return complex(total)


def gradient_energy(psi: CatalogFunction) -> float:
    """||grad psi||^2_{L^2(Omega)} by quadrature."""
    geom = psi.geom
    if isinstance(geom, Interval):
        x = _simpson_grid(geom.a, geom.b)
        return float(simpson(np.abs(psi.profiles[0].d1(x)) ** 2, x=x))
    r, w = _gauss_legendre(geom.R)
    total = 0.0
    for m, p in psi.profiles.items():
        integrand = np.abs(p.d1(r)) ** 2 + (m * m) * np.abs(p.value(r)) ** 2 / r**2
        total += 2.0 * np.pi * float(np.sum(w * r * integrand))
    return total


# Boundary operators ##########################################################


def dtn(geom: BoundaryGeometry) -> np.ndarray:
    """Dirichlet-to-Neumann map in raw coordinates."""
    if isinstance(geom, Interval):
        return np.array([[1.0, -1.0], [-1.0, 1.0]]) / geom.length
    return np.diag(np.abs(geom.modes).astype(float) / geom.R)


def mu_from_trace(geom: BoundaryGeometry, g, n) -> np.ndarray:
    """Regularized normal derivative in hat coordinates: Lambda (n - DtN g) expressed in the ê basis."""
    g = as_vector(g, geom.dim, "g")
    n = as_vector(n, geom.dim, "n")
    return sobolev_weights(geom, 0.5) * (n - dtn(geom) @ g)


def gamma_hat(geom: BoundaryGeometry, g) -> np.ndarray:
    """Trace in hat coordinates."""
    g = as_vector(g, geom.dim, "g")
    return sobolev_weights(geom, -0.5) * g


def harmonic_extension(geom: BoundaryGeometry, g) -> CatalogFunction:
    """The harmonic function with trace g (raw coordinates)."""
    g = as_vector(g, geom.dim, "g")
    if isinstance(geom, Interval):
        slope = (g[1] - g[0]) / geom.length
        profile = constant_profile(g[0]).combine(power_profile(1.0, 1, origin=geom.a), 1.0, slope)
        return CatalogFunction(geom, {0: profile}, "harmonic")
    s = np.sqrt(2.0 * np.pi * geom.R)
    profiles = {int(m): power_profile(g[j] / s, abs(int(m)), scale=geom.R) for j, m in enumerate(geom.modes) if g[j] != 0}
    return CatalogFunction(geom, profiles, "harmonic")


def pi_d(geom: BoundaryGeometry, psi: CatalogFunction) -> CatalogFunction:
    """Pi_D psi = psi - harmonic_extension(gamma psi): the component in D(T_D)."""
    g, _ = psi.trace()
    regular = psi - harmonic_extension(geom, g)
    return CatalogFunction(geom, regular.profiles, f"Pi_D {psi.name}")


def decompose(geom: BoundaryGeometry, psi: CatalogFunction) -> Tuple[CatalogFunction, CatalogFunction]:
    """psi = psi_D + psi_0 with gamma psi_D = 0 and Delta psi_0 = 0."""
    g, _ = psi.trace()
    return pi_d(geom, psi), harmonic_extension(geom, g)


def boundary_pair_data(psi: CatalogFunction) -> Tuple[np.ndarray, np.ndarray]:
    """(gamma psi, mu psi) in hat coordinates."""
    g, n = psi.trace()
    return gamma_hat(psi.geom, g), mu_from_trace(psi.geom, g, n)


# Energy basis of -Delta u = lambda u ##########################################


def interval_basis_kind(geom: Interval, energy: float) -> str:
    """Which fundamental system spans the solutions at this energy.

    For lambda = -kappa^2 with kappa * length > 1 the pair (cosh, sinh) is replaced by the decaying
    exponentials e^{-kappa(x-a)}, e^{-kappa(b-x)} (the growing branch rescaled by e^{-kappa length});
    both pairs span the same space.
    """
    if energy > 0:
        return "trigonometric"
    if energy == 0:
        return "polynomial"
    kappa = np.sqrt(-energy)
    return "hyperbolic" if kappa * geom.length <= 1.0 else "exponential"


def _interval_basis(geom: Interval, energy: float) -> List[RadialProfile]:
    a, b = geom.a, geom.b
    kind = interval_basis_kind(geom, energy)
    if kind == "polynomial":
        return [constant_profile(1.0), power_profile(1.0, 1, origin=a)]
    if kind == "trigonometric":
        k = np.sqrt(energy)
        return [
            RadialProfile(lambda x: np.cos(k * (x - a)) + 0j, lambda x: -k * np.sin(k * (x - a)) + 0j,
                          lambda x: -k * k * np.cos(k * (x - a)) + 0j),
            RadialProfile(lambda x: np.sin(k * (x - a)) + 0j, lambda x: k * np.cos(k * (x - a)) + 0j,
                          lambda x: -k * k * np.sin(k * (x - a)) + 0j),
        ]
    kappa = np.sqrt(-energy)
    if kind == "hyperbolic":
        return [
            RadialProfile(lambda x: np.cosh(kappa * (x - a)) + 0j, lambda x: kappa * np.sinh(kappa * (x - a)) + 0j,
                          lambda x: kappa**2 * np.cosh(kappa * (x - a)) + 0j),
            RadialProfile(lambda x: np.sinh(kappa * (x - a)) + 0j, lambda x: kappa * np.cosh(kappa * (x - a)) + 0j,
                          lambda x: kappa**2 * np.sinh(kappa * (x - a)) + 0j),
        ]
    return [
        RadialProfile(lambda x: np.exp(-kappa * (x - a)) + 0j, lambda x: -kappa * np.exp(-kappa * (x - a)) + 0j,
                      lambda x: kappa**2 * np.exp(-kappa * (x - a)) + 0j),
        RadialProfile(lambda x: np.exp(-kappa * (b - x)) + 0j, lambda x: kappa * np.exp(-kappa * (b - x)) + 0j,
                      lambda x: kappa**2 * np.exp(-kappa * (b - x)) + 0j),
    ]


def _disk_radial(order: int, energy: float) -> RadialProfile:
    # Only the solution regular at the origin is kept. The second solution behaves like
    # log r (m = 0) or r^{-|m|}: for |m| >= 1, int |r^{-|m|}|^2 r dr diverges, and for m = 0
    # log r is square integrable but Delta log r = 2 pi delta_0 is not in L^2.
    if energy > 0:
        k = np.sqrt(energy)
        return RadialProfile(
            lambda r: bessel_j(order, k * np.asarray(r)) + 0j,
            lambda r: k * bessel_j_prime(order, k * np.asarray(r)) + 0j,
            lambda r: k * k * bessel_j_second(order, k * np.asarray(r)) + 0j,
        )
    if energy == 0:
        return power_profile(1.0, order)
    kappa = np.sqrt(-energy)
    return RadialProfile(
        lambda r: bessel_i(order, kappa * np.asarray(r)) + 0j,
        lambda r: kappa * bessel_i_prime(order, kappa * np.asarray(r)) + 0j,
        lambda r: kappa**2 * bessel_i_second(order, kappa * np.asarray(r)) + 0j,
    )


def basis_size(geom: BoundaryGeometry) -> int:
    return 2 if isinstance(geom, Interval) else geom.dim


def basis_trace_data(geom: BoundaryGeometry, energy: float) -> Tuple[np.ndarray, np.ndarray]:
    """Raw boundary data (G, Nn) of the energy basis: column j holds (g, n) of basis solution j."""
    if isinstance(geom, Interval):
        cols = [CatalogFunction(geom, {0: p}).trace() for p in _interval_basis(geom, energy)]
        return np.column_stack([c[0] for c in cols]), np.column_stack([c[1] for c in cols])
    orders = np.abs(geom.modes)
    R = geom.R
    if energy > 0:
        k = np.sqrt(energy)
        value, slope = bessel_j(orders, k * R), k * bessel_j_prime(orders, k * R)
    elif energy == 0:
        value = R ** orders.astype(float)
        slope = orders * R ** (orders - 1.0)
    else:
        kappa = np.sqrt(-energy)
        value, slope = bessel_i(orders, kappa * R), kappa * bessel_i_prime(orders, kappa * R)
    s = np.sqrt(2.0 * np.pi * R)
    return np.diag(s * value).astype(np.complex128), np.diag(s * slope).astype(np.complex128)


@dataclass(frozen=True)
class ModeState:
    """A solution of -Delta u = lambda u given by coefficients over the energy basis.

    Interval: 2 coefficients on the fundamental system picked by `interval_basis_kind`.
    Disk: one coefficient per stored mode m on J_|m|(kr), r^|m| or I_|m|(kappa r) (times e^{i m theta}).
    Every represented function lies in D(T*) with T* u = lambda u.
    """

    geom: BoundaryGeometry
    energy: float
    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = as_vector(self.coeffs, basis_size(self.geom), "ModeState coefficients")
        object.__setattr__(self, "coeffs", coeffs)

    def as_function(self, name: str = None) -> CatalogFunction:
        name = name or f"mode state at lambda={self.energy:.6g}"
        if isinstance(self.geom, Interval):
            p0, p1 = _interval_basis(self.geom, self.energy)
            return CatalogFunction(self.geom, {0: p0.combine(p1, self.coeffs[0], self.coeffs[1])}, name)
        profiles = {
            int(m): _disk_radial(abs(int(m)), self.energy).scaled(c)
            for m, c in zip(self.geom.modes, self.coeffs)
            if c != 0
        }
        return CatalogFunction(self.geom, profiles, name)

    def normalized(self) -> "ModeState":
        norm = l2_norm(self.as_function())
        if norm == 0.0:
            raise DomainError("Cannot normalise the zero state.")
        return ModeState(self.geom, self.energy, self.coeffs / norm)


def trace_data(state: ModeState) -> Tuple[np.ndarray, np.ndarray]:
    """(g, n) in raw coordinates for a ModeState."""
    G, Nn = basis_trace_data(state.geom, state.energy)
    return G @ state.coeffs, Nn @ state.coeffs


# Catalog #####################################################################


def _interval_catalog(geom: Interval) -> Dict[str, CatalogFunction]:
    a, ell = geom.a, geom.length
    w = np.pi / ell

    def trig(fn, dfn, c=1.0):
        return RadialProfile(
            lambda x: fn(w * (x - a)) * c + 0j, lambda x: w * dfn(w * (x - a)) * c + 0j,
            lambda x: -w * w * fn(w * (x - a)) * c + 0j,
        )

    sine = trig(np.sin, np.cos)
    cosine = trig(np.cos, lambda t: -np.sin(t))
    linear = power_profile(1.0, 1, origin=a)
    bubble = RadialProfile(
        lambda x: (x - a) * (ell - (x - a)) + 0j, lambda x: ell - 2 * (x - a) + 0j, lambda x: -2.0 + _zero(x)
    )
    bump = RadialProfile(
        lambda x: ((x - a) * (ell - (x - a))) ** 2 + 0j,
        lambda x: 2 * (x - a) * (ell - (x - a)) * (ell - 2 * (x - a)) + 0j,
        lambda x: 2 * (ell**2 - 6 * ell * (x - a) + 6 * (x - a) ** 2) + 0j,
    )
    cubic = power_profile(1.0, 3, origin=a, scale=ell)
    expo = RadialProfile(
        lambda x: np.exp((x - a) / ell) + 0j, lambda x: np.exp((x - a) / ell) / ell + 0j,
        lambda x: np.exp((x - a) / ell) / ell**2 + 0j,
    )
    wave = RadialProfile(
        lambda x: np.exp(1j * w * (x - a)), lambda x: 1j * w * np.exp(1j * w * (x - a)),
        lambda x: -w * w * np.exp(1j * w * (x - a)),
    )
    profiles = {
        "constant": constant_profile(1.0),
        "linear": linear,
        "sine": sine,
        "cosine": cosine,
        "sine_plus_linear": sine.combine(linear, 1.0, 1.0),
        "bubble": bubble,
        "bump": bump,
        "cubic": cubic,
        "exp": expo,
        "wave": wave,
    }
    return {name: CatalogFunction(geom, {0: p}, name) for name, p in profiles.items()}


def _disk_catalog(geom: Disk) -> Dict[str, CatalogFunction]:
    R = geom.R
    k01 = bessel_j_zeros(0, 1)[0] / R
    bubble = RadialProfile(lambda r: R**2 - np.asarray(r) ** 2 + 0j, lambda r: -2 * np.asarray(r) + 0j,
                           lambda r: -2.0 + _zero(r))
    bump = RadialProfile(
        lambda r: (R**2 - np.asarray(r) ** 2) ** 2 + 0j,
        lambda r: -4 * np.asarray(r) * (R**2 - np.asarray(r) ** 2) + 0j,
        lambda r: -4 * R**2 + 12 * np.asarray(r) ** 2 + 0j,
    )
    bessel = RadialProfile(
        lambda r: bessel_j(0, k01 * np.asarray(r)) + 0j,
        lambda r: k01 * bessel_j_prime(0, k01 * np.asarray(r)) + 0j,
        lambda r: k01**2 * bessel_j_second(0, k01 * np.asarray(r)) + 0j,
    )
    shell = RadialProfile(
        lambda r: np.asarray(r) * (R**2 - np.asarray(r) ** 2) + 0j,
        lambda r: R**2 - 3 * np.asarray(r) ** 2 + 0j,
        lambda r: -6 * np.asarray(r) + 0j,
    )
    entries: Dict[str, Dict[int, RadialProfile]] = {
        "constant": {0: constant_profile(1.0)},
        "bubble": {0: bubble},
        "bump": {0: bump},
        "bessel": {0: bessel},
        "paraboloid": {0: power_profile(1.0, 2, scale=R)},
    }
    if geom.N >= 1:
        entries["dipole"] = {1: power_profile(1.0, 1, scale=R)}
        entries["mixed"] = {0: power_profile(1.0, 2, scale=R), -1: power_profile(1.0 - 0.5j, 3, scale=R), 1: shell}
    if geom.N >= 2:
        entries["quadrupole"] = {2: power_profile(1.0, 2, scale=R)}
        entries["twisted"] = {2: power_profile(1.0, 2, scale=R).combine(power_profile(1.0, 3, scale=R), 1.0, -1.0)}
    return {name: CatalogFunction(geom, p, name) for name, p in entries.items()}


def catalog(geom: BoundaryGeometry) -> Dict[str, CatalogFunction]:
    """Named closed-form functions with analytic boundary data (Green-identity test corpus)."""
    return _interval_catalog(geom) if isinstance(geom, Interval) else _disk_catalog(geom)


def catalog_function(geom: BoundaryGeometry, name: str) -> CatalogFunction:
    entries = catalog(geom)
    if name not in entries:
        raise DomainError(f"Unknown catalog function '{name}' for {geom.kind}. Available: {', '.join(entries)}.")
    return entries[name]
