"""Quadratic forms t_U(psi) = ||grad psi_D||^2 + <gamma psi|K_U gamma psi>."""
from dataclasses import dataclass
from typing import Dict, Optional, Union
import warnings
import numpy as np
from bdry_ext.boundary import spectral_projectors
from bdry_ext.cayley import k_u
from bdry_ext.domain import CatalogFunction, ModeState, boundary_pair_data, gradient_energy, l2_inner_tstar, pi_d
from bdry_ext.exceptions import DomainError
from bdry_ext.utils import TOLERANCE, as_vector, check_unitary

FormArgument = Union[CatalogFunction, ModeState]


def _as_function(psi: FormArgument) -> CatalogFunction:
    return psi.as_function() if isinstance(psi, ModeState) else psi


@dataclass(frozen=True)
class FormValue:
    t_U: float
    dirichlet_part: float
    boundary_part: float
    domain_ok: bool

    def to_dict(self) -> Dict:
        return {
            "t_U": self.t_U,
            "dirichlet_part": self.dirichlet_part,
            "boundary_part": self.boundary_part,
            "domain_ok": self.domain_ok,
        }


def dirichlet_energy(psi_d: FormArgument, tol: float = 1e-10) -> float:
    """||grad psi_D||^2 for a function with zero trace.

    Raises:
        DomainError: If the trace of `psi_d` does not vanish.
    """
    psi_d = _as_function(psi_d)
    g, n = psi_d.trace()
    scale = max(1.0, float(np.linalg.norm(n)))
    if np.linalg.norm(g) > tol * scale:
        raise DomainError(f"'{psi_d.name}' has a nonzero trace (||g|| = {np.linalg.norm(g):.3e}); apply pi_d first.")
    return gradient_energy(psi_d)


def form_domain_contains(
    U, g_hat, scale: Optional[float] = None, tol: float = TOLERANCE["form_domain"], tol_one: float = TOLERANCE["one"]
) -> bool:
    """gamma psi in D(K_U) = Ran Q_U, tested as ||P_U g|| <= tol * max(||g||, scale)."""
    U = check_unitary(U)
    g_hat = as_vector(g_hat, U.shape[0], "g")
    P, _ = spectral_projectors(U, tol_one)
    reference = max(float(np.linalg.norm(g_hat)), float(scale or 0.0))
    return bool(np.linalg.norm(P @ g_hat) <= tol * reference) or not np.any(g_hat)


def form_value(U, psi: FormArgument, tol_one: float = TOLERANCE["one"]) -> FormValue:
    """t_U(psi) for psi = psi_D + psi_0 with gamma psi in Ran Q_U.

    Raises:
        DomainError: If gamma psi leaves the form domain.
    """
    U = check_unitary(U)
    psi = _as_function(psi)
    g_hat, u_hat = boundary_pair_data(psi)
    if not form_domain_contains(U, g_hat, scale=float(np.linalg.norm(u_hat)), tol_one=tol_one):
        raise DomainError(f"gamma '{psi.name}' is not in Ran Q_U: the form t_U is infinite there.")
    hamiltonian = k_u(U, tol_one)
    boundary = hamiltonian.energy(g_hat)
    if abs(boundary.imag) > 1e-10 * max(1.0, abs(boundary.real)):
        warnings.warn(f"Boundary term has imaginary part {boundary.imag:.3e}; K_U is not Hermitian to rounding.", RuntimeWarning)
    dirichlet = dirichlet_energy(pi_d(psi.geom, psi))
    return FormValue(
        t_U=dirichlet + boundary.real, dirichlet_part=dirichlet, boundary_part=boundary.real, domain_ok=True
    )


def semi_green_check(phi: FormArgument) -> float:
    """|<phi|T* phi> - (||grad phi_D||^2 - <gamma phi|mu phi>)| with <phi|T* phi> by quadrature."""
    phi = _as_function(phi)
    g_hat, u_hat = boundary_pair_data(phi)
    volume = l2_inner_tstar(phi, phi)
    boundary = gradient_energy(pi_d(phi.geom, phi)) - np.vdot(g_hat, u_hat)
    return float(abs(volume - boundary))
