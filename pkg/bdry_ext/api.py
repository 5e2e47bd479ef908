from typing import Dict, List, Optional, Tuple, Union
import numpy as np
from bdry_ext.boundary import BoundaryGeometry, geometry_from_dict
from bdry_ext.cayley import SelfAdjointParam, k_u, param_to_unitary, unitary_to_param
from bdry_ext.certificate import SelfAdjointnessChecker
from bdry_ext.cli_log import log_info
from bdry_ext.config import Tolerances
from bdry_ext.domain import CatalogFunction, catalog_function
from bdry_ext.exceptions import BadConfigError
from bdry_ext.forms import FormValue, form_value
from bdry_ext.oracle import ComparisonReport, compare_spectra, fem_spectrum
from bdry_ext.spectral import SpectrumResult, default_window, eigenfunction, scan_spectrum

GeometryLike = Union[BoundaryGeometry, Dict]


def _geom(geometry: GeometryLike) -> BoundaryGeometry:
    return geometry_from_dict(geometry) if isinstance(geometry, dict) else geometry


def spectrum(
    geometry: GeometryLike,
    U,
    window: Optional[Tuple[float, float]] = None,
    grid_points: int = 4000,
    tolerances: Tolerances = None,
    workers: int = 1,
) -> SpectrumResult:
    """Eigenvalues of T_U in a window.

    Args:
        geometry (GeometryLike): Geometry or geometry JSON.
        U (array_like): Boundary unitary in hat coordinates.
        window (Tuple[float, float], optional): (lam_min, lam_max). Defaults to the geometry's window.
        grid_points (int, optional): Scan resolution. Defaults to 4000.
        tolerances (Tolerances, optional): Acceptance and merge tolerances.
        workers (int, optional): Concurrent sub-windows. Defaults to 1.

    Returns:
        SpectrumResult: Eigenvalues, multiplicities and residuals.
    """
    tol = tolerances or Tolerances()
    lam_min, lam_max = window if window else (None, None)
    return scan_spectrum(
        _geom(geometry), U, lam_min, lam_max, grid_points, tol_accept=tol.tol_accept, tol_merge=tol.tol_merge, workers=workers
    )


def convert(
    geometry: GeometryLike,
    unitary=None,
    param: Optional[SelfAdjointParam] = None,
    tol_one: float = Tolerances().tol_one,
) -> Dict:
    """Unitary <-> (X, M) conversion; the result always carries both forms and K_U."""
    geom = _geom(geometry)
    if (unitary is None) == (param is None):
        raise BadConfigError("convert needs exactly one of `unitary` and `param`.")
    if param is None:
        param = unitary_to_param(np.asarray(unitary), tol_one)
        U = np.asarray(unitary, dtype=np.complex128)
    else:
        U = param_to_unitary(param)
    hamiltonian = k_u(U, tol_one)
    return {
        "geometry": geom.to_dict(),
        "unitary": U,
        "param": param.to_dict(),
        "rank_X": param.rank,
        "L_raw": param.L(geom),
        "K_U": hamiltonian.K,
        "Q_U": hamiltonian.Q,
    }


def check_self_adjoint(
    U, tol_one: float = Tolerances().tol_one, print_log: bool = False, name: str = None, verbosity: int = 0
) -> SelfAdjointnessChecker:
    """Run the self-adjointness certificate.

    Args:
        U (array_like): Boundary unitary.
        tol_one (float, optional): Eigenvalue-1 tolerance.
        print_log (bool, optional): If True, print the log. Defaults to False.
        name (str, optional): Label shown in the log. Only used when `print_log` is True.
        verbosity (int, optional): The verbosity level from 0 to 2. Only used when `print_log` is True.

    Returns:
        SelfAdjointnessChecker: The checker holding status and report.
    """
    checker = SelfAdjointnessChecker()
    checker.check(U, tol_one)
    if print_log:
        log_info("\n".join(checker.cli_log(name=name, verbosity=verbosity)))
    return checker


def form(
    geometry: GeometryLike,
    U,
    function: Optional[Union[str, CatalogFunction]] = None,
    eigen_energy: Optional[float] = None,
    tol_one: float = Tolerances().tol_one,
) -> FormValue:
    """t_U of a catalog function or of the eigenfunction at `eigen_energy`."""
    geom = _geom(geometry)
    if (function is None) == (eigen_energy is None):
        raise BadConfigError("form needs exactly one of a catalog `function` and an `eigen_energy`.")
    if eigen_energy is not None:
        psi = eigenfunction(geom, U, eigen_energy).as_function()
    elif isinstance(function, str):
        psi = catalog_function(geom, function)
    else:
        psi = function
    return form_value(U, psi, tol_one)


def oracle(
    geometry: GeometryLike,
    U,
    n_elements: int = 4096,
    count: int = 6,
    window: Optional[Tuple[float, float]] = None,
    grid_points: int = 4000,
    solver: str = "sparse",
    tolerances: Tolerances = None,
    workers: int = 1,
) -> Tuple[SpectrumResult, List[float], ComparisonReport]:
    """Secular spectrum, finite-element spectrum and their comparison on the interval.

    Without a window the scan covers the default window extended below the lowest oracle value.
    """
    geom = _geom(geometry)
    tol = tolerances or Tolerances()
    fem = fem_spectrum(geom, U, n=n_elements, count=count, solver=solver, tol_one=tol.tol_one)
    if window is None:
        # Same grid density as the default window, stretched to cover every oracle value.
        lo, hi = default_window(geom)
        spacing = (hi - lo) / grid_points
        lo = min(lo, fem[0] - (1.0 + 0.5 * abs(fem[0])))
        hi = fem[-1] + (1.0 + 0.5 * abs(fem[-1]))
        grid_points = max(grid_points, int(np.ceil((hi - lo) / spacing)))
        window = (lo, hi)
    result = spectrum(geom, U, window, grid_points, tol, workers)
    return result, fem, compare_spectra(result, fem, count)
