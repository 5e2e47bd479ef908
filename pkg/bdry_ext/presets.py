"""Named boundary conditions as boundary unitaries in hat coordinates.

Robin follows nu psi + alpha gamma psi = 0, i.e. L = -(DtN + alpha); Neumann is alpha = 0.
"""
from typing import Callable, Dict, Final, Optional
import numpy as np
from bdry_ext.boundary import BoundaryGeometry, Interval
from bdry_ext.cayley import SelfAdjointParam, param_from_raw, param_to_unitary
from bdry_ext.domain import dtn
from bdry_ext.exceptions import BadConfigError, InvalidGeometryError, UnknownPresetError


def dirichlet(geom: BoundaryGeometry) -> np.ndarray:
    return np.eye(geom.dim, dtype=np.complex128)


def krein(geom: BoundaryGeometry) -> np.ndarray:
    return -np.eye(geom.dim, dtype=np.complex128)


def robin_param(geom: BoundaryGeometry, alpha: float) -> SelfAdjointParam:
    L = -(dtn(geom) + alpha * np.eye(geom.dim))
    return param_from_raw(geom, np.eye(geom.dim), L)


def robin(geom: BoundaryGeometry, alpha: float) -> np.ndarray:
    return param_to_unitary(robin_param(geom, alpha))


def neumann(geom: BoundaryGeometry) -> np.ndarray:
    return robin(geom, 0.0)


def periodic_param(geom: BoundaryGeometry) -> SelfAdjointParam:
    """X = span{(1, 1) / sqrt 2}, L = 0 on X."""
    if not isinstance(geom, Interval):
        raise InvalidGeometryError("The periodic preset exists on the interval only.")
    return SelfAdjointParam(np.array([[1.0], [1.0]]) / np.sqrt(2.0), np.zeros((1, 1)))


def periodic(geom: BoundaryGeometry) -> np.ndarray:
    return param_to_unitary(periodic_param(geom))


PRESETS: Final[Dict[str, Callable]] = {
    "dirichlet": lambda geom, params: dirichlet(geom),
    "neumann": lambda geom, params: neumann(geom),
    "robin": lambda geom, params: robin(geom, _alpha(params)),
    "krein": lambda geom, params: krein(geom),
    "periodic": lambda geom, params: periodic(geom),
}


def _alpha(params: Optional[Dict]) -> float:
    if not params or "alpha" not in params:
        raise BadConfigError("The robin preset needs `preset_params: {alpha: <real>}`.")
    try:
        return float(params["alpha"])
    except (TypeError, ValueError):
        raise BadConfigError(f"Robin alpha must be a real number, got {params['alpha']!r}.")


def preset(name: str, geom: BoundaryGeometry, params: Optional[Dict] = None) -> np.ndarray:
    """Boundary unitary of a named extension.

    Raises:
        UnknownPresetError: If `name` is not a preset.
        InvalidGeometryError: For `periodic` on the disk.
    """
    key = str(name).lower()
    if key not in PRESETS:
        raise UnknownPresetError(f"Unknown preset '{name}'. Available: {', '.join(PRESETS)}.")
    return PRESETS[key](geom, params)
