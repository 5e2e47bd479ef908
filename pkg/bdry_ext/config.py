from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple, Final, Any
import os
import yaml
import numpy as np
from bdry_ext.boundary import BoundaryGeometry, geometry_from_dict, operator_to_hat, random_unitary, unitary_from_json
from bdry_ext.cayley import SelfAdjointParam, pairs_to_complex, param_from_dict, param_from_raw, param_to_unitary
from bdry_ext.exceptions import BadConfigError
from bdry_ext.presets import preset
from bdry_ext.utils import TOLERANCE, check_unitary


EXTENSION_KEYS: Final[List[str]] = ["unitary", "param", "preset", "random"]
KNOWN_KEYS: Final[List[str]] = EXTENSION_KEYS + [
    "geometry",
    "preset_params",
    "window",
    "grid_points",
    "tol_one",
    "tol_bc",
    "tol_accept",
    "tol_merge",
    "seed",
    "count",
    "n_elements",
    "solver",
    "function",
    "eigen_index",
    "raw_coords",
    "workers",
    "verbose",
    "log_dir",
    "out",
    "timestamp",
    "jobs",
    "verb",
    "name",
]


@dataclass
class Tolerances:
    tol_one: float = TOLERANCE["one"]
    tol_bc: float = TOLERANCE["bc"]
    tol_accept: float = TOLERANCE["accept"]
    tol_merge: float = TOLERANCE["merge"]

    def __post_init__(self):
        for name, value in self.__dict__.items():
            if not isinstance(value, (int, float)) or not np.isfinite(value) or value <= 0:
                raise BadConfigError(f"Tolerance '{name}' must be a positive number, got {value!r}.")


@dataclass
class RunConfig:
    """
    Configuration of one run of bdry-ext.

    Args:
        geometry (Dict): Geometry JSON, e.g. {"kind": "interval", "a": 0.0, "b": 3.14159}.
        extension (Tuple[str, Any]): Exactly one of ("unitary", [[re, im], ...]), ("param", {...}),
            ("preset", name) or ("random", True). `random` draws a Haar unitary from `seed`.
        preset_params (Dict): Parameters of the preset, e.g. {"alpha": 1.0} for robin.
        window (Tuple[float, float], optional): Energy window of the spectrum scan. Defaults to the geometry's window.
        grid_points (int): Sampling points of the scan.
        tolerances (Tolerances): tol_one, tol_bc, tol_accept and tol_merge.
        seed (int): Seed for random unitaries.
        count (int): Number of eigenvalues compared by the oracle.
        n_elements (int): Mesh size of the finite-element oracle.
        solver (str): 'sparse' or 'dense' finite-element eigensolver.
        function (str, optional): Catalog function name for the `form` verb.
        eigen_index (int, optional): Use the eigenfunction with this index instead of a catalog function.
        raw_coords (bool): Extension data are given in raw L^2 coordinates.
        workers (int): Concurrent sub-windows of the scan.
        verbose (int): Verbosity from 0 to 2.
        log_dir (str, optional): Directory for log files.
        out (str, optional): Output path.
        timestamp (bool): Write the timestamp header line into CSV outputs.
    """

    geometry: Dict = field(default_factory=dict)
    extension: Optional[Tuple[str, Any]] = None
    preset_params: Dict = field(default_factory=dict)
    window: Optional[Tuple[float, float]] = None
    grid_points: int = 4000
    tolerances: Tolerances = field(default_factory=Tolerances)
    seed: int = 0
    count: int = 6
    n_elements: int = 4096
    solver: str = "sparse"
    function: Optional[str] = None
    eigen_index: Optional[int] = None
    raw_coords: bool = False
    workers: int = 1
    verbose: int = 0
    log_dir: Optional[str] = None
    out: Optional[str] = None
    timestamp: bool = True

    @property
    def geom(self) -> BoundaryGeometry:
        return geometry_from_dict(self.geometry)

    def param(self) -> Optional[SelfAdjointParam]:
        """The (X, M) pair if the extension was given that way."""
        if self.extension is None or self.extension[0] != "param":
            return None
        geom = self.geom
        data = self.extension[1]
        if self.raw_coords:
            if not isinstance(data, dict) or "X_basis" not in data or "L" not in data:
                raise BadConfigError("With raw_coords a parameter pair needs the keys 'X_basis' and 'L'.")
            basis = pairs_to_complex(data["X_basis"], "X_basis") if np.size(data["X_basis"]) else np.zeros((geom.dim, 0))
            return param_from_raw(geom, basis, pairs_to_complex(data["L"], "L"))
        return param_from_dict(data, geom.dim)

    def unitary(self) -> np.ndarray:
        """The boundary unitary in hat coordinates, whatever form the extension was given in."""
        if self.extension is None:
            raise BadConfigError(f"No extension given. Use exactly one of: {', '.join(EXTENSION_KEYS)}.")
        geom = self.geom
        kind, value = self.extension
        if kind == "preset":
            return preset(value, geom, self.preset_params)
        if kind == "random":
            return random_unitary(geom.dim, self.seed)
        if kind == "param":
            return param_to_unitary(self.param())
        U = unitary_from_json(value, geom.dim) if not self.raw_coords else pairs_to_complex(value, "unitary")
        if self.raw_coords:
            # A raw-coordinate unitary stays unitary in hat coordinates only if it commutes with the weights.
            U = check_unitary(operator_to_hat(geom, U), name="S U S^-1")
        return U


def _pop_extension(data: Dict) -> Optional[Tuple[str, Any]]:
    given = [key for key in EXTENSION_KEYS if key in data and data[key] is not None and data[key] is not False]
    if len(given) > 1:
        raise BadConfigError(f"Exactly one extension is allowed, got: {', '.join(given)}.")
    return (given[0], data[given[0]]) if given else None


def run_config_from_dict(data: Dict, require_extension: bool = True) -> RunConfig:
    """Build a RunConfig from a parsed YAML/JSON mapping.

    Raises:
        BadConfigError: On unknown keys, wrong types or missing required keys.
    """
    if not isinstance(data, dict):
        raise BadConfigError("The configuration must be a mapping.")
    unknown = sorted(set(data) - set(KNOWN_KEYS))
    if unknown:
        raise BadConfigError(f"Unknown configuration key(s): {', '.join(unknown)}.")
    if "geometry" not in data:
        raise BadConfigError("The configuration needs a 'geometry' key.")
    extension = _pop_extension(data)
    if require_extension and extension is None:
        raise BadConfigError(f"No extension given. Use exactly one of: {', '.join(EXTENSION_KEYS)}.")
    try:
        window = data.get("window")
        if window is not None:
            if len(window) != 2:
                raise BadConfigError(f"'window' must be [lam_min, lam_max], got {window!r}.")
            window = (float(window[0]), float(window[1]))
        cfg = RunConfig(
            geometry=data["geometry"],
            extension=extension,
            preset_params=data.get("preset_params") or {},
            window=window,
            grid_points=int(data.get("grid_points", 4000)),
            tolerances=Tolerances(
                tol_one=float(data.get("tol_one", TOLERANCE["one"])),
                tol_bc=float(data.get("tol_bc", TOLERANCE["bc"])),
                tol_accept=float(data.get("tol_accept", TOLERANCE["accept"])),
                tol_merge=float(data.get("tol_merge", TOLERANCE["merge"])),
            ),
            seed=int(data.get("seed", 0)),
            count=int(data.get("count", 6)),
            n_elements=int(data.get("n_elements", 4096)),
            solver=str(data.get("solver", "sparse")),
            function=data.get("function"),
            eigen_index=None if data.get("eigen_index") is None else int(data["eigen_index"]),
            raw_coords=bool(data.get("raw_coords", False)),
            workers=int(data.get("workers", 1)),
            verbose=int(data.get("verbose", 0)),
            log_dir=data.get("log_dir"),
            out=data.get("out"),
            timestamp=bool(data.get("timestamp", True)),
        )
    except (TypeError, ValueError) as e:
        raise BadConfigError(f"Invalid configuration value: {e}")
    # Parse the geometry early so that errors name the config.
    geometry_from_dict(cfg.geometry)
    if cfg.seed < 0 or cfg.seed >= 2**64:
        raise BadConfigError(f"'seed' must be an unsigned 64-bit integer, got {cfg.seed}.")
    return cfg


def load_config(path: str) -> Dict:
    """Read a YAML or JSON config file (JSON is a subset of YAML)."""
    if not os.path.isfile(path):
        raise BadConfigError(f"Config file not found: {path}")
    with open(path, "r", encoding="utf-8") as f:
        try:
            data = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise BadConfigError(f"Cannot parse {path}: {e}")
    if not isinstance(data, dict):
        raise BadConfigError(f"{path} must contain a mapping at the top level.")
    return data
