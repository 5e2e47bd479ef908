from typing import Callable, Dict, Final, List, Optional
import copy
import time
import click
import numpy as np
from bdry_ext import api, output
from bdry_ext.cli_log import log_info, log_warn, log_error, set_log_dir, surface_warnings
from bdry_ext.config import EXTENSION_KEYS, RunConfig, load_config, run_config_from_dict
from bdry_ext.exceptions import BadConfigError, NumericalError, ValidationError
from bdry_ext.spectral import scan_spectrum


EXIT_OK: Final[int] = 0
EXIT_VALIDATION: Final[int] = 1
EXIT_NUMERICAL: Final[int] = 2


def _emit_csv(cfg: RunConfig, header, rows, out: Optional[str] = None):
    out = out or cfg.out
    if out:
        output.save_csv(out, header, rows, timestamp=cfg.timestamp)
        log_info(f" => {out}", fg="cyan")
    else:
        click.echo("\n".join(output.csv_lines(header, rows, timestamp=cfg.timestamp)))


def _emit_json(cfg: RunConfig, data: Dict, out: Optional[str] = None):
    out = out or cfg.out
    if out:
        output.save_json(out, data)
        log_info(f" => {out}", fg="cyan")
    else:
        click.echo(output.json_text(data))


def _sidecar(path: Optional[str], suffix: str) -> Optional[str]:
    if not path:
        return None
    stem = path.rsplit(".", 1)[0] if "." in path.rsplit("/", 1)[-1] else path
    return f"{stem}.{suffix}"


# Verbs #######################################################################


def run_spectrum(cfg: RunConfig) -> int:
    U = cfg.unitary()
    lam_min, lam_max = cfg.window if cfg.window else (None, None)
    tol = cfg.tolerances
    result = scan_spectrum(
        cfg.geom, U, lam_min, lam_max, cfg.grid_points, tol_accept=tol.tol_accept, tol_merge=tol.tol_merge, workers=cfg.workers
    )
    if cfg.verbose > 0:
        log_info(f" {len(result)} eigenvalue(s) in [{result.window[0]:.6g}, {result.window[1]:.6g}]")
    _emit_csv(cfg, output.SPECTRUM_HEADER, result.rows())
    return EXIT_OK


def run_convert(cfg: RunConfig) -> int:
    param = cfg.param()
    if param is not None:
        data = api.convert(cfg.geom, param=param, tol_one=cfg.tolerances.tol_one)
    else:
        data = api.convert(cfg.geom, unitary=cfg.unitary(), tol_one=cfg.tolerances.tol_one)
    _emit_json(cfg, data)
    return EXIT_OK


def run_check_sa(cfg: RunConfig) -> int:
    U = cfg.unitary()
    name = cfg.extension[0] if cfg.extension[0] != "preset" else f"preset {cfg.extension[1]}"
    checker = api.check_self_adjoint(U, cfg.tolerances.tol_one, print_log=True, name=name, verbosity=cfg.verbose)
    _emit_json(cfg, checker.report)
    return EXIT_OK if checker.is_self_adjoint else EXIT_NUMERICAL


def run_form(cfg: RunConfig) -> int:
    U = cfg.unitary()
    if (cfg.function is None) == (cfg.eigen_index is None):
        raise BadConfigError("The form verb needs exactly one of 'function' and 'eigen_index'.")
    if cfg.eigen_index is not None:
        lam_min, lam_max = cfg.window if cfg.window else (None, None)
        eigenvalues = scan_spectrum(cfg.geom, U, lam_min, lam_max, cfg.grid_points, workers=cfg.workers).eigenvalues
        if not 0 <= cfg.eigen_index < len(eigenvalues):
            raise BadConfigError(f"eigen_index {cfg.eigen_index} is out of range: {len(eigenvalues)} eigenvalue(s) found.")
        value = api.form(cfg.geom, U, eigen_energy=eigenvalues[cfg.eigen_index], tol_one=cfg.tolerances.tol_one)
    else:
        value = api.form(cfg.geom, U, function=cfg.function, tol_one=cfg.tolerances.tol_one)
    _emit_json(cfg, value.to_dict())
    return EXIT_OK


def run_oracle(cfg: RunConfig) -> int:
    U = cfg.unitary()
    result, fem, report = api.oracle(
        cfg.geom,
        U,
        n_elements=cfg.n_elements,
        count=cfg.count,
        window=cfg.window,
        grid_points=cfg.grid_points,
        solver=cfg.solver,
        tolerances=cfg.tolerances,
        workers=cfg.workers,
    )
    rows = [(r.index, r.secular, r.fem, r.abs_dev) for r in report.rows]
    _emit_csv(cfg, output.ORACLE_HEADER, rows)
    _emit_json(cfg, report.to_dict(), out=_sidecar(cfg.out, "report.json") if cfg.out else None)
    icon = "✅" if report.passed else "❌"
    log_info(f" {icon} oracle: {'PASS' if report.passed else 'FAIL'} on {len(report.rows)} eigenvalue(s)")
    if cfg.verbose > 0:
        for r in report.rows:
            log_info(f"    #{r.index}: secular={r.secular:.12g} fem={r.fem:.12g} |dev|={r.abs_dev:.3e}")
    return EXIT_OK if report.passed else EXIT_NUMERICAL


VERBS: Final[Dict[str, Callable[[RunConfig], int]]] = {
    "spectrum": run_spectrum,
    "convert": run_convert,
    "check-sa": run_check_sa,
    "form": run_form,
    "oracle": run_oracle,
}


# Dispatch ####################################################################


def _apply_overrides(
    data: Dict, out: Optional[str], seed: Optional[int], no_timestamp: bool, verbose: int, raw_coords: bool = False
) -> Dict:
    data = copy.deepcopy(data)
    if raw_coords:
        data["raw_coords"] = True
    if out is not None:
        data["out"] = out
    if seed is not None:
        data["seed"] = seed
    if no_timestamp:
        data["timestamp"] = False
    if verbose:
        data["verbose"] = verbose
    return data


def _guarded(func: Callable[[], int]) -> int:
    """Run a verb and translate errors into exit codes."""
    try:
        with surface_warnings():
            return func()
    except ValidationError as e:
        log_error(f" => {type(e).__name__}: {e}")
        return EXIT_VALIDATION
    except NumericalError as e:
        log_error(f" => {type(e).__name__}: {e}")
        return EXIT_NUMERICAL
    except np.linalg.LinAlgError as e:
        log_error(f" => LinAlgError: {e}")
        return EXIT_NUMERICAL


def run(
    verb: str,
    config_path: str,
    out: Optional[str] = None,
    seed: Optional[int] = None,
    no_timestamp: bool = False,
    verbose: int = 0,
    raw_coords: bool = False,
) -> int:
    """Run one verb (or a batch) from a config file and return the exit code."""
    if verb == "batch":
        return run_batch(config_path, out, seed, no_timestamp, verbose, raw_coords)
    if verb not in VERBS:
        log_error(f" => Unknown verb '{verb}'. Available: {', '.join(list(VERBS) + ['batch'])}.")
        return EXIT_VALIDATION

    def _job() -> int:
        data = _apply_overrides(load_config(config_path), out, seed, no_timestamp, verbose, raw_coords)
        cfg = run_config_from_dict(data)
        set_log_dir(cfg.log_dir)
        return VERBS[verb](cfg)

    return _guarded(_job)


def run_batch(
    config_path: str,
    out: Optional[str] = None,
    seed: Optional[int] = None,
    no_timestamp: bool = False,
    verbose: int = 0,
    raw_coords: bool = False,
) -> int:
    """Run the `jobs` list of a batch file in order.

    Top-level keys other than `jobs` are defaults for every job. Each job names its `verb`.
    The exit code is the worst one over all jobs.
    """

    def _load() -> List[Dict]:
        data = load_config(config_path)
        if "jobs" not in data or not isinstance(data["jobs"], list) or not data["jobs"]:
            raise BadConfigError("No jobs found in batch file. Please check your file.")
        set_log_dir(data.get("log_dir"))
        defaults = {k: v for k, v in data.items() if k not in ("jobs", "log_dir")}
        jobs = []
        for job in data["jobs"]:
            if not isinstance(job, dict) or "verb" not in job:
                raise BadConfigError("Every job needs a 'verb'.")
            merged = dict(defaults)
            if any(key in job for key in EXTENSION_KEYS):
                for key in EXTENSION_KEYS:
                    merged.pop(key, None)
            merged.update(job)
            jobs.append(merged)
        return jobs

    jobs_holder: List[List[Dict]] = []
    code = _guarded(lambda: jobs_holder.append(_load()) or EXIT_OK)
    if code != EXIT_OK:
        return code
    worst = EXIT_OK
    for job in jobs_holder[0]:
        jname = job.pop("name", "Unnamed Job")
        job_verb = job.pop("verb")
        time_str = time.strftime("%Y-%m-%d %H:%M:%S", time.localtime())
        log_info(f"\n[{time_str}] Job: {jname} ({job_verb})", fg="cyan")
        if job_verb not in VERBS:
            log_error(f" => Unknown verb '{job_verb}' in job '{jname}'.")
            worst = max(worst, EXIT_VALIDATION)
            continue
        data = _apply_overrides(job, None, seed, no_timestamp, verbose, raw_coords)
        code = _guarded(lambda: VERBS[job_verb](run_config_from_dict(data)))
        if code != EXIT_OK:
            log_warn(f" => Job '{jname}' exited with code {code}.")
        worst = max(worst, code)
    return worst
