import sys
import click
import bdry_ext
from bdry_ext.cli_process import VERBS, EXIT_VALIDATION, run
from bdry_ext.cli_log import log_error, log_info


def _print_version(ctx, param, value):
    if not value or ctx.resilient_parsing:
        return
    log_info(f"Version {bdry_ext.__version__}")
    ctx.exit()


@click.command()
# Designate the job ###########################################################
@click.argument("verb", type=click.Choice(list(VERBS) + ["batch"]))
@click.option(
    "-c",
    "--config",
    "config_path",
    required=True,
    type=click.Path(exists=True, dir_okay=False),
    help="YAML or JSON file with the geometry, the extension and the run options.",
)
# Output ######################################################################
@click.option(
    "-o",
    "--out",
    type=click.Path(dir_okay=False),
    default=None,
    help="Output path. Overrides 'out' in the config. Without it the result is printed. (Default: None)",
)
@click.option(
    "--no-timestamp",
    is_flag=True,
    default=False,
    help="Omit the '# generated' line from CSV outputs. (Default: False)",
)
# Run options #################################################################
@click.option(
    "--seed",
    type=click.IntRange(0, 2**64 - 1),
    default=None,
    help="Seed for random unitaries. Overrides 'seed' in the config. (Default: None)",
)
@click.option(
    "--raw-coords",
    is_flag=True,
    default=False,
    help="Extension data are given in raw L^2 boundary coordinates. (Default: False)",
)
@click.option(
    "-v",
    "--verbose",
    count=True,
    help="Verbosity level from 0 to 2. --verbose:1, -v:1, -vv:2 (Default: 0)",
)
# Others ######################################################################
@click.option(
    "--version",
    is_flag=True,
    callback=_print_version,
    expose_value=False,
    is_eager=True,
    help="Show the current version.",
)
def bdrycli(verb: str, config_path: str, out: str, no_timestamp: bool, seed: int, raw_coords: bool, verbose: int):
    """
    VERB: What to compute.

    Available verbs are: \n
        spectrum  (eigenvalues of T_U in a window, CSV) \n
        convert   (unitary <-> (X, M) and K_U, JSON) \n
        check-sa  (self-adjointness certificate, JSON) \n
        form      (quadratic form of a catalog function or eigenfunction, JSON) \n
        oracle    (finite-element cross-check on the interval, CSV + JSON) \n
        batch     (the 'jobs' list of a config file) \n

    Here are some examples: \n
        bdry-ext spectrum -c configs/robin.yml \n
        bdry-ext convert -c configs/random_disk.yml --seed 7 \n
        bdry-ext oracle -c configs/robin.yml -o out/robin.csv \n
        bdry-ext batch -c configs/batch.yml
    """
    code = run(verb, config_path, out=out, seed=seed, no_timestamp=no_timestamp, verbose=verbose, raw_coords=raw_coords)
    sys.exit(code)


def main():
    assert sys.version_info[0] == 3
    # Set UTF-8 encoding for Windows console
    if sys.platform == "win32":
        import io

        sys.stdout = io.TextIOWrapper(sys.stdout.buffer, encoding="utf-8")
        sys.stderr = io.TextIOWrapper(sys.stderr.buffer, encoding="utf-8")
    # Usage errors exit with 1 like every other validation failure.
    try:
        code = bdrycli(standalone_mode=False)
    except click.ClickException as e:
        e.show()
        sys.exit(EXIT_VALIDATION)
    except click.Abort:
        log_error("Aborted!")
        sys.exit(EXIT_VALIDATION)
    sys.exit(code or 0)
