import os
import time
import logging
import warnings
from contextlib import contextmanager
import click

_LOGGER = logging.getLogger("bdry_ext")
_SAVE_LOG_FILE = False


def set_log_dir(log_dir: str):
    if log_dir is None:
        return
    if not os.path.isdir(log_dir):
        raise click.FileError(log_dir, hint=f"Log directory is not found: {log_dir}")
    global _SAVE_LOG_FILE
    _SAVE_LOG_FILE = True
    fname = os.path.join(log_dir, time.strftime("%Y%m%d_%H%M%S", time.localtime()) + ".log")
    handler = logging.FileHandler(fname, encoding="utf-8")
    handler.setFormatter(logging.Formatter("%(asctime)s %(levelname)s %(message)s"))
    _LOGGER.addHandler(handler)
    _LOGGER.setLevel(logging.DEBUG)


def log_info(message: str, fg: str = "white"):
    click.secho(message, fg=fg)
    if _SAVE_LOG_FILE:
        _LOGGER.info(message)


def log_warn(message: str, fg: str = "yellow"):
    click.secho(message, fg=fg, err=True)
    if _SAVE_LOG_FILE:
        _LOGGER.warning(message)


def log_error(message: str, fg: str = "red"):
    click.secho(str(message), fg=fg, err=True)
    if _SAVE_LOG_FILE:
        _LOGGER.error(message)


@contextmanager
def surface_warnings():
    """Re-emit numerical warnings raised inside the block through `log_warn`."""
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        yield
    seen = set()
    for w in caught:
        text = f" ! {w.category.__name__}: {w.message}"
        if text not in seen:
            seen.add(text)
            log_warn(text)
