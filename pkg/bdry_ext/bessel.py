"""Bessel functions for the radial solutions on the disk.

J_m(x) and the exponentially scaled I_m(x) come from `scipy.special`; derivatives use the
recurrences J_m' = (J_{m-1} - J_{m+1}) / 2 and I_m' = (I_{m-1} + I_{m+1}) / 2.
Evaluations are restricted to the envelope 0 <= m <= 200, 0 <= x <= 500.
"""
from typing import Final, List
import numpy as np
import scipy.special
from scipy.optimize import bisect
from bdry_ext.exceptions import BesselEnvelopeError


ORDER_MAX: Final[int] = 200
ARGUMENT_MAX: Final[float] = 500.0


def _check_envelope(m, x):
    m = np.asarray(m)
    x = np.asarray(x, dtype=float)
    if np.any(m < 0) or np.any(m > ORDER_MAX) or np.any(m != np.round(m)):
        raise BesselEnvelopeError(f"Bessel order must be an integer in [0, {ORDER_MAX}], got {m}.")
    if np.any(~np.isfinite(x)) or np.any(x < 0) or np.any(x > ARGUMENT_MAX):
        raise BesselEnvelopeError(f"Bessel argument must lie in [0, {ARGUMENT_MAX}], got max {np.max(x)}.")
    return m, x


def bessel_j(m, x):
    m, x = _check_envelope(m, x)
    return scipy.special.jv(m, x)


def bessel_j_prime(m, x):
    m, x = _check_envelope(m, x)
    return 0.5 * (scipy.special.jv(m - 1, x) - scipy.special.jv(m + 1, x))


def bessel_j_second(m, x):
    m, x = _check_envelope(m, x)
    return scipy.special.jvp(m, x, 2)


def bessel_i_scaled(m, x):
    """e^{-x} I_m(x)."""
    m, x = _check_envelope(m, x)
    return scipy.special.ive(m, x)


def bessel_i_prime_scaled(m, x):
    """e^{-x} I_m'(x)."""
    m, x = _check_envelope(m, x)
    return 0.5 * (scipy.special.ive(m - 1, x) + scipy.special.ive(m + 1, x))


def bessel_i(m, x):
    return bessel_i_scaled(m, x) * np.exp(x)


def bessel_i_prime(m, x):
    return bessel_i_prime_scaled(m, x) * np.exp(x)


def bessel_i_second(m, x):
    m, x = _check_envelope(m, x)
    return scipy.special.ivp(m, x, 2)


def bessel_j_zeros(m: int, count: int, step: float = 0.25, xtol: float = 1e-15) -> List[float]:
    """First `count` positive zeros of J_m, bracketed on a grid and refined by bisection."""
    zeros: List[float] = []
    lo = max(step, 1e-3)
    f_lo = float(bessel_j(m, lo))
    while len(zeros) < count:
        hi = lo + step
        if hi > ARGUMENT_MAX:
            raise BesselEnvelopeError(f"Only {len(zeros)} zeros of J_{m} lie below {ARGUMENT_MAX}.")
        f_hi = float(bessel_j(m, hi))
        if f_lo == 0.0:
            zeros.append(lo)
        elif f_lo * f_hi < 0:
            zeros.append(bisect(lambda t: float(bessel_j(m, t)), lo, hi, xtol=xtol, rtol=4 * np.finfo(float).eps))
        lo, f_lo = hi, f_hi
    return zeros[:count]
