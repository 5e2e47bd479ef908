import numpy as np
import pytest
from bdry_ext.boundary import Disk, Interval
from bdry_ext.spectral import SpectrumResult
from test_spectral import ExpectedSpectrum


def pytest_assertrepr_compare(op, left, right):
    """Customize the assertion message for `pytest`."""
    if isinstance(left, SpectrumResult) and isinstance(right, ExpectedSpectrum) and op == "==":
        msg = ["Scanned spectrum does not match the expected spectrum:"]
        found = list(zip(left.eigenvalues, left.multiplicities))
        for i in range(max(len(found), len(right.values))):
            res = f"{found[i][0]:.12g} (x{found[i][1]})" if i < len(found) else "-"
            ans = f"{right.values[i]:.12g} (x{right.multiplicities[i]})" if i < len(right.values) else "-"
            msg.append(f"#{i:2} | ans: {ans:<24} | res: {res}")
        return msg


@pytest.fixture
def interval_pi():
    return Interval(0.0, np.pi)


@pytest.fixture
def unit_interval():
    return Interval(0.0, 1.0)


@pytest.fixture
def unit_disk():
    return Disk(1.0, 8)
