import time
from typing import List
import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.special import jnp_zeros
from bdry_ext.bessel import bessel_j, bessel_j_zeros
from bdry_ext.boundary import Disk, Interval, random_unitary
from bdry_ext.domain import l2_inner, l2_norm
from bdry_ext.exceptions import BadConfigError, BesselEnvelopeError, DimensionMismatchError, RootNotFoundError
from bdry_ext.presets import dirichlet, krein, neumann, periodic, robin
from bdry_ext.spectral import (
    SpectrumResult,
    default_window,
    disk_dirichlet_eigenvalues,
    eigenfunction,
    eigenfunctions,
    scan_spectrum,
    secular_singular_values,
)

J01 = 2.404825557695773


class ExpectedSpectrum:
    def __init__(self, values: List[float], multiplicities: List[int], tol: float):
        self.values = values
        self.multiplicities = multiplicities
        self.tol = tol

    def __eq__(self, result: SpectrumResult):
        if len(result.eigenvalues) != len(self.values):
            return False
        if list(result.multiplicities) != list(self.multiplicities):
            return False
        return bool(np.all(np.abs(np.asarray(result.eigenvalues) - np.asarray(self.values)) <= self.tol))


class TestBessel:
    def test_first_zero(self):
        assert abs(bessel_j(0, J01)) <= 1e-10
        assert bessel_j_zeros(0, 1)[0] == pytest.approx(J01, abs=1e-12)

    def test_zeros_interlace(self):
        z0 = bessel_j_zeros(0, 3)
        z1 = bessel_j_zeros(1, 3)
        assert z0[0] < z1[0] < z0[1] < z1[1] < z0[2] < z1[2]

    @pytest.mark.parametrize("m, x", [(-1, 1.0), (201, 1.0), (0, 600.0), (0, -1.0), (1.5, 1.0)])
    def test_envelope(self, m, x):
        with pytest.raises(BesselEnvelopeError):
            bessel_j(m, x)

    def test_disk_dirichlet_eigenvalues(self):
        assert disk_dirichlet_eigenvalues(1.0, 0, 1)[0] == pytest.approx(J01**2, abs=1e-10)
        assert disk_dirichlet_eigenvalues(2.0, -1, 1)[0] == pytest.approx((bessel_j_zeros(1, 1)[0] / 2.0) ** 2)


class TestSecularMatrix:
    """Smallest singular value of the secular operator."""

    def test_dirichlet_off_spectrum(self, interval_pi):
        assert secular_singular_values(interval_pi, dirichlet(interval_pi), 2.5)[-1] > 1e-3

    def test_dirichlet_on_spectrum(self, interval_pi):
        assert secular_singular_values(interval_pi, dirichlet(interval_pi), 4.0)[-1] <= 1e-10

    def test_disk_dirichlet_root(self):
        disk = Disk(1.0, 3)
        assert secular_singular_values(disk, dirichlet(disk), J01**2)[-1] <= 1e-10
        state = eigenfunction(disk, dirichlet(disk), J01**2)
        assert np.argmax(np.abs(state.coeffs)) == 0

    def test_dimension_mismatch(self, interval_pi):
        with pytest.raises(DimensionMismatchError):
            secular_singular_values(interval_pi, np.eye(3), 1.0)

    @pytest.mark.parametrize("energy", [-1e-3, -1e-9, 0.0, 1e-9, 1e-3])
    def test_continuous_across_zero(self, unit_interval, energy):
        U = random_unitary(2, 3)
        s_zero = secular_singular_values(unit_interval, U, 0.0)
        assert_allclose(secular_singular_values(unit_interval, U, energy), s_zero, atol=1e-3)


class TestScan:
    """Spectra of the classical extensions."""

    def test_dirichlet(self, interval_pi):
        start = time.perf_counter()
        result = scan_spectrum(interval_pi, dirichlet(interval_pi), -1.0, 30.0)
        assert time.perf_counter() - start < 1.0
        assert result == ExpectedSpectrum([1.0, 4.0, 9.0, 16.0, 25.0], [1] * 5, 1e-8)

    def test_neumann(self, interval_pi):
        result = scan_spectrum(interval_pi, neumann(interval_pi), -1.0, 20.0)
        assert result == ExpectedSpectrum([0.0, 1.0, 4.0, 9.0, 16.0], [1] * 5, 1e-8)

    def test_periodic(self):
        geom = Interval(0.0, 2.0 * np.pi)
        result = scan_spectrum(geom, periodic(geom), -0.5, 5.0)
        assert result == ExpectedSpectrum([0.0, 1.0, 4.0], [1, 2, 2], 1e-6)
        assert_allclose(result.expanded(), [0.0, 1.0, 1.0, 4.0, 4.0], atol=1e-6)

    def test_krein(self, unit_interval):
        result = scan_spectrum(unit_interval, krein(unit_interval), -1.0, 1.0)
        assert result == ExpectedSpectrum([0.0], [2], 0.0)
        assert result.residuals[0] <= 1e-8

    def test_disk_dirichlet(self, unit_disk):
        start = time.perf_counter()
        result = scan_spectrum(unit_disk, dirichlet(unit_disk), 1.0, 40.0)
        assert time.perf_counter() - start < 5.0
        expected = [
            disk_dirichlet_eigenvalues(1.0, 0, 1)[0],
            disk_dirichlet_eigenvalues(1.0, 1, 1)[0],
            disk_dirichlet_eigenvalues(1.0, 2, 1)[0],
            disk_dirichlet_eigenvalues(1.0, 0, 2)[1],
        ]
        assert result == ExpectedSpectrum(expected, [1, 2, 2, 1], 1e-6)
        assert result.eigenvalues[0] == pytest.approx(bessel_j_zeros(0, 1)[0] ** 2, abs=1e-6)

    def test_neumann_wide_window(self, interval_pi):
        result = scan_spectrum(interval_pi, neumann(interval_pi), -1.0, 400.5)
        expected = [float(n * n) for n in range(21)]
        assert result == ExpectedSpectrum(expected, [1] * 21, 1e-8)
        assert max(result.residuals) <= 1e-8

    def test_dirichlet_wide_window(self, interval_pi):
        result = scan_spectrum(interval_pi, dirichlet(interval_pi), 0.5, 400.5)
        expected = [float(n * n) for n in range(1, 21)]
        assert result == ExpectedSpectrum(expected, [1] * 20, 1e-8)

    def test_disk_neumann(self):
        disk = Disk(1.0, 3)
        # Zeros of J_m' (and lambda = 0 for the constant); |m| >= 1 comes with +m and -m.
        roots = [(0.0, 1)] + [(z**2, 1 if m == 0 else 2) for m in range(4) for z in jnp_zeros(m, 3) if z**2 < 30.0]
        roots.sort()
        result = scan_spectrum(disk, neumann(disk), -1.0, 30.0)
        assert result == ExpectedSpectrum([lam for lam, _ in roots], [mult for _, mult in roots], 1e-6)
        assert result.eigenvalues[1] == pytest.approx(3.3900, abs=1e-4)

    def test_disk_dirichlet_is_union_of_modes(self):
        disk = Disk(1.0, 3)
        roots = sorted(
            (lam, 1 if m == 0 else 2) for m in range(4) for lam in disk_dirichlet_eigenvalues(1.0, m, 3) if lam < 60.0
        )
        result = scan_spectrum(disk, dirichlet(disk), 1.0, 60.0)
        assert result == ExpectedSpectrum([lam for lam, _ in roots], [mult for _, mult in roots], 1e-6)

    @pytest.mark.parametrize("name", ["neumann", "krein", "robin"])
    def test_dirichlet_is_an_upper_bound(self, unit_interval, name):
        U = {"neumann": neumann, "krein": krein}.get(name, lambda g: robin(g, 1.0))(unit_interval)
        other = scan_spectrum(unit_interval, U, -1.0, 200.0).expanded()
        upper = scan_spectrum(unit_interval, dirichlet(unit_interval), -1.0, 200.0).expanded()
        assert len(upper) == 4
        assert len(other) >= len(upper)
        for k, lam in enumerate(upper):
            assert other[k] <= lam + 1e-8, f"k={k}"

    def test_sharp_minimum_above_tolerance_warns(self, interval_pi):
        with pytest.warns(RuntimeWarning, match="was not accepted"):
            result = scan_spectrum(interval_pi, dirichlet(interval_pi), 0.5, 30.0, grid_points=400, tol_accept=1e-20)
        assert len(result) == 0

    def test_workers_do_not_change_result(self, unit_interval):
        U = random_unitary(2, 17)
        one = scan_spectrum(unit_interval, U, -50.0, 200.0, grid_points=2000)
        three = scan_spectrum(unit_interval, U, -50.0, 200.0, grid_points=2000, workers=3)
        assert_allclose(one.eigenvalues, three.eigenvalues, rtol=0, atol=1e-12)
        assert one.multiplicities == three.multiplicities

    def test_empty_result(self, interval_pi):
        result = scan_spectrum(interval_pi, dirichlet(interval_pi), 1.5, 3.5)
        assert len(result) == 0
        assert result.window == (1.5, 3.5)

    def test_default_window(self, interval_pi, unit_disk):
        assert default_window(interval_pi) == pytest.approx((-2500.0 / np.pi**2, 100.0))
        assert default_window(unit_disk) == pytest.approx((-2500.0, 400.0))

    @pytest.mark.parametrize("lo, hi, points", [(1.0, 1.0, 100), (2.0, 1.0, 100), (0.0, 1.0, 15)])
    def test_bad_scan_arguments(self, interval_pi, lo, hi, points):
        with pytest.raises(BadConfigError):
            scan_spectrum(interval_pi, dirichlet(interval_pi), lo, hi, grid_points=points)

    def test_to_dict(self, interval_pi):
        data = scan_spectrum(interval_pi, dirichlet(interval_pi), 0.5, 1.5).to_dict()
        assert data["multiplicities"] == [1]
        assert data["window"] == [0.5, 1.5]


class TestEigenfunctions:
    SAMPLES = np.linspace(0.1, 0.9, 5)

    def test_dirichlet_sine(self, interval_pi):
        psi = eigenfunction(interval_pi, dirichlet(interval_pi), 1.0).as_function()
        x = np.pi * self.SAMPLES
        assert_allclose(np.abs(psi(x)), np.sin(x) / np.sqrt(np.pi / 2), atol=1e-8)

    def test_neumann_constant(self, interval_pi):
        psi = eigenfunction(interval_pi, neumann(interval_pi), 0.0).as_function()
        assert_allclose(np.abs(psi(np.pi * self.SAMPLES)), 1.0 / np.sqrt(np.pi), atol=1e-8)

    def test_disk_ground_state(self, unit_disk):
        psi = eigenfunction(unit_disk, dirichlet(unit_disk), J01**2).as_function()
        values = psi(self.SAMPLES)
        assert_allclose(values / psi(np.array([0.0]))[0], bessel_j(0, J01 * self.SAMPLES), atol=1e-8)

    def test_periodic_degenerate(self):
        geom = Interval(0.0, 2.0 * np.pi)
        states = eigenfunctions(geom, periodic(geom), 1.0)
        assert len(states) == 2

    def test_not_an_eigenvalue(self, interval_pi):
        with pytest.raises(RootNotFoundError):
            eigenfunction(interval_pi, dirichlet(interval_pi), 2.5)

    @pytest.mark.parametrize(
        "geom, U, lo, hi",
        [
            (Interval(0.0, 1.0), random_unitary(2, 17), -50.0, 200.0),
            (Interval(0.0, np.pi), robin(Interval(0.0, np.pi), -0.7), -5.0, 30.0),
            (Disk(1.0, 3), neumann(Disk(1.0, 3)), -1.0, 30.0),
        ],
    )
    def test_orthogonal_across_eigenvalues(self, geom, U, lo, hi):
        pairs = [
            (lam, state.as_function())
            for lam in scan_spectrum(geom, U, lo, hi).eigenvalues
            for state in eigenfunctions(geom, U, lam)
        ]
        assert len({lam for lam, _ in pairs}) >= 3
        for lam, phi in pairs:
            assert l2_norm(phi) == pytest.approx(1.0, abs=1e-6)
            for mu, psi in pairs:
                if lam != mu:
                    assert abs(l2_inner(phi, psi)) <= 1e-6, f"lambda={lam}, mu={mu}"
