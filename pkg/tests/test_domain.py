import numpy as np
import pytest
from numpy.testing import assert_allclose
from bdry_ext.bessel import bessel_j, bessel_j_prime, bessel_j_zeros
from bdry_ext.boundary import Disk, Interval
from bdry_ext.domain import (
    ModeState,
    boundary_pair_data,
    catalog,
    catalog_function,
    decompose,
    dtn,
    gamma_hat,
    gradient_energy,
    harmonic_extension,
    interval_basis_kind,
    l2_inner,
    l2_norm,
    mu_from_trace,
    pi_d,
    trace_data,
)
from bdry_ext.exceptions import DimensionMismatchError, DomainError

SAMPLES = np.linspace(0.05, 0.95, 7)


class TestDirichletToNeumann:
    def test_interval(self):
        assert_allclose(dtn(Interval(0.0, 1.0)), [[1.0, -1.0], [-1.0, 1.0]])

    def test_disk(self):
        disk = Disk(1.0, 2)
        D = dtn(disk)
        assert D[disk.mode_index(2), disk.mode_index(2)] == pytest.approx(2.0)
        assert D[disk.mode_index(-2), disk.mode_index(-2)] == pytest.approx(2.0)
        assert D[0, 0] == 0.0

    def test_harmonic_input_has_zero_mu(self):
        for geom in (Interval(0.0, 1.0), Disk(1.0, 2)):
            g = np.arange(geom.dim) + 0.5j
            psi = harmonic_extension(geom, g)
            g_hat, u_hat = boundary_pair_data(psi)
            assert_allclose(u_hat, 0.0, atol=1e-12)


class TestTraces:
    """Analytic traces and normal derivatives of catalog functions."""

    def test_sine(self, interval_pi):
        g, n = catalog_function(interval_pi, "sine").trace()
        assert_allclose(g, [0.0, 0.0], atol=1e-12)
        assert_allclose(n, [-1.0, -1.0], atol=1e-12)

    def test_linear(self, unit_interval):
        g, n = catalog_function(unit_interval, "linear").trace()
        assert_allclose(g, [0.0, 1.0])
        assert_allclose(n, [-1.0, 1.0])

    def test_dipole(self):
        disk = Disk(1.0, 2)
        g, n = catalog_function(disk, "dipole").trace()
        expected = np.zeros(disk.dim)
        expected[disk.mode_index(1)] = np.sqrt(2.0 * np.pi)
        assert_allclose(g, expected, atol=1e-14)
        assert_allclose(n, expected, atol=1e-14)

    @pytest.mark.parametrize("geom", [Interval(0.0, np.pi), Interval(-1.0, 2.0), Disk(1.0, 2), Disk(2.0, 3)])
    def test_matches_finite_differences(self, geom):
        for name, psi in catalog(geom).items():
            assert psi.boundary_data_defect() <= 1e-5, name


class TestRegularizedDerivative:
    def test_sine_mu(self, interval_pi):
        g_hat, u_hat = boundary_pair_data(catalog_function(interval_pi, "sine"))
        assert_allclose(u_hat, [-1.0, -1.0], atol=1e-12)

    def test_bessel_mu(self):
        disk = Disk(1.0, 1)
        k = bessel_j_zeros(0, 1)[0]
        g_hat, u_hat = boundary_pair_data(catalog_function(disk, "bessel"))
        expected = np.zeros(disk.dim, dtype=complex)
        expected[0] = np.sqrt(2.0 * np.pi) * k * bessel_j_prime(0, k)
        assert_allclose(u_hat, expected, atol=1e-10)

    def test_gamma_hat(self):
        disk = Disk(1.0, 1)
        e = np.eye(3)
        assert_allclose(gamma_hat(disk, e[1]), 2.0**-0.25 * e[1])
        assert_allclose(gamma_hat(Interval(0.0, 1.0), [1.0, 0.0]), [1.0, 0.0])
        assert_allclose(gamma_hat(disk, np.zeros(3)), 0.0)

    def test_mu_length_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            mu_from_trace(Interval(0.0, 1.0), [0.0, 0.0, 0.0], [0.0, 0.0])


class TestDecomposition:
    """Harmonic extension, Pi_D and psi = psi_D + psi_0."""

    def test_harmonic_extension_interval(self, unit_interval):
        psi = harmonic_extension(unit_interval, [0.0, 1.0])
        assert_allclose(psi(SAMPLES), SAMPLES)

    def test_harmonic_extension_disk(self):
        disk = Disk(1.0, 2)
        psi = harmonic_extension(disk, np.eye(disk.dim)[0])
        assert_allclose(psi(SAMPLES), 1.0 / np.sqrt(2.0 * np.pi))

    def test_harmonic_extension_zero(self, unit_interval):
        assert_allclose(harmonic_extension(unit_interval, [0.0, 0.0])(SAMPLES), 0.0)

    def test_pi_d_removes_affine_part(self, interval_pi):
        psi = catalog_function(interval_pi, "sine_plus_linear")
        x = np.pi * SAMPLES
        assert_allclose(pi_d(interval_pi, psi)(x), np.sin(x), atol=1e-12)

    def test_pi_d_annihilates_harmonic(self, unit_interval):
        psi = catalog_function(unit_interval, "linear")
        assert_allclose(pi_d(unit_interval, psi)(SAMPLES), 0.0, atol=1e-14)

    def test_pi_d_fixes_zero_trace(self, unit_interval):
        psi = catalog_function(unit_interval, "bubble")
        assert_allclose(pi_d(unit_interval, psi)(SAMPLES), psi(SAMPLES), atol=1e-14)

    @pytest.mark.parametrize("geom", [Interval(0.0, 2.0), Disk(1.0, 2)])
    def test_decompose_sums_back(self, geom):
        theta = np.linspace(0.0, 2.0 * np.pi, SAMPLES.size)
        for name, psi in catalog(geom).items():
            psi_d, psi_0 = decompose(geom, psi)
            g_d, _ = psi_d.trace()
            assert_allclose(g_d, 0.0, atol=1e-12, err_msg=name)
            r = geom.length * SAMPLES
            if isinstance(geom, Interval):
                assert_allclose(psi_d(r) + psi_0(r), psi(r), atol=1e-12, err_msg=name)
            else:
                assert_allclose(psi_d(r, theta) + psi_0(r, theta), psi(r, theta), atol=1e-12, err_msg=name)

    @pytest.mark.parametrize("geom", [Interval(0.0, np.pi), Interval(-0.5, 1.5), Disk(1.0, 2), Disk(2.0, 3)])
    def test_pi_d_idempotent(self, geom):
        theta = np.linspace(0.0, 2.0 * np.pi, SAMPLES.size)
        if isinstance(geom, Interval):
            args = (geom.a + geom.length * SAMPLES,)
        else:
            args = (geom.length * SAMPLES, theta)
        for name, psi in catalog(geom).items():
            once = pi_d(geom, psi)
            twice = pi_d(geom, once)
            assert_allclose(twice(*args), once(*args), atol=1e-10, err_msg=name)


class TestQuadrature:
    def test_sine_energy(self, interval_pi):
        assert gradient_energy(catalog_function(interval_pi, "sine")) == pytest.approx(np.pi / 2, abs=1e-10)

    @pytest.mark.parametrize("c", [1.0, 2.0, -0.5])
    def test_bubble_energy(self, unit_interval, c):
        psi = catalog_function(unit_interval, "bubble").scaled(c)
        assert gradient_energy(psi) == pytest.approx(c * c / 3.0, abs=1e-10)

    def test_sine_norm(self, interval_pi):
        assert l2_norm(catalog_function(interval_pi, "sine")) == pytest.approx(np.sqrt(np.pi / 2), abs=1e-10)

    def test_disk_constant_norm(self):
        disk = Disk(2.0, 1)
        assert l2_norm(catalog_function(disk, "constant")) == pytest.approx(np.sqrt(4.0 * np.pi), abs=1e-10)

    def test_modes_are_orthogonal(self):
        disk = Disk(1.0, 2)
        assert abs(l2_inner(catalog_function(disk, "bubble"), catalog_function(disk, "dipole"))) < 1e-14

    def test_different_domains(self):
        with pytest.raises(DimensionMismatchError):
            l2_inner(catalog_function(Interval(0.0, 1.0), "sine"), catalog_function(Interval(0.0, 2.0), "sine"))


class TestModeState:
    """Solutions of -Delta u = lambda u over the energy basis."""

    @pytest.mark.parametrize(
        "energy, kind",
        [(1.0, "trigonometric"), (0.0, "polynomial"), (-0.01, "hyperbolic"), (-100.0, "exponential")],
    )
    def test_basis_kind(self, energy, kind):
        assert interval_basis_kind(Interval(0.0, 1.0), energy) == kind

    def test_as_function(self, interval_pi):
        state = ModeState(interval_pi, 1.0, [0.0, 1.0]).normalized()
        x = np.pi * SAMPLES
        assert_allclose(state.as_function()(x), np.sin(x) / np.sqrt(np.pi / 2), atol=1e-10)

    @pytest.mark.parametrize("energy", [7.3, 0.0, -0.5, -400.0])
    def test_trace_data_matches_function(self, energy):
        for geom in (Interval(0.0, 1.0), Disk(1.0, 2)):
            coeffs = np.linspace(1.0, 2.0, 2 if isinstance(geom, Interval) else geom.dim) + 0.3j
            state = ModeState(geom, energy, coeffs)
            g, n = trace_data(state)
            g_ref, n_ref = state.as_function().trace()
            assert_allclose(g, g_ref, rtol=1e-12, atol=1e-12)
            assert_allclose(n, n_ref, rtol=1e-12, atol=1e-12)

    def test_disk_bessel_state(self):
        disk = Disk(1.0, 1)
        k = bessel_j_zeros(0, 1)[0]
        state = ModeState(disk, k * k, [1.0, 0.0, 0.0])
        r = SAMPLES
        assert_allclose(state.as_function()(r), bessel_j(0, k * r), atol=1e-12)

    def test_zero_state(self, unit_interval):
        with pytest.raises(DomainError):
            ModeState(unit_interval, 1.0, [0.0, 0.0]).normalized()

    def test_wrong_length(self, unit_interval):
        with pytest.raises(DimensionMismatchError):
            ModeState(unit_interval, 1.0, [1.0, 0.0, 0.0])


class TestCatalog:
    def test_interval_names(self, unit_interval):
        names = set(catalog(unit_interval))
        assert {"constant", "linear", "sine", "cosine", "sine_plus_linear", "bubble", "cubic", "exp"} <= names

    def test_disk_names_follow_cutoff(self):
        assert "dipole" not in catalog(Disk(1.0, 0))
        assert {"dipole", "mixed"} <= set(catalog(Disk(1.0, 1)))
        assert {"constant", "bubble", "bessel", "dipole", "quadrupole", "mixed"} <= set(catalog(Disk(1.0, 2)))

    def test_unknown(self, unit_interval):
        with pytest.raises(DomainError):
            catalog_function(unit_interval, "gaussian")

    def test_arithmetic(self, unit_interval):
        sine = catalog_function(unit_interval, "sine")
        linear = catalog_function(unit_interval, "linear")
        assert_allclose((sine + linear - linear)(SAMPLES), sine(SAMPLES), atol=1e-14)
