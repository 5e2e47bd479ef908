import numpy as np
import pytest
from numpy.testing import assert_allclose
from bdry_ext import api
from bdry_ext.boundary import random_unitary
from bdry_ext.cayley import SelfAdjointParam, unitary_to_param
from bdry_ext.exceptions import BadConfigError
from bdry_ext.presets import dirichlet, krein, neumann, periodic

INTERVAL_PI = {"kind": "interval", "a": 0.0, "b": np.pi}


class TestSpectrum:
    def test_geometry_dict(self):
        result = api.spectrum(INTERVAL_PI, np.eye(2), window=(-1.0, 30.0))
        assert_allclose(result.eigenvalues, [1.0, 4.0, 9.0, 16.0, 25.0], atol=1e-8)

    @pytest.mark.parametrize("make", [dirichlet, neumann, periodic, krein])
    def test_route_equivalence(self, interval_pi, make):
        U = make(interval_pi)
        again = api.convert(interval_pi, param=unitary_to_param(U))["unitary"]
        one = api.spectrum(interval_pi, U, window=(-1.0, 30.0))
        two = api.spectrum(interval_pi, again, window=(-1.0, 30.0))
        assert one.multiplicities == two.multiplicities
        assert_allclose(one.eigenvalues, two.eigenvalues, atol=1e-8)


class TestConvert:
    def test_krein(self, unit_interval):
        data = api.convert(unit_interval, unitary=-np.eye(2))
        assert data["rank_X"] == 2
        assert_allclose(np.array(data["param"]["M"])[..., 0], 0.0, atol=1e-15)
        assert_allclose(data["K_U"], 0.0, atol=1e-15)

    def test_keys(self, unit_interval):
        data = api.convert(unit_interval, unitary=np.eye(2))
        assert set(data) == {"geometry", "unitary", "param", "rank_X", "L_raw", "K_U", "Q_U"}
        assert data["geometry"] == {"kind": "interval", "a": 0.0, "b": 1.0}
        assert data["rank_X"] == 0

    @pytest.mark.parametrize("seed", range(5))
    def test_round_trip(self, unit_disk, seed):
        U = random_unitary(unit_disk.dim, seed)
        param = unitary_to_param(U)
        assert_allclose(api.convert(unit_disk, param=param)["unitary"], U, atol=1e-8)

    def test_exactly_one_input(self, unit_interval):
        with pytest.raises(BadConfigError):
            api.convert(unit_interval)
        with pytest.raises(BadConfigError):
            api.convert(unit_interval, unitary=np.eye(2), param=SelfAdjointParam(np.zeros((2, 0)), np.zeros((0, 0))))


class TestCheckSelfAdjoint:
    def test_random(self):
        checker = api.check_self_adjoint(random_unitary(4, 42))
        assert checker.is_self_adjoint
        assert checker.report["isotropy"]

    def test_print_log(self, capsys):
        api.check_self_adjoint(np.eye(2), print_log=True, name="dirichlet")
        assert "dirichlet: SELF_ADJOINT" in capsys.readouterr().out


class TestForm:
    def test_catalog_name(self, interval_pi):
        assert api.form(interval_pi, dirichlet(interval_pi), function="sine").t_U == pytest.approx(np.pi / 2, abs=1e-10)

    def test_eigenfunction(self, interval_pi):
        value = api.form(interval_pi, neumann(interval_pi), eigen_energy=4.0)
        assert value.t_U == pytest.approx(4.0, abs=1e-6)

    def test_exactly_one_input(self, interval_pi):
        with pytest.raises(BadConfigError):
            api.form(interval_pi, dirichlet(interval_pi))
