import csv

import numpy as np
import pytest

from bchardy.bicomplex import Bicomplex, bnorm
from bchardy.boundary import (
    BoundaryDistribution,
    boundary_coefficients,
    boundary_from_function,
    default_radii,
    distributional_pairing,
    lone_distbv_check,
    lp_boundary_convergence,
    poisson_extend,
    poisson_kernel,
    poisson_reproduction_check,
    richardson,
    write_convergence_csv,
)
from bchardy.functions import BicomplexFunction, Polynomial, make_test_function, zhat
from bchardy.integral_ops import QuadratureScheme, TB_function


class TestRichardson:
    def test_polynomial_exact(self):
        h = [0.5, 0.25, 0.125, 0.0625]
        v, err = richardson(h, [1 + 2 * x + 3 * x**2 for x in h])
        assert abs(v - 1) < 1e-12 and err < 1e-10

    def test_radii_shift_with_bandwidth(self):
        assert len(default_radii()) == 7
        assert default_radii(64)[0] > default_radii(0)[0]


class TestDistribution:
    def test_trig_pairing_exact(self):
        b = BoundaryDistribution.trig({2: 3.0})
        assert b.pair(-2) == 2 * np.pi * 3.0
        assert b.fourier_coefficient(2) == 3.0

    def test_density_pairing(self):
        b = BoundaryDistribution.from_density(lambda t: (t < np.pi).astype(float), [np.pi])
        assert abs(b.pair(lambda t: np.ones_like(t)) - np.pi) < 1e-12

    def test_bicomplex_views(self):
        b = BoundaryDistribution.constant(Bicomplex(1.0, 1.0))
        assert b.codomain == "bicomplex"
        v = b.values(np.array([0.3]))
        assert isinstance(v, Bicomplex) and np.allclose(v.sc, 1) and np.allclose(v.vec, 1)
        with pytest.raises(TypeError):
            BoundaryDistribution.constant(1.0).plus

    def test_sum_and_conj(self):
        a = BoundaryDistribution.trig({1: 1j})
        b = BoundaryDistribution.from_density(lambda t: np.cos(t))
        s = a + b
        assert np.isclose(s.values(0.0), 1 + 1j)
        assert np.isclose(a.conj().values(0.0), -1j)
        with pytest.raises(TypeError):
            a + BoundaryDistribution.constant(Bicomplex(1, 0))

    def test_lp_norm(self):
        assert abs(BoundaryDistribution.constant(2.0).lp_norm(1.0) - 4 * np.pi) < 1e-12


class TestPairing:
    def test_pole_pairing(self):
        res = distributional_pairing(make_test_function("pole", 1.0), -1)
        # 1/(1 - z) = sum z^n; pairing with e^{-i theta} picks 2 pi c_1
        assert res.converged and abs(res.value - 2 * np.pi) < 1e-8

    def test_bicomplex_pairing(self):
        res = distributional_pairing(zhat(), 1)
        assert res.converged
        # plus = conj z -> coefficient of e^{-i theta} is 1
        assert abs(res.value.plus - 2 * np.pi) < 1e-8 and abs(res.value.minus) < 1e-8

    def test_coefficients(self):
        res = boundary_coefficients(make_test_function("exp"), 8)
        assert abs(res.coeffs[3] - 1 / 6) < 1e-10 and abs(res.coeffs[-2]) < 1e-10


class TestPoisson:
    def test_kernel_normalised(self):
        t = 2 * np.pi * np.arange(512) / 512
        assert abs(np.mean(poisson_kernel(0.7, t)) - 1) < 1e-12

    def test_rejects_boundary_radius(self):
        with pytest.raises(ValueError):
            poisson_extend(BoundaryDistribution.constant(1.0), 1.0, 0.0)

    def test_trig_extension(self):
        b = BoundaryDistribution.trig({2: 1.0})
        assert np.isclose(poisson_extend(b, 0.5, 0.3), 0.25 * np.exp(0.6j))

    def test_density_extension(self):
        b = BoundaryDistribution.from_density(lambda t: np.exp(1j * t))
        assert abs(poisson_extend(b, 0.9, 1.0) - 0.9 * np.exp(1j)) < 1e-10

    def test_reproduction(self):
        f = make_test_function("pole", 1.0, 1.5)
        b = boundary_from_function(f, 256)
        rng = np.random.default_rng(0)
        z = 0.9 * np.sqrt(rng.random(30)) * np.exp(2j * np.pi * rng.random(30))
        assert poisson_reproduction_check(f, b, z) < 1e-10


class TestConvergence:
    def test_z_closed_form(self):
        z1 = make_test_function("monomial", 1)
        b = BoundaryDistribution.trig({1: 1.0})
        for r, e in lp_boundary_convergence(z1, b, 2.0, radii=(0.9, 0.99)):
            assert abs(e - 2 * np.pi * (1 - r) ** 2) < 1e-12

    def test_constant_zero(self):
        c = Polynomial({(0, 0): 3.0})
        errs = lp_boundary_convergence(c, BoundaryDistribution.constant(3.0), 2.0)
        assert all(e == 0 for _, e in errs)

    def test_tb_decay(self):
        f = TB_function(BicomplexFunction(Polynomial({(0, 0): 1.0}), Polynomial({(1, 0): 1.0})),
                        QuadratureScheme.coarse())
        b = BoundaryDistribution.bicomplex(
            BoundaryDistribution.from_density(lambda t: f.plus(np.exp(1j * t))),
            BoundaryDistribution.from_density(lambda t: f.minus(np.exp(1j * t))))
        errs = [e for _, e in lp_boundary_convergence(f, b, 1.0)]
        assert errs[0] > errs[1] > errs[2]

    def test_csv(self, tmp_path):
        path = tmp_path / "c.csv"
        write_convergence_csv([(0.9, 0.1), (0.99, 0.01), (0.999, 0.001)], path)
        rows = list(csv.reader(open(path)))
        assert rows[0] == ["r", "error_p", "extrapolant"] and len(rows) == 4
        assert rows[1][0] == "0.90000000000000002"

    def test_lone_check_polynomial(self):
        r = lone_distbv_check(make_test_function("polynomial", {(1, 1): 1.0, (2, 0): 1j}), N=4)
        assert r.verdict == "pass"

    def test_lone_check_open_disk_inconclusive(self):
        r = lone_distbv_check(make_test_function("pole", 0.5), N=2)
        assert r.verdict == "inconclusive"
