import numpy as np
import pytest

from bchardy.bicomplex import Bicomplex, bnorm
from bchardy.functions import (
    BicomplexFunction,
    Conjugate,
    Generic,
    Polynomial,
    ResolutionError,
    Sampled,
    bc_partial,
    bc_partialbar,
    bc_partialbar_at,
    bc_partialbar_power,
    bc_polynomial,
    make_test_function,
    read_csv,
    sample,
    wirtinger_at,
    wirtinger_dz,
    wirtinger_dzbar,
    write_csv,
    zhat,
    zstarhat,
)
from bchardy.grid import PolarGrid, fornberg_weights, spectral_theta_derivative


class TestGrid:
    def test_weights_sum_to_area(self):
        g = PolarGrid(32, 128)
        assert abs(g.weights.sum() - np.pi) < 1e-13

    def test_weights_integrate_polynomials(self):
        g = PolarGrid(16, 64)
        z = g.points
        # int |z|^2 dA = pi/2
        assert abs(np.sum(g.weights * np.abs(z) ** 2) - np.pi / 2) < 1e-13

    def test_rejects_non_power_of_two(self):
        with pytest.raises(ValueError):
            PolarGrid(8, 100)

    def test_refine_coarsen(self):
        g = PolarGrid(32, 128)
        assert g.refined() == PolarGrid(64, 256)
        assert g.coarsened() == PolarGrid(16, 64)
        assert hash(g) == hash(PolarGrid(32, 128))

    def test_fornberg_first_derivative(self):
        x = np.array([-2.0, -1.0, 0.0, 1.0, 2.0])
        w = fornberg_weights(0.0, x, 1)
        assert np.allclose(w, [1 / 12, -2 / 3, 0, 2 / 3, -1 / 12])

    def test_spectral_derivative(self):
        g = PolarGrid(4, 64)
        v = np.broadcast_to(np.sin(3 * g.angles), g.shape)
        assert np.allclose(spectral_theta_derivative(v), 3 * np.cos(3 * g.angles)[None, :])


class TestGenerators:
    def test_polynomial_derivatives(self):
        p = Polynomial({(2, 1): 3.0, (0, 2): 1j})
        assert p.dz().coeffs == {(1, 1): 6.0}
        assert p.dzbar().coeffs == {(2, 0): 3.0, (0, 1): 2j}

    def test_polynomial_conjugate(self):
        p = Polynomial({(2, 1): 1 + 1j})
        z = 0.3 - 0.2j
        assert np.isclose(p.conjugate()(z), np.conj(p(z)))

    def test_pole_rejects_interior_center(self):
        with pytest.raises(ValueError):
            make_test_function("pole", 1.0, 0.5)

    def test_pole_center_and_exponent(self):
        f = make_test_function("pole", 0.5, 2.0)
        assert np.isclose(f(0.5), (1 - 0.25) ** -0.5)
        assert f.closed and f.hardy_p_max == np.inf
        g = make_test_function("pole", 0.5)
        assert g.hardy_p_max == 2.0 and not g.closed

    def test_catalog_unknown(self):
        with pytest.raises(KeyError):
            make_test_function("nonsense")

    def test_zhat_values(self):
        z = 0.3 + 0.4j
        w = zhat()(z)
        assert np.isclose(w.sc, 0.3) and np.isclose(w.vec, 0.4)
        w = zstarhat()(z)
        assert np.isclose(w.sc, 0.3) and np.isclose(w.vec, -0.4)

    def test_bc_polynomial_matches_product(self):
        z = 0.2 + 0.5j
        f = bc_polynomial({(2, 1): 1.0})
        a, b = zhat()(z), zstarhat()(z)
        ref = a * a * b
        assert float(bnorm(f(z) - ref)) < 1e-14

    def test_bc_holo_from_specs(self):
        f = make_test_function("bc-holo", "z*", ("monomial", 2))
        assert np.isclose(f.plus(0.5j), -0.5j) and np.isclose(f.minus(0.5j), -0.25)

    def test_arithmetic(self):
        f = make_test_function("monomial", 1) + 2.0
        assert np.isclose(f(0.5), 2.5)
        g = Generic(np.sin, closed=True) - make_test_function("monomial", 1)
        assert np.isclose(g(0.1), np.sin(0.1) - 0.1)


class TestDerivatives:
    def test_closed_form_used(self):
        rep = wirtinger_dz(make_test_function("monomial", 3))
        assert rep.scheme == "closed-form" and rep.est_error == 0

    def test_generic_numeric_dz(self):
        f = Generic(np.exp, closed=True, name="e")
        rep = wirtinger_dz(f)
        g = rep.values.grid
        m = g.interior_mask(0.9)
        err = np.max(np.abs(rep.values.values - np.exp(g.points))[m])
        assert err < 1e-6
        rep2 = wirtinger_dzbar(f)
        assert np.max(np.abs(rep2.values.values)[m]) < 1e-6

    def test_sampled_derivative(self):
        g = PolarGrid(32, 128)
        s = sample(make_test_function("polynomial", {(1, 2): 1.0}), g)
        rep = wirtinger_dzbar(s)
        m = g.interior_mask(0.9)
        ref = 2 * g.points * np.conj(g.points)
        assert np.max(np.abs(rep.values.values - ref)[m]) < 1e-6

    def test_require_raises(self):
        f = Generic(lambda z: np.abs(z - 0.5) ** 0.5, closed=True)
        rep = wirtinger_dzbar(f, tol=1e-12)
        with pytest.raises(ResolutionError):
            rep.require()

    def test_bc_dbar_of_zhat(self):
        # dbar zstarhat^n = n zstarhat^(n-1); dbar zhat = 0
        rep = bc_partialbar(zstarhat())
        z = 0.1 + 0.2j
        assert float(bnorm(rep.values(z) - Bicomplex(1, 0))) < 1e-14
        rep = bc_partialbar(zhat())
        assert float(bnorm(rep.values(z))) < 1e-14
        rep = bc_partial(zhat())
        assert float(bnorm(rep.values(z) - Bicomplex(1, 0))) < 1e-14

    def test_bc_dbar_power(self):
        f = bc_polynomial({(0, 3): 1.0})
        rep = bc_partialbar_power(f, 2)
        z = 0.3 - 0.1j
        ref = zstarhat()(z) * 6.0
        assert float(bnorm(rep.values(z) - ref)) < 1e-13

    def test_pointwise_stencil(self):
        f = make_test_function("polynomial", {(2, 2): 1.0})
        z = np.array([0.1, 0.3j, -0.5 + 0.2j])
        d, est = wirtinger_at(f, z, "dzbar")
        assert np.max(np.abs(d - 2 * z**2 * np.conj(z))) < 1e-8 and est < 1e-6
        with pytest.raises(ValueError):
            wirtinger_at(f, np.array([0.99]))
        b, _ = bc_partialbar_at(zstarhat(), z)
        assert float(np.max(bnorm(b - Bicomplex(np.ones(3), np.zeros(3))))) < 1e-9


class TestSampledAndCSV:
    def test_interpolation_accuracy(self):
        g = PolarGrid(64, 256)
        s = sample(make_test_function("exp"), g)
        z = np.array([0.0, 0.5 + 0.1j, -0.3j, 0.9])
        assert np.max(np.abs(s(z) - np.exp(z))) < 2e-3

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            Sampled(PolarGrid(8, 16), np.zeros((4, 4)))

    def test_csv_round_trip_complex(self, tmp_path):
        g = PolarGrid(8, 16)
        s = sample(make_test_function("monomial", 2), g)
        write_csv(s, tmp_path / "f.csv")
        back = read_csv(tmp_path / "f.csv")
        assert isinstance(back, Sampled) and np.array_equal(back.values, s.values)

    def test_csv_round_trip_bicomplex(self, tmp_path):
        g = PolarGrid(8, 16)
        f = sample(zhat(), g)
        write_csv(f, tmp_path / "f.csv")
        back = read_csv(tmp_path / "f.csv")
        assert isinstance(back, BicomplexFunction)
        assert np.allclose(back.plus.values, f.plus.values, atol=1e-15)
        assert np.allclose(back.minus.values, f.minus.values, atol=1e-15)

    def test_csv_needs_sampled(self, tmp_path):
        with pytest.raises(TypeError):
            write_csv(make_test_function("exp"), tmp_path / "x.csv")

    def test_conjugate_wrapper(self):
        f = Conjugate(make_test_function("monomial", 1))
        assert np.isclose(f(1j), -1j)
