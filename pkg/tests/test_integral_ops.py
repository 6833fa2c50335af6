import numpy as np
import pytest

from bchardy.bicomplex import Bicomplex, bnorm
from bchardy.functions import BicomplexFunction, Conjugate, Polynomial, make_test_function, zhat, zstarhat
from bchardy.integral_ops import (
    K01,
    K10,
    KernelId,
    QuadratureScheme,
    T,
    TB,
    TB_function,
    T_function,
    convolve_kernel,
    iterated_TB,
    kernel_K,
    materialize_T,
    materialize_TB,
    oracle_quadrature,
)

ONE = Polynomial({(0, 0): 1.0})


def t_exact(a, b, z):
    """T(z^a zbar^b) in closed form."""
    zc = np.conj(z)
    out = z**a * zc ** (b + 1) / (b + 1)
    if a > b:
        out = out - z ** (a - b - 1) / (b + 1)
    return out


@pytest.fixture(scope="module")
def pts():
    rng = np.random.default_rng(1)
    r = np.concatenate([0.9 * np.sqrt(rng.random(8)), [0.0, 0.95, 0.999]])
    return r * np.exp(2j * np.pi * rng.random(r.size))


class TestKernels:
    def test_kernel_ids(self):
        with pytest.raises(ValueError):
            KernelId(0, 0)
        with pytest.raises(ValueError):
            KernelId(-1, 2)

    def test_cauchy_kernel(self):
        z = 0.3 + 0.1j
        assert np.isclose(kernel_K(K01, z), 1 / (np.pi * z))
        assert np.isclose(kernel_K(K10, z), 1 / (np.pi * np.conj(z)))

    def test_log_kernel(self):
        z = 0.5j
        k = kernel_K(KernelId(1, 1), z)
        assert np.isclose(k, np.log(0.25) / np.pi)

    def test_kernel_rejects_origin(self):
        with pytest.raises(ValueError):
            kernel_K(K01, 0.0)

    def test_scheme_validation(self):
        with pytest.raises(ValueError):
            QuadratureScheme(n_phi=30)
        with pytest.raises(ValueError):
            QuadratureScheme(rho0=0.0)


class TestCauchyPompeiu:
    @pytest.mark.parametrize("a,b", [(0, 0), (1, 0), (2, 1), (0, 2), (3, 0)])
    def test_monomials_closed_form(self, a, b, pts):
        f = Polynomial({(a, b): 1.0})
        err = np.max(np.abs(T(f, pts) - t_exact(a, b, pts)))
        assert err < 1e-6

    def test_scalar_input(self):
        v = T(ONE, 0.25j)
        assert isinstance(v, complex) and abs(v - np.conj(0.25j)) < 1e-6

    def test_rejects_bicomplex(self):
        with pytest.raises(TypeError):
            T(zhat(), 0.1)

    def test_oracle_agreement(self):
        z = np.array([0.2 + 0.1j, -0.4j, 0.6])
        oracle = oracle_quadrature(ONE, lambda d: 1 / (np.pi * d), z, resolution=512)
        assert np.max(np.abs(oracle - T(ONE, z))) < 1e-3

    def test_oracle_min_resolution(self):
        with pytest.raises(ValueError):
            oracle_quadrature(ONE, lambda d: 1 / d, 0.1, resolution=8)

    def test_materialized(self):
        s = materialize_T(ONE)
        g = s.grid
        assert np.max(np.abs(s.values - np.conj(g.points))) < 1e-4
        assert abs(s(0.3 + 0.3j) - (0.3 - 0.3j)) < 2e-3

    def test_lazy_wrapper(self, pts):
        f = T_function(ONE)
        assert np.max(np.abs(f(pts) - np.conj(pts))) < 1e-6 and f.closed


class TestTheodorescu:
    def test_tb_of_one(self, pts):
        v = TB(BicomplexFunction.constant(1.0), pts)
        ref = Bicomplex(pts.real, -pts.imag + 0j)
        assert float(np.max(bnorm(v - ref))) < 1e-6

    def test_tb_matches_zstarhat(self, pts):
        v = TB_function(BicomplexFunction.constant(1.0))(pts)
        assert float(np.max(bnorm(v - zstarhat()(pts)))) < 1e-6

    def test_idempotent_identity(self, pts):
        g = BicomplexFunction(make_test_function("exp"), make_test_function("monomial", 2))
        lhs = TB(g, pts)
        plus = np.conj(T(Conjugate(g.plus), pts))
        minus = T(g.minus, pts)
        assert float(np.max(bnorm(lhs - Bicomplex.from_pair(plus, minus)))) < 1e-12

    def test_tb_of_complex_function_lifts(self):
        v = TB(ONE, 0.1)
        assert float(bnorm(v - Bicomplex(0.1, 0.0))) < 1e-6

    def test_materialize_tb(self):
        m = materialize_TB(BicomplexFunction.constant(1.0))
        g = m.plus.grid
        ref = zstarhat()(g.points)
        assert float(np.max(bnorm(m(g.points) - ref))) < 1e-4

    def test_kernel_convolution_is_nested_t(self):
        # K_{0,2} * f = T(T(f)) for the minus component (two nested T's)
        z = np.array([0.1 + 0.2j, -0.3, 0.5j])
        nested = iterated_TB([Polynomial({})], BicomplexFunction.constant(1.0), z)
        direct = convolve_kernel(KernelId(0, 2), ONE, z)
        assert np.max(np.abs(nested.minus - direct)) < 1e-3
        direct_p = convolve_kernel(KernelId(2, 0), ONE, z)
        assert np.max(np.abs(nested.plus - direct_p)) < 1e-3
