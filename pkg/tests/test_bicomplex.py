import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bchardy.bicomplex import (
    ONE,
    J,
    P_MINUS,
    P_PLUS,
    ZERO,
    Bicomplex,
    bconj,
    bicomplexify,
    bnorm,
    from_idempotent,
    is_zero_divisor,
    mul,
    to_idempotent,
)

finite = st.floats(min_value=-1e3, max_value=1e3, allow_nan=False, allow_infinity=False)
cplx = st.builds(complex, finite, finite)
bicomplex = st.builds(Bicomplex, cplx, cplx)


def close(a, b, rel=1e-12):
    scale = max(1.0, float(bnorm(a)), float(bnorm(b)))
    return float(bnorm(a - b)) <= rel * scale * 10


class TestAlgebra:
    @given(bicomplex, bicomplex)
    def test_commutative(self, a, b):
        assert close(a * b, b * a)

    @given(bicomplex, bicomplex, bicomplex)
    @settings(max_examples=200)
    def test_associative(self, a, b, c):
        lhs, rhs = (a * b) * c, a * (b * c)
        scale = float(bnorm(a) * bnorm(b) * bnorm(c)) * 2 + 1
        assert float(bnorm(lhs - rhs)) <= 1e-12 * scale

    @given(bicomplex, bicomplex, bicomplex)
    def test_distributive(self, a, b, c):
        scale = float(bnorm(a) * (bnorm(b) + bnorm(c))) * 2 + 1
        assert float(bnorm(a * (b + c) - (a * b + a * c))) <= 1e-12 * scale

    def test_j_squared(self):
        assert close(J * J, -ONE)

    def test_idempotents_exact(self):
        pp = P_PLUS * P_MINUS
        assert pp.sc == 0 and pp.vec == 0
        sq = P_PLUS * P_PLUS
        assert sq.sc == P_PLUS.sc and sq.vec == P_PLUS.vec
        sq = P_MINUS * P_MINUS
        assert sq.sc == P_MINUS.sc and sq.vec == P_MINUS.vec
        s = P_PLUS + P_MINUS
        assert s.sc == 1 and s.vec == 0

    @given(bicomplex)
    def test_idempotent_round_trip(self, w):
        assert close(from_idempotent(to_idempotent(w)), w, rel=1e-15)

    @given(bicomplex, bicomplex)
    def test_product_is_componentwise(self, a, b):
        p = mul(a, b)
        scale = float(bnorm(a) * bnorm(b)) * 4 + 1
        assert abs(p.plus - a.plus * b.plus) <= 1e-12 * scale
        assert abs(p.minus - a.minus * b.minus) <= 1e-12 * scale

    def test_known_idempotent_value(self):
        w = Bicomplex(1, 1j)
        assert w.idempotent.plus == 2 and w.idempotent.minus == 0


class TestNormAndConj:
    @given(bicomplex)
    def test_norm_matches_cartesian(self, w):
        ref = np.sqrt(abs(w.sc) ** 2 + abs(w.vec) ** 2)
        assert abs(float(bnorm(w)) - ref) <= 1e-12 * max(1.0, ref)

    @given(bicomplex)
    def test_conj_involution(self, w):
        assert close(bconj(bconj(w)), w, rel=0)

    def test_conj_of_j(self):
        assert close(bconj(J), -J)

    def test_bicomplexify(self):
        b = bicomplexify(3 + 4j)
        assert b.sc == 3 and b.vec == 4
        arr = bicomplexify(np.array([1j, 2.0]))
        assert np.allclose(arr.sc, [0, 2]) and np.allclose(arr.vec, [1, 0])

    def test_zero_divisors(self):
        assert is_zero_divisor(P_PLUS)
        assert is_zero_divisor(Bicomplex(1, 1j))
        assert not is_zero_divisor(ONE)
        assert not is_zero_divisor(ZERO)
        with pytest.raises(ValueError):
            is_zero_divisor(Bicomplex(np.ones(2), np.zeros(2)))

    def test_division_by_bicomplex_rejected(self):
        with pytest.raises(TypeError):
            ONE / J

    def test_array_ops_and_indexing(self):
        a = Bicomplex(np.arange(3.0), np.ones(3))
        b = a * 2.0 + ONE
        assert b.shape == (3,)
        assert close(b[1], Bicomplex(3.0, 2.0))
