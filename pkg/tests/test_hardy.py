import json
import math

import numpy as np
import pytest

from bchardy.functions import BicomplexFunction, Conjugate, Generic, Polynomial, make_test_function, zhat, zstarhat
from bchardy.hardy import (
    CLASS_NAMES,
    bc_hp_norm,
    circle_integral,
    classify,
    disk_lp_norm,
    growth_exponent,
    hp_norm,
)
from bchardy.integral_ops import T_function


class TestCircleIntegral:
    def test_trig(self):
        v, n = circle_integral(lambda z: np.abs(z) ** 2, 0.5)
        assert abs(v - 2 * np.pi * 0.25) < 1e-12 and n >= 64

    def test_near_singular_refines(self):
        v, n = circle_integral(lambda z: np.abs(1 - z) ** -0.5, 0.99)
        # a near-singular integrand forces refinement beyond the minimum
        assert n > 64 and 6.5 < v < 10


class TestNorms:
    def test_monomial_h2(self):
        est = hp_norm(make_test_function("monomial", 3), 2.0)
        assert est.status == "finite"
        # int |z|^6 at r = 0.995 is 2 pi r^6
        assert abs(est.integrals[-1][1] - 2 * np.pi * 0.995**6) < 1e-9

    def test_pole_inside_range(self):
        est = hp_norm(make_test_function("pole", 0.5), 1.0)
        assert est.status == "finite" and est.settled

    def test_divergent(self):
        est = hp_norm(make_test_function("pole", 2.0), 2.0)
        assert est.status == "divergent"

    def test_serialises(self):
        d = hp_norm(make_test_function("monomial", 1), 2.0).to_dict()
        json.dumps(d)
        assert d["status"] == "finite"

    def test_bc_norm_uses_both_components(self):
        a = bc_hp_norm(zhat(), 2.0)
        assert a.status == "finite"
        # ||zhat||_B = |z| so the integral equals 2 pi r^2
        assert abs(a.integrals[-1][1] - 2 * np.pi * 0.995**2) < 1e-9

    def test_bad_p(self):
        with pytest.raises(ValueError):
            hp_norm(make_test_function("monomial", 1), 0.0)

    def test_disk_norm(self):
        v = disk_lp_norm(Polynomial({(0, 0): 1.0}), 2.0)
        assert abs(v - math.sqrt(math.pi)) < 1e-10


class TestGrowth:
    def test_simple_pole(self):
        assert abs(growth_exponent(make_test_function("pole", 1.0)) - 1.0) < 0.05

    def test_half_pole(self):
        assert abs(growth_exponent(make_test_function("pole", 0.5)) - 0.5) < 0.05

    @pytest.mark.parametrize("spec", [("exp",), ("monomial", 4), ("pole", 1.0, 2.0)])
    def test_bounded(self, spec):
        assert growth_exponent(make_test_function(*spec)) <= 0.05

    def test_zero(self):
        assert growth_exponent(Polynomial({})) == 0.0


class TestClassify:
    def test_unknown_class(self):
        with pytest.raises(KeyError):
            classify(make_test_function("exp"), "H^q")

    def test_holomorphic_pass(self):
        assert classify(make_test_function("monomial", 2), "H^p").verdict == "pass"

    def test_nonholomorphic_fail(self):
        r = classify(make_test_function("conj-monomial", 1), "H^p")
        assert r.verdict == "fail" and not r.passed

    def test_divergent_fail(self):
        assert classify(make_test_function("pole", 2.0), "H^p", p=2.0).verdict == "fail"

    def test_slow_divergence_is_not_settled(self):
        # the bounded-by-1e6 clause lets 1/(1-z) through in H^2; the scan
        # still reports that the circle integrals have not settled
        r = classify(make_test_function("pole", 1.0), "H^p", p=2.0)
        assert any("bounded, not settled" in n for n in r.notes)

    def test_hpf(self):
        one = Polynomial({(0, 0): 1.0})
        f = T_function(one) + make_test_function("monomial", 1)
        assert classify(f, "H^p_f", source=one).verdict == "pass"
        with pytest.raises(ValueError):
            classify(f, "H^p_f")

    def test_complex_class_rejects_bicomplex(self):
        with pytest.raises(TypeError):
            classify(zhat(), "H^p")

    def test_bicomplex_classes(self):
        assert classify(zhat(), "H^p(D,B)").verdict == "pass"
        assert classify(zstarhat(), "H^p(D,B)").verdict == "fail"
        w = BicomplexFunction.constant(1.0)
        assert classify(zstarhat(), "H^p_w(D,B)", source=w).verdict == "pass"

    def test_higher_order_class(self):
        f = zhat()
        zero = BicomplexFunction.constant(0.0)
        assert classify(f, "H^{n,p}_w(D,B)", source=zero, n=2).verdict == "pass"
        with pytest.raises(ValueError):
            classify(f, "H^{n,p}_w(D,B)", n=2)

    def test_report_json(self):
        r = classify(make_test_function("monomial", 1), "H^p")
        d = json.loads(r.to_json())
        assert d["class"] == "H^p" and d["verdict"] == "pass"

    def test_bc_class_matches_components(self):
        plus = Conjugate(make_test_function("pole", 0.25))
        minus = make_test_function("exp")
        f = BicomplexFunction(plus, minus)
        v = classify(f, "H^p(D,B)").verdict
        a = classify(Conjugate(plus), "H^p").verdict
        b = classify(minus, "H^p").verdict
        assert v == "pass" and a == b == "pass"

    def test_class_names(self):
        assert len(CLASS_NAMES) == 5
