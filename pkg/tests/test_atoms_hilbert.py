import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bchardy.atoms import (
    AtomicDecomposition,
    BCAtomicBoundary,
    PAtom,
    atomic_norm_upper,
    bc_atomic_norm,
    dump_decomposition_json,
    load_decomposition_json,
    moment_orders,
    quasi_norm_b,
    random_atom,
    synthesize_boundary,
    validate_atom,
)
from bchardy.bicomplex import Bicomplex, bnorm
from bchardy.boundary import BoundaryDistribution
from bchardy.hilbert import (
    hilbert,
    hilbert_atomic,
    hilbert_bc,
    hilbert_continuity_check,
    hilbert_fft,
    hilbert_pv,
    lp_norm_circle,
    random_bc_corpus,
    write_ratio_csv,
)

TWO_PI = 2 * np.pi


def half_circle_atom():
    return PAtom(1.0, 0.0, TWO_PI, np.array([1.0, -1.0]) / TWO_PI)


def quarter_atom():
    return PAtom(1.0, 0.0, np.pi, np.array([1.0, -1.0]) / np.pi)


class TestAtoms:
    def test_moment_orders(self):
        assert list(moment_orders(1.0)) == [0]
        assert list(moment_orders(0.5)) == [0, 1]
        assert list(moment_orders(1 / 3)) == [0, 1, 2]

    def test_hand_atoms_valid(self):
        assert validate_atom(half_circle_atom())
        assert validate_atom(quarter_atom())

    def test_constant_rejected(self):
        v = validate_atom(PAtom(1.0, 0.0, TWO_PI, [1 / TWO_PI]))
        assert not v and any("moment" in s for s in v.violations)

    def test_size_violation(self):
        v = validate_atom(PAtom(1.0, 0.0, 1.0, [2.0, -2.0]))
        assert not v and any("size" in s for s in v.violations)

    def test_arc_violation(self):
        assert not validate_atom(PAtom(1.0, 6.0, 1.0, [0.5, -0.5]))

    @pytest.mark.parametrize("p", [1.0, 0.5, 1 / 3, 0.25])
    def test_generator(self, p):
        rng = np.random.default_rng(7)
        for _ in range(25):
            assert validate_atom(random_atom(rng, p))

    @given(st.integers(min_value=0, max_value=2**32 - 1))
    @settings(max_examples=30, deadline=None)
    def test_generator_any_seed(self, seed):
        a = random_atom(np.random.default_rng(seed), 0.5)
        v = validate_atom(a)
        assert v and v.sup <= v.bound * (1 + 1e-12)

    def test_generator_rejects_bad_p(self):
        with pytest.raises(ValueError):
            random_atom(np.random.default_rng(0), 1.5)

    def test_atom_evaluation_and_fourier(self):
        a = quarter_atom()
        assert a(0.1) == 1 / np.pi and a(2.0) == -1 / np.pi and a(4.0) == 0
        t = np.linspace(0, TWO_PI, 200001)
        num = np.trapezoid(a(t) * np.exp(-3j * t), t)
        assert abs(num - a.integral_against(3)) < 1e-4


class TestNorms:
    def test_single_atom(self):
        d = AtomicDecomposition([1.0], [half_circle_atom()], 1.0)
        assert atomic_norm_upper(d) == 1.0

    def test_geometric(self):
        d = AtomicDecomposition([2.0**-n for n in range(1, 60)], [half_circle_atom()] * 59, 1.0)
        assert abs(atomic_norm_upper(d) - 1.0) < 1e-15

    def test_p_half(self):
        a = PAtom(0.5, 0.0, TWO_PI, np.zeros(4))
        d = AtomicDecomposition([1.0, 0.25], [a, a], 0.5)
        assert abs(atomic_norm_upper(d) - 2.25) < 1e-14

    def test_bc_norm_and_conjugation(self):
        d = AtomicDecomposition([1j], [half_circle_atom()], 1.0)
        b = BCAtomicBoundary(d, AtomicDecomposition([1.0], [quarter_atom()], 1.0))
        assert bc_atomic_norm(b) == 2.0
        assert bc_atomic_norm(BCAtomicBoundary(d.conj(), b.minus)) == 2.0
        assert bc_atomic_norm(BCAtomicBoundary(AtomicDecomposition.empty(), b.minus)) == 1.0

    def test_mismatched_p(self):
        with pytest.raises(ValueError):
            AtomicDecomposition([1.0], [PAtom(0.5, 0, 1, [0.0])], 1.0)

    def test_quasi_norm(self):
        c = 0.5
        tail = BoundaryDistribution.constant(Bicomplex(c, 0.0))
        b = BCAtomicBoundary(AtomicDecomposition.empty(), AtomicDecomposition.empty(), tail, q=1.5)
        gamma = 2.0
        assert abs(quasi_norm_b(b, gamma) - TWO_PI ** (1 / gamma) * c) < 1e-12
        with pytest.raises(ValueError):
            quasi_norm_b(b, 3.5)
        with pytest.raises(ValueError):
            bc_atomic_norm(b)

    def test_quasi_norm_tb_one_tail(self):
        tail = BoundaryDistribution.bicomplex(
            BoundaryDistribution.from_density(lambda t: np.exp(1j * t)),
            BoundaryDistribution.from_density(lambda t: np.exp(-1j * t)))
        b = BCAtomicBoundary(AtomicDecomposition.empty(), AtomicDecomposition.empty(), tail, q=3.0)
        assert abs(quasi_norm_b(b, 1.5) - TWO_PI ** (1 / 1.5)) < 1e-12

    def test_synthesis(self):
        d = AtomicDecomposition([1j], [quarter_atom()], 1.0)
        b = BCAtomicBoundary(d, d)
        s = synthesize_boundary(b)
        v = s.values(np.array([0.5]))
        assert np.isclose(v.plus[0], -1j / np.pi) and np.isclose(v.minus[0], 1j / np.pi)
        z = synthesize_boundary(BCAtomicBoundary(AtomicDecomposition.empty(), AtomicDecomposition.empty()))
        assert float(bnorm(z.values(1.0))) == 0.0

    def test_json_round_trip(self, tmp_path):
        d = AtomicDecomposition([1 + 2j, 0.5], [half_circle_atom(), quarter_atom()], 1.0)
        path = tmp_path / "d.json"
        path.write_text(json.dumps(dump_decomposition_json(d)))
        back = load_decomposition_json(str(path))
        assert back.coefficients == d.coefficients
        assert np.allclose(back(np.linspace(0, 6, 50)), d(np.linspace(0, 6, 50)))
        with pytest.raises(ValueError):
            load_decomposition_json({"p": 1, "arcs": [], "profiles": [], "extra": 1})


def trig_poly(rng, degree):
    return BoundaryDistribution.trig({n: complex(*rng.standard_normal(2)) for n in range(-degree, degree + 1)})


class TestHilbert:
    def test_constant(self):
        u = BoundaryDistribution.constant(1.0)
        assert abs(hilbert_pv(u, 0.7).value) < 1e-10
        assert np.max(np.abs(hilbert_fft(np.ones(64)))) < 1e-15

    def test_cos_to_sin(self):
        u = BoundaryDistribution.trig({5: 0.5, -5: 0.5})
        assert abs(hilbert_pv(u, 0.3).value - np.sin(1.5)) < 1e-6
        h = hilbert(u)
        assert np.isclose(h.values(0.3), np.sin(1.5))

    def test_fft_real_in_real_out(self):
        th = TWO_PI * np.arange(64) / 64
        out = hilbert_fft(np.cos(3 * th))
        assert out.dtype == float and np.allclose(out, np.sin(3 * th))

    def test_pv_matches_fft(self):
        rng = np.random.default_rng(3)
        u = trig_poly(rng, 64)
        m = 1024
        th = TWO_PI * np.arange(m) / m
        hf = hilbert_fft(u.values(th))
        for i in (0, 101, 517):
            assert abs(hilbert_pv(u, th[i]).value - hf[i]) < 1e-6

    def test_atomic_closed_form_matches_pv(self):
        d = AtomicDecomposition([1.0], [quarter_atom()], 1.0)
        dist = d.to_distribution()
        h = hilbert_atomic(d)
        for t in (0.5, 2.5, 4.0):
            assert abs(h(t) - hilbert_pv(dist, t).value) < 1e-8

    def test_parseval(self):
        rng = np.random.default_rng(5)
        m = 512
        th = TWO_PI * np.arange(m) / m
        for _ in range(50):
            v = trig_poly(rng, 40).values(th)
            assert np.linalg.norm(hilbert_fft(v)) <= np.linalg.norm(v) * (1 + 1e-10)

    def test_bicomplex(self):
        th = TWO_PI * np.arange(32) / 32
        b = Bicomplex.from_pair(np.cos(th), np.cos(2 * th))
        h = hilbert_bc(b)
        assert np.allclose(h.plus, np.sin(th)) and np.allclose(h.minus, np.sin(2 * th))
        with pytest.raises(TypeError):
            hilbert_bc(BoundaryDistribution.constant(1.0))

    def test_lp_norm_graded(self):
        d = AtomicDecomposition([1.0], [quarter_atom()], 1.0)
        hd = BoundaryDistribution.from_density(hilbert_atomic(d), d.breakpoints)
        v1 = lp_norm_circle(hd, 1.0)
        assert np.isfinite(v1) and v1 > 0


class TestContinuity:
    def test_seeded_corpus_deterministic(self):
        a = hilbert_continuity_check(random_bc_corpus(11, n=10), 1.0)
        b = hilbert_continuity_check(random_bc_corpus(11, n=10), 1.0)
        assert a.max_ratio == b.max_ratio and np.isfinite(a.max_ratio)

    def test_needs_gamma_for_tail(self):
        tail = BoundaryDistribution.constant(Bicomplex(1.0, 0.0))
        b = BCAtomicBoundary(AtomicDecomposition.empty(), AtomicDecomposition.empty(), tail, q=1.5)
        with pytest.raises(ValueError):
            hilbert_continuity_check([b], 1.0)
        t = hilbert_continuity_check([b], 1.0, gamma=2.0)
        assert t.rows[0]["norm"] == "quasi" and t.rows[0]["ratio"] < 1e-6

    def test_bad_p(self):
        with pytest.raises(ValueError):
            hilbert_continuity_check([], 2.0)

    def test_csv(self, tmp_path):
        t = hilbert_continuity_check(random_bc_corpus(0, n=3, p=0.5), 0.5)
        write_ratio_csv(t, tmp_path / "r.csv")
        lines = (tmp_path / "r.csv").read_text().splitlines()
        assert lines[0] == "index,numerator,denominator,ratio,norm" and len(lines) == 4
