import math
import random

import numpy as np
import pytest
from scipy.integrate import quad

from oracles import (dft_power_integral, dft_representation_count,
                     quadrature_main_term)
from zaremba.cf_core import Alphabet
from zaremba.circle import (MajorArcConfig, arc_partition, decompose,
                            exponential_sum, frequencies, main_term,
                            mollifier_value, representation_counts, sinc_sq,
                            triangle_spike)
from zaremba.circle import test_functions as spike_pair
from zaremba.errors import DomainError
from zaremba.orbit import DET_PLUS_ONE, OrbitBall, enumerate_ball


class TestTestFunctions:
    def test_triangle_values(self):
        assert triangle_spike(0.0) == 1.0
        assert triangle_spike(1.0) == 0.0 == triangle_spike(-1.0)
        assert triangle_spike(0.25) == 0.75

    def test_sinc_sq_values(self):
        assert sinc_sq(0.0) == 1.0
        for k in (1, 2, 3, -1, -2):
            assert sinc_sq(k) == pytest.approx(0.0, abs=1e-30)

    def test_pair(self):
        psi, ups = spike_pair(0.5)
        assert psi == 0.5 and ups == pytest.approx((2 / math.pi) ** 2)

    def test_fourier_transform_identity(self):
        # integral of psi(x) e(-t x) dx equals sinc(t)^2, by quadrature
        for t in (0.1, 0.5, 2.3):
            real, _ = quad(lambda x: triangle_spike(x) * math.cos(2 * math.pi * t * x),
                           -1, 1, limit=200)
            assert abs(real - sinc_sq(t)) < 1e-8


class TestExponentialSum:
    def test_at_zero(self, gamma_ball_2000):
        assert exponential_sum(gamma_ball_2000, 0.0) == len(gamma_ball_2000)

    def test_at_half_is_signed_count(self, a12):
        ball = enumerate_ball(a12, 100, DET_PLUS_ONE)
        s = exponential_sum(ball, 0.5)
        parity_sum = int(((-1) ** (frequencies(ball) % 2)).sum())
        assert s.imag == pytest.approx(0.0, abs=1e-9)
        assert s.real == pytest.approx(parity_sum, abs=1e-9)

    def test_bounded_by_size(self, gamma_ball_2000):
        for theta in (0.1, 0.33, 0.71):
            assert abs(exponential_sum(gamma_ball_2000, theta)) <= len(gamma_ball_2000)


class TestRepresentationCounts:
    def test_partition_of_ball(self, gamma_ball_2000):
        index = representation_counts(gamma_ball_2000)
        assert index.total == len(gamma_ball_2000)

    def test_shift_equals_premultiplied_ball(self, a12):
        ball = enumerate_ball(a12, 150, DET_PLUS_ONE)
        a = 2
        shifted = representation_counts(ball, shift=a)
        # <gamma e2, gamma_a e2> = d-entry of gamma_a gamma
        g = ball.matrices
        pre_d = g[:, 1] + a * g[:, 3]
        brute = {}
        for d in pre_d.tolist():
            brute[d] = brute.get(d, 0) + 1
        assert shifted.counts == brute

    def test_matches_dft_oracle(self, a12):
        ball = enumerate_ball(a12, 100, DET_PLUS_ONE)
        freqs = frequencies(ball)
        index = representation_counts(ball)
        for d in list(index.keys_sorted())[:20] + [9999]:
            assert dft_representation_count(freqs, d) == index[d]

    def test_shifted_dft_oracle(self, a12):
        ball = enumerate_ball(a12, 100, DET_PLUS_ONE)
        freqs = frequencies(ball, shift=2)
        index = representation_counts(ball, shift=2)
        for d in list(index.keys_sorted())[:10]:
            assert dft_representation_count(freqs, d) == index[d]

    def test_empty_ball(self, a12):
        ball = enumerate_ball(a12, 1, DET_PLUS_ONE)
        assert representation_counts(ball).total == 0


class TestMollifier:
    def test_peak_support_and_positivity(self):
        N, Q = 500, 4
        vals = mollifier_value([0.0, 0.5, 1 / 3, 2 / 3], N, Q)
        assert np.allclose(vals, 1.0)  # peak exactly 1 at each a/q
        assert mollifier_value(0.1, N, Q)[0] == 0.0  # off the arcs
        theta = np.linspace(0, 1, 2001)
        assert (mollifier_value(theta, N, Q) >= 0).all()


class TestMainTerm:
    def test_level_one_is_zero(self, a12):
        ball = enumerate_ball(a12, 50, DET_PLUS_ONE)
        config = MajorArcConfig(50, 1, a12)
        assert main_term(ball, 7, config) == 0.0

    def test_single_element_hand_value(self, a12):
        # one element with m_gamma = d: M(d) = (2/N) sinc^2(0) c_1(0) = 2/N
        one = OrbitBall(a12, 50, DET_PLUS_ONE,
                        np.array([[1, 1, 1, 2]], dtype=np.int64),
                        np.array([2], dtype=np.int32))
        config = MajorArcConfig(50, 2, a12)
        assert main_term(one, 2, config) == pytest.approx(2 / 50, abs=1e-12)

    def test_closed_form_vs_quadrature(self, a12, a15):
        rng = random.Random(17)
        balls = {(tuple(a12.members), 300): enumerate_ball(a12, 300, DET_PLUS_ONE),
                 (tuple(a15.members), 200): enumerate_ball(a15, 200, DET_PLUS_ONE)}
        for _ in range(8):
            (members, N), ball = list(balls.items())[rng.randrange(2)]
            Q = rng.randint(2, 8)
            d = rng.randint(N // 40, N // 10)
            config = MajorArcConfig(N, Q, Alphabet(members))
            closed = main_term(ball, d, config)
            quadrature = quadrature_main_term(frequencies(ball), d, N, Q)
            assert closed == pytest.approx(quadrature, rel=1e-6, abs=1e-9)


class TestDecompose:
    def test_split_is_exact(self, gamma_ball_2000, a15):
        config = MajorArcConfig(2000, 6, a15)
        result = decompose(gamma_ball_2000, (50, 80), config)
        assert np.array_equal(result.R - result.M, result.E)
        assert result.l2_error == pytest.approx(float((result.E ** 2).sum()))

    def test_exceptional_fraction_small(self, gamma_ball_2000, a15):
        config = MajorArcConfig(2000, 6, a15)
        result = decompose(gamma_ball_2000, (50, 80), config)
        frac = len(result.exceptional) / len(result.ds)
        print(f"exceptional fraction {frac:.3f} over window {result.window}")
        assert frac <= 0.5

    def test_window_validation(self, gamma_ball_2000, a15):
        config = MajorArcConfig(2000, 6, a15)
        with pytest.raises(DomainError):
            decompose(gamma_ball_2000, (0, 50), config)
        with pytest.raises(DomainError):
            decompose(gamma_ball_2000, (50, 10**6), config)

    def test_parseval(self, a12):
        ball = enumerate_ball(a12, 300, DET_PLUS_ONE)
        index = representation_counts(ball)
        lhs = sum(c * c for c in index.counts.values())
        rhs = dft_power_integral(frequencies(ball))
        assert abs(lhs - rhs) <= 1e-6 * abs(lhs)


class TestArcPartition:
    def test_half_locates_q2(self):
        part = arc_partition(100)
        region, s, q, beta = part.locate(0.5)
        assert (s, q) == (1, 2) and beta == 0.0
        assert region.Q == 4  # dyadic block with Q/2 <= 2 < Q

    def test_cover_small_n(self):
        part = arc_partition(100)
        rng = np.random.default_rng(23)
        assert part.cover_fraction(rng.random(2000)) == 1.0

    def test_cover_with_annuli(self):
        part = arc_partition(10**6, c_tilde=2**10)
        assert any(r.branch == "annulus" for r in part.regions)
        rng = np.random.default_rng(29)
        assert part.cover_fraction(rng.random(2000)) == 1.0

    def test_measure_sum_at_least_one(self):
        for N, ct in ((100, 2**20), (10**6, 2**10)):
            assert arc_partition(N, c_tilde=ct).measure_sum() >= 1.0

    def test_rejects_tiny_n(self):
        with pytest.raises(DomainError):
            arc_partition(3)

    def test_annulus_T_parameter(self):
        part = arc_partition(10**6, c_tilde=2**10)
        for r in part.regions:
            if r.branch == "annulus":
                assert r.T_param == pytest.approx(r.K * r.Q**1.5)
