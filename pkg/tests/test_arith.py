from fractions import Fraction

import pytest

from oracles import brute_averaged_Cq, literal_ramanujan
from zaremba.arith import (averaged_Cq, averaged_Cq_closed_form, divisor_sum,
                           euler_phi, factorize, mobius, prime_powers_up_to,
                           ramanujan_sum, robin_bound_check, series_tail_bound,
                           sieve_primes, singular_series)
from zaremba.errors import DomainError
from zaremba.modular import closure_mod_q


class TestBasics:
    def test_sieve(self):
        assert sieve_primes(30) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]

    def test_factorize(self):
        assert factorize(360) == {2: 3, 3: 2, 5: 1}
        assert factorize(1) == {}

    def test_mobius_phi_sigma(self):
        assert [mobius(n) for n in (1, 2, 4, 6, 30)] == [1, -1, 0, 1, -1]
        assert euler_phi(12) == 4
        assert divisor_sum(12) == 28

    def test_prime_powers(self):
        assert prime_powers_up_to(16) == [2, 3, 4, 5, 7, 8, 9, 11, 13, 16]


class TestRamanujanSum:
    def test_at_zero_is_phi(self):
        assert ramanujan_sum(3, 0) == 2
        for q in (1, 2, 6, 12, 30):
            assert ramanujan_sum(q, 0) == euler_phi(q)

    def test_coprime_case_is_mobius(self):
        assert ramanujan_sum(6, 1) == 1
        for q in range(1, 40):
            assert ramanujan_sum(q, 1) == mobius(q)

    def test_example(self):
        assert ramanujan_sum(4, 2) == -2

    def test_against_complex_oracle(self):
        for q in range(1, 51):
            for m in range(-50, 51):
                lit = literal_ramanujan(q, m)
                assert abs(lit - ramanujan_sum(q, m)) < 1e-6, (q, m)


class TestAveragedCq:
    def test_full_sl2_examples(self, a15):
        t5 = closure_mod_q(a15, 5, "plus-one-only")
        assert averaged_Cq(5, 3, t5) == Fraction(1, 24)
        assert averaged_Cq(5, 5, t5) == Fraction(-1, 6)
        t25 = closure_mod_q(a15, 25, "plus-one-only")
        for n in (1, 5, 7, 25):
            assert averaged_Cq(25, n, t25) == 0

    def test_closed_form_matches_table_when_full(self, a15):
        for q in (2, 3, 4, 5, 7, 8, 9, 16, 27):
            table = closure_mod_q(a15, q, "plus-one-only")
            assert table.is_full_sl2
            for n in range(1, 21):
                assert averaged_Cq(q, n, table) == averaged_Cq_closed_form(q, n)

    def test_obstructed_matches_brute_average(self, oct3):
        for q in (2, 4, 8, 16, 3, 9, 5):
            table = closure_mod_q(oct3, q, "plus-one-only")
            for n in range(1, 21):
                assert averaged_Cq(q, n, table) == brute_averaged_Cq(q, n, table)

    def test_rejects_composite_modulus(self, a15):
        with pytest.raises(DomainError):
            averaged_Cq(6, 1, closure_mod_q(a15, 6, "plus-one-only"))

    def test_multiplicative_over_coprime_parts(self, a15, oct3):
        # average over the composite closure = product of prime-power averages
        qs = [(3, 8), (5, 8), (3, 16)]
        for alphabet in (a15, oct3):
            for q1, q2 in qs:
                composite = closure_mod_q(alphabet, q1 * q2, "plus-one-only")
                lhs = brute_averaged_Cq(q1 * q2, 7, composite)
                rhs = (averaged_Cq(q1, 7, closure_mod_q(alphabet, q1, "plus-one-only"))
                       * averaged_Cq(q2, 7, closure_mod_q(alphabet, q2, "plus-one-only")))
                assert lhs == rhs, (alphabet, q1, q2)


class TestSingularSeries:
    def test_euler_at_one_monotone_bounded(self, a15):
        values = [singular_series(1, a15, "euler", P).value for P in (10, 100, 1000)]
        assert values[0] < values[1] < values[2] < 2.0
        expected = 1.0
        for p in sieve_primes(1000):
            expected *= 1 + 1 / (p * p - 1)
        assert values[-1] == pytest.approx(expected, rel=1e-12)

    def test_divisor_prime_factors(self, a15):
        value = singular_series(210, a15, "euler", 50)
        for p in (2, 3, 5, 7):
            assert value.terms[p] == 1 - Fraction(1, p + 1)

    def test_truncated_vs_euler_within_tail(self, a15):
        for n in (1, 17, 60, 97, 100):
            trunc = singular_series(n, a15, "truncated", 50)
            euler = singular_series(n, a15, "euler", 47)
            tail = series_tail_bound(n, a15, 50, 47)
            assert abs(trunc.exact - euler.exact) <= tail, n

    def test_obstruction_nullifies_factor(self, oct3):
        # n = 4 mod 8: the p = 2 Euler factor vanishes for the oct truncation
        value = singular_series(12, oct3, "euler", 10)
        assert value.terms[2] == 0
        assert value.value == 0.0

    def test_positive_for_admissible_targets(self, a15, oct3):
        for n in (1, 7, 50, 99):
            assert singular_series(n, a15, "euler", 50).value > 0
        # the det +1 tower stabilizes mod 16; targets must hit its d-residues
        gamma_residues = closure_mod_q(oct3, 16, "plus-one-only").d_residues
        targets = [n for n in range(1, 40) if n % 16 in gamma_residues]
        assert targets
        for n in targets:
            assert singular_series(n, oct3, "euler", 20).value > 0, n

    def test_truncated_equals_brute_sum_of_Cq(self, oct3):
        # independent assembly: per-q value from the composite closure itself
        trunc = singular_series(20, oct3, "truncated", 25)
        total = Fraction(1)
        for q in range(2, 25):
            total += brute_averaged_Cq(q, 20, closure_mod_q(oct3, q, "plus-one-only"))
        assert trunc.exact == total


class TestRobinBound:
    def test_twelve(self):
        rb = robin_bound_check(12)
        assert rb.prime_product == 2
        assert rb.sigma_ratio == Fraction(28, 12)
        assert rb.holds

    def test_prime_equality_case(self):
        for p in (3, 7, 31):
            rb = robin_bound_check(p)
            assert rb.prime_product == rb.sigma_ratio == Fraction(p + 1, p)

    def test_primorial_ratio_bounded(self):
        n = 2 * 3 * 5 * 7 * 11 * 13 * 17 * 19 * 23
        ratios = [robin_bound_check(m).loglog_ratio for m in (12, 360, n)]
        print(f"prime-product to log log ratios: {[f'{r:.3f}' for r in ratios]}")
        assert all(r < 5 for r in ratios)
        assert robin_bound_check(n).holds

    def test_rejects_small(self):
        with pytest.raises(DomainError):
            robin_bound_check(2)
