"""Acceptance suite: every criterion at its stated tolerance, one line each.

Run with `pytest -s tests/test_acceptance.py` to see the PASS/FAIL lines.
Criterion 1 includes two published dimension estimates that disagree with
both of this package's independent solvers; those rows fail honestly rather
than at a loosened tolerance (see the repository notes).
"""

import math
import os
import random
import time
import warnings
from fractions import Fraction

import numpy as np
import pytest

from oracles import (brute_averaged_Cq, dft_power_integral, literal_ramanujan,
                     quadrature_main_term, unpruned_ball)
from zaremba.arith import averaged_Cq, prime_powers_up_to, ramanujan_sum
from zaremba.cf_core import Alphabet, canonicalize, complement_expansion, expand
from zaremba.circle import MajorArcConfig, decompose, frequencies, main_term
from zaremba.construction import admissible_M_range, build_schedule, locate_index
from zaremba.dimension import dimension
from zaremba.modular import closure_mod_q, find_bad_modulus
from zaremba.orbit import (DET_ALL, DET_PLUS_ONE, denominators, enumerate_ball,
                           growth_exponent_fit, orbit_decomposition_check)
from zaremba.primroot import search_height_bounded


def report(number: int, name: str, failures: list) -> None:
    status = "PASS" if not failures else "FAIL"
    print(f"\nACCEPTANCE {number} [{name}]: {status}")
    for f in failures:
        print(f"    - {f}")
    if failures:
        pytest.fail(f"criterion {number} ({name}): " + "; ".join(str(f) for f in failures))


TABLE_1 = [
    ((1, 9, 17, 25, 33, 41), 0.472),
    (tuple(range(1, 130, 8)), 0.55),
    (tuple(range(1, 202, 8)), 0.56),
    (tuple(range(2, 21, 2)), 0.59),
    (tuple(range(2, 201, 2)), 0.68),
    (tuple(range(2, 301, 2)), 0.69),
    (tuple(range(2, 803, 2)), 0.70),
]


def test_criterion_1_dimension_reproduction():
    failures = []
    t0 = time.time()

    d15 = dimension(Alphabet.of(1, 2, 3, 4, 5)).delta
    if abs(d15 - 0.8368) > 5e-4:
        failures.append(f"dimension({{1..5}}) = {d15:.6f}, want 0.8368 +- 5e-4")
    d12 = dimension(Alphabet.of(1, 2)).delta
    if abs(d12 - 0.531) > 1e-3:
        failures.append(f"dimension({{1,2}}) = {d12:.6f}, want 0.531 +- 1e-3")

    for members, published in TABLE_1:
        delta = dimension(Alphabet(members)).delta
        tag = f"{{{members[0]},..,{members[-1]}}} ({len(members)} members)"
        print(f"    table row {tag}: computed {delta:.4f}, published ~{published}")
        if abs(delta - published) > 0.01:
            failures.append(
                f"table row {tag}: computed {delta:.4f} vs published {published} "
                f"(off by {abs(delta - published):.4f} > 0.01)")

    d50 = dimension(Alphabet(tuple(range(1, 51)))).delta
    if not d50 > 0.984:
        failures.append(f"dimension({{1..50}}) = {d50:.6f}, want > 0.984")

    elapsed = time.time() - t0
    print(f"    dimension suite runtime {elapsed:.1f}s (budget 120s)")
    if elapsed >= 120:
        failures.append(f"runtime {elapsed:.1f}s over the 120s budget")
    report(1, "dimension reproduction", failures)


def test_criterion_2_closed_form_arithmetic():
    failures = []
    for members in ((1, 2, 3, 4, 5), (1, 9, 17)):
        alphabet = Alphabet(members)
        for q in prime_powers_up_to(49):
            table = closure_mod_q(alphabet, q, DET_PLUS_ONE)
            for n in range(1, 51):
                ours, brute = averaged_Cq(q, n, table), brute_averaged_Cq(q, n, table)
                if ours != brute:
                    failures.append(f"C_{q}({n}) on {alphabet}: {ours} != brute {brute}")
    bad = 0
    for q in range(1, 201):
        for m in range(-200, 201):
            if abs(literal_ramanujan(q, m) - ramanujan_sum(q, m)) >= 1e-6:
                bad += 1
    if bad:
        failures.append(f"{bad} Ramanujan sums off the complex oracle by >= 1e-6")
    report(2, "closed-form arithmetic", failures)


def test_criterion_3_obstruction_facts():
    failures = []
    odd = closure_mod_q(Alphabet.of(1, 3, 5), 2, DET_PLUS_ONE)
    if odd.size != 3 or odd.is_full_sl2:
        failures.append(f"odd truncation mod 2: size {odd.size}, want 3 and not full")
    if closure_mod_q(Alphabet.of(1, 3, 5), 2, DET_ALL).d_residues != {0, 1}:
        failures.append("odd truncation should still reach both residues mod 2")

    oct_res = closure_mod_q(Alphabet.of(1, 9, 17), 8, DET_ALL).d_residues
    if 4 in oct_res or oct_res != {0, 1, 2, 3, 5, 7}:
        failures.append(f"oct truncation mod 8 residues {sorted(oct_res)}")

    for m in (1, 3, 6):
        alphabet = Alphabet.of(m, m + 1)
        for q in range(2, 31):
            table = closure_mod_q(alphabet, q, DET_PLUS_ONE)
            if not table.is_full_sl2:
                failures.append(f"{{{m},{m + 1}}} not full SL2 mod {q}")

    rng = random.Random(41)
    for _ in range(20):
        members = tuple(sorted(rng.sample(range(1, 61), rng.randint(2, 8))))
        alphabet = Alphabet(members)
        expected = math.gcd(*(y - x for x in members for y in members if y > x))
        got = find_bad_modulus(alphabet, 4).k_star
        if got != expected:
            failures.append(f"k* of {members}: {got} != gcd construction {expected}")
    report(3, "obstruction facts", failures)


def test_criterion_4_circle_method(gamma_ball_2000, a15):
    failures = []
    config = MajorArcConfig(2000, 6, a15)
    result = decompose(gamma_ball_2000, (2000 // 40, 2000 // 25), config)
    if not np.array_equal(result.R - result.M, result.E):
        failures.append("R = M + E fails to hold identically")

    index = denominators(gamma_ball_2000)
    lhs = float(sum(c * c for c in index.counts.values()))
    rhs = dft_power_integral(frequencies(gamma_ball_2000))
    if abs(lhs - rhs) > 1e-6 * lhs:
        failures.append(f"Parseval: sum R^2 = {lhs} vs integral {rhs}")

    # {1..5} has k* = 1, so every integer is admissible
    missing = [d for d, r in zip(result.ds, result.R) if r == 0]
    if missing:
        failures.append(f"R(d) = 0 for admissible d in {missing}")

    rng = random.Random(4)
    pool = {(tuple(a15.members), 150): enumerate_ball(a15, 150, DET_PLUS_ONE),
            ((1, 2), 500): enumerate_ball(Alphabet.of(1, 2), 500, DET_PLUS_ONE),
            ((1, 2, 3), 300): enumerate_ball(Alphabet.of(1, 2, 3), 300, DET_PLUS_ONE)}
    worst = 0.0
    for _ in range(50):
        (members, N), ball = list(pool.items())[rng.randrange(3)]
        Q = rng.randint(2, 8)
        d = rng.randint(max(2, N // 40), N // 8)
        cfg = MajorArcConfig(N, Q, Alphabet(members))
        closed = main_term(ball, d, cfg)
        quadrature = quadrature_main_term(frequencies(ball), d, N, Q)
        err = abs(closed - quadrature) / max(abs(quadrature), 1e-12)
        worst = max(worst, err)
        if err > 1e-6 and abs(closed - quadrature) > 1e-9:
            failures.append(f"main term at (N={N}, Q={Q}, d={d}): "
                            f"closed {closed} vs quadrature {quadrature}")
    print(f"    worst main-term relative error vs quadrature: {worst:.2e}")

    norms = []
    for N in (500, 1000, 2000):
        ball = (gamma_ball_2000 if N == 2000
                else enumerate_ball(a15, N, DET_PLUS_ONE))
        res = decompose(ball, (N // 40, N // 25), MajorArcConfig(N, 6, a15))
        norms.append(res.normalized_l2)
    print(f"    normalized L2 error over N in (500, 1000, 2000): "
          f"{[f'{v:.3e}' for v in norms]}")
    if not all(b <= a * 1.05 for a, b in zip(norms, norms[1:])):
        failures.append(f"normalized L2 trend not non-increasing: {norms}")
    report(4, "circle-method consistency", failures)


def test_criterion_5_enumeration_integrity(a15, a12):
    failures = []
    for alphabet, N in ((a12, 100), (Alphabet.of(1, 2, 3), 60)):
        ball = enumerate_ball(alphabet, N)
        if {tuple(r) for r in ball.matrices.tolist()} != unpruned_ball(alphabet, N):
            failures.append(f"pruned ball differs from oracle at {alphabet}, N={N}")

    gamma = enumerate_ball(a15, 10**4, DET_PLUS_ONE)
    n = len(gamma)
    print(f"    invariant check on {n} det +1 elements")
    if n < 10**6:
        failures.append(f"only {n} elements enumerated, want >= 1e6")
    a, b, c, d = (gamma.matrices[:, i] for i in range(4))
    tr, nsq = a + d, a * a + b * b + c * c + d * d
    checks = {
        "entry ordering": (1 <= a.min()) and np.all(a <= np.minimum(b, c))
                          and np.all(np.maximum(b, c) < d),
        "norm <= 2 trace": np.all(nsq <= 4 * tr * tr),
        "2 trace <= 2 sqrt2 norm": np.all(tr * tr <= 2 * nsq),
        "d < column norm": np.all(b > 0),
        "norm < sqrt2 column": np.all(nsq < 2 * (b * b + d * d)),
        "sqrt2 column < 2d": np.all(b < d),
    }
    for name, ok in checks.items():
        if not ok:
            failures.append(f"invariant {name} violated")

    for alphabet, expected_members in ((a12, (1, 2)), (a15, (1, 2, 3, 4, 5))):
        delta = dimension(alphabet).delta
        slope, counts = growth_exponent_fit(alphabet, [2**k for k in range(8, 15)])
        print(f"    growth fit {alphabet}: slope {slope:.4f} vs 2 delta {2 * delta:.4f}")
        if abs(slope - 2 * delta) > 0.1:
            failures.append(f"growth fit {alphabet}: slope {slope:.4f} "
                            f"vs 2 delta {2 * delta:.4f}")

    for alphabet in (a12, Alphabet.of(3)):
        if not orbit_decomposition_check(alphabet, 400).equal:
            failures.append(f"orbit decomposition fails for {alphabet} at N=400")
    report(5, "enumeration integrity", failures)


def test_criterion_6_schedule_identities():
    failures = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        schedules = [build_schedule(1e12, Fraction(1, 2), 0.0),
                     build_schedule(1e10, Fraction(3, 10), 0.0),
                     build_schedule(1e12, Fraction(1, 10), 8.0)]
    exact_names = ["e0 == 1/2", "e_-J1 == 1/4", "e_J1 == 3/4",
                   "paired exponents sum to 1", "strictly increasing",
                   "ratio branch formulas", "N_m >= N_{m+1}^(1-r)"]
    for s in schedules:
        checks = s.check_identities()
        for name in exact_names:
            if not checks[name]:
                failures.append(f"(N={s.N:g}, r={s.r}) identity failed: {name}")

    rng = random.Random(6)
    s = schedules[1]
    lo, hi = admissible_M_range(s)
    for _ in range(1000):
        M = math.exp(rng.uniform(math.log(lo), math.log(hi * 0.999)))
        located = locate_index(s, M)
        if not located.all_hold:
            bad = [k for k, v in located.inequalities.items() if not v]
            failures.append(f"locate_index({M:.4g}) violated {bad}")
    report(6, "schedule identities", failures)


def test_criterion_7_appendix_a():
    failures = []
    for den in range(2, 501):
        for num in range(1, den):
            if math.gcd(num, den) != 1:
                continue
            w = expand(num, den)
            if canonicalize(complement_expansion(w)) != expand(den - num, den):
                failures.append(f"complement rule fails at {num}/{den}")

    records = search_height_bounded(10**4, 7, residue_3_mod_4=True)
    misses = [r.p for r in records if not r.found]
    print(f"    {len(records)} primes = 3 (mod 4) up to 1e4 scanned; "
          f"{len(records) - len(misses)} have a primitive root of height <= 7")
    if misses:
        # the height-7 statement is asymptotic: counterexamples are reported,
        # not failed
        print(f"    REPORT: no bounded-height primitive root for p in {misses}")
    if len(records) != 619:
        failures.append(f"scanned {len(records)} primes, expected 619")
    report(7, "appendix A exhaustive checks", failures)


def test_criterion_8_performance_gate(a15):
    failures = []
    t0 = time.perf_counter()
    ball = enumerate_ball(a15, 10**4, threads=1)
    t1 = time.perf_counter() - t0
    print(f"    single-threaded enumerate_ball({{1..5}}, 1e4): {t1:.2f}s "
          f"({len(ball)} elements; budget 30s)")
    if t1 >= 30:
        failures.append(f"single-threaded enumeration took {t1:.2f}s >= 30s")

    cpus = os.cpu_count() or 1
    t0 = time.perf_counter()
    enumerate_ball(a15, 10**4, threads=4)
    t4 = time.perf_counter() - t0
    print(f"    4-thread enumeration: {t4:.2f}s, speedup {t1 / t4:.2f}x "
          f"on {cpus} available cores")
    report(8, "performance gate", failures)
    if cpus < 4:
        pytest.skip(f"thread-scaling clause needs >= 4 cores, host has {cpus}; "
                    f"measured {t1 / t4:.2f}x with 4 workers")
    if t1 / t4 < 3:
        pytest.fail(f"4-thread speedup {t1 / t4:.2f}x < 3x")
