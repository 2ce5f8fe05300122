"""Exact arithmetic: Ramanujan sums, their group averages, and singular series.

Everything here returns integers or Fractions; floating point appears only
in convenience summaries.  Closure tables come from the modular module so
obstructed alphabets flow through the same code path as full ones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .cf_core import Alphabet
from .errors import DomainError, ResourceError


def sieve_primes(n: int) -> list[int]:
    """Primes <= n by a byte sieve."""
    if n < 2:
        return []
    sieve = bytearray(b"\x01") * (n + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            start = p * p
            sieve[start::p] = b"\x00" * ((n - start) // p + 1)
    return [i for i, v in enumerate(sieve) if v]


def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division; fine for the budgets used here."""
    if n < 1:
        raise DomainError(f"cannot factorize {n}")
    out: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    f = 5
    while f * f <= n:
        for p in (f, f + 2):
            while n % p == 0:
                out[p] = out.get(p, 0) + 1
                n //= p
        f += 6
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def mobius(n: int) -> int:
    fac = factorize(n)
    if any(e > 1 for e in fac.values()):
        return 0
    return -1 if len(fac) % 2 else 1


def euler_phi(n: int) -> int:
    out = n
    for p in factorize(n):
        out = out // p * (p - 1)
    return out


def prime_power_split(q: int) -> Optional[tuple[int, int]]:
    """(p, t) if q = p^t with t >= 1, else None."""
    fac = factorize(q)
    if len(fac) != 1:
        return None
    (p, t), = fac.items()
    return p, t


def prime_powers_up_to(n: int) -> list[int]:
    out = []
    for p in sieve_primes(n):
        q = p
        while q <= n:
            out.append(q)
            q *= p
    return sorted(out)


def divisor_sum(n: int) -> int:
    """sigma_1(n), multiplicatively."""
    out = 1
    for p, e in factorize(n).items():
        out *= (p ** (e + 1) - 1) // (p - 1)
    return out


_PHI_SUM_CACHE: dict[int, int] = {}


def phi_summatory(n: int) -> int:
    """Exact sum of phi(q) for 1 <= q <= n, by the divisor-grouped recursion
    Phi(n) = n(n+1)/2 - sum_{d >= 2} Phi(n // d); runs in about n^(2/3) time."""
    if n < 1:
        return 0
    if n in _PHI_SUM_CACHE:
        return _PHI_SUM_CACHE[n]
    total = n * (n + 1) // 2
    d = 2
    while d <= n:
        step = n // (n // d)
        total -= (step - d + 1) * phi_summatory(n // d)
        d = step + 1
    _PHI_SUM_CACHE[n] = total
    return total


def ramanujan_sum(q: int, m: int) -> int:
    """c_q(m) = sum over s | gcd(q, m) of s * mu(q/s); c_q(0) = phi(q)."""
    if q < 1:
        raise DomainError(f"modulus must be >= 1, got {q}")
    g = q if m == 0 else math.gcd(q, abs(m))
    # multiplicative evaluation: for q = p^t the sum collapses to two terms
    out = 1
    for p, t in factorize(q).items():
        pt, pt1 = p**t, p ** (t - 1)
        local = (pt if g % pt == 0 else 0) - (pt1 if g % pt1 == 0 else 0)
        out *= local
    return out


def averaged_Cq(q: int, n: int, table) -> Fraction:
    """Average of c_q(d_omega - n) over the closure table, as an exact rational.

    Expanding c_q by Mobius leaves only the two top divisor terms, so the
    average reduces to residue counts of the bottom-right entries:

        C_q(n) = (p^t A - p^(t-1) B) / |S_q|,

    with A = #{d = n mod p^t} and B = #{d = n mod p^(t-1)} in the table.
    """
    split = prime_power_split(q)
    if split is None:
        raise DomainError(f"{q} is not a prime power")
    p, t = split
    if table.q != q:
        raise DomainError(f"table modulus {table.q} does not match q = {q}")
    pt1 = p ** (t - 1)
    A = int(table.d_counts[n % q])
    B = int(table.d_counts[n % pt1::pt1].sum())
    return Fraction(q * A - pt1 * B, table.size)


def averaged_Cq_closed_form(q: int, n: int) -> Fraction:
    """C_q(n) when the closure is all of SL2(Z/q): the three full-reduction branches."""
    split = prime_power_split(q)
    if split is None:
        raise DomainError(f"{q} is not a prime power")
    p, t = split
    if t >= 2:
        return Fraction(0)
    if n % p == 0:
        return Fraction(-1, p + 1)
    return Fraction(1, p * p - 1)


def _bad_prime_factors(alphabet: Alphabet, n: int, p: int,
                       table_budget: int) -> list[Fraction]:
    """[C_p(n), C_{p^2}(n), ...] from closure tables until the tower stabilizes.

    Once the closure mod p^(t+1) is the full preimage of the closure mod p^t
    (size ratio p^3), every later C vanishes; for p = 2 the first two levels
    can stabilize spuriously, so two consecutive full-preimage steps are
    required there.
    """
    from .modular import closure_mod_q

    factors = []
    prev_size = None
    full_steps = 0
    t = 1
    while True:
        q = p**t
        if q > table_budget:
            raise ResourceError(
                f"closure tower for p = {p} not stabilized within budget {table_budget}")
        table = closure_mod_q(alphabet, q, det_filter="plus-one-only")
        factors.append(averaged_Cq(q, n, table))
        if prev_size is not None:
            full_steps = full_steps + 1 if table.size == p**3 * prev_size else 0
        prev_size = table.size
        need = 2 if p == 2 else 1
        if full_steps >= need:
            return factors
        t += 1


@dataclass(frozen=True)
class SingularSeriesValue:
    """Value of the averaged-Ramanujan-sum series for one target integer."""

    n: int
    mode: str            # "truncated" or "euler"
    level: int           # Q (sum over q < Q) or P (product over p <= P)
    value: float
    exact: Optional[Fraction]
    terms: dict[int, Fraction]   # per-q terms or per-p factors
    alphabet: Alphabet
    k_star: int
    bad_primes: list[int]


def singular_series(n: int, alphabet: Alphabet, mode: str = "euler",
                    level: int = 100, table_budget: int = 512) -> SingularSeriesValue:
    """Truncated sum of C_q(n) over q < Q, or the Euler product over p <= P.

    Alphabets with k* = 1 use the closed form at every prime; otherwise the
    primes dividing k* get correction factors built from actual closure
    tables (reduction at any modulus coprime to k* is certifiably full).
    """
    from .modular import k_star

    if n < 1:
        raise DomainError(f"target must be >= 1, got {n}")
    ks = k_star(alphabet)
    if ks == 0:
        raise ResourceError(
            "singleton alphabets have no certified-full moduli; singular series "
            "would need closure tables at every prime")
    bad = sorted(factorize(ks)) if ks > 1 else []

    bad_factors = {p: _bad_prime_factors(alphabet, n, p, table_budget)
                   for p in bad if (mode == "euler" and p <= level) or mode == "truncated"}

    def Cq(q: int) -> Fraction:
        out = Fraction(1)
        for p, t in factorize(q).items():
            if p in bad_factors:
                fs = bad_factors[p]
                out *= fs[t - 1] if t <= len(fs) else Fraction(0)
            else:
                out *= averaged_Cq_closed_form(p**t, n)
        return out

    terms: dict[int, Fraction] = {}
    if mode == "truncated":
        total = Fraction(1)  # q = 1 term
        terms[1] = Fraction(1)
        for q in range(2, level):
            t = Cq(q)
            if t:
                terms[q] = t
            total += t
        return SingularSeriesValue(n, mode, level, float(total), total, terms,
                                   alphabet, ks, bad)
    if mode == "euler":
        total = Fraction(1)
        for p in sieve_primes(level):
            if p in bad_factors:
                factor = Fraction(1) + sum(bad_factors[p], Fraction(0))
            else:
                factor = Fraction(1) + averaged_Cq_closed_form(p, n)
            terms[p] = factor
            total *= factor
        return SingularSeriesValue(n, mode, level, float(total), total, terms,
                                   alphabet, ks, bad)
    raise DomainError(f"unknown singular series mode {mode!r}")


def series_tail_bound(n: int, alphabet: Alphabet, Q: int, P: int,
                      table_budget: int = 512) -> Fraction:
    """Exact bound on |euler(P) - truncated(Q)|.

    The Euler product over p <= P expands into the finite sum of C_q(n) over
    P-smooth q whose prime towers have nonzero terms; the difference from the
    truncation is the part with q >= Q, so summing |C_q| there bounds it.
    """
    from .modular import k_star

    primes = sieve_primes(P)
    if len(primes) > 20:
        raise ResourceError(
            f"tail expansion over {len(primes)} primes is 2^{len(primes)} terms; keep P <= 71")
    ks = k_star(alphabet)
    bad = sorted(factorize(ks)) if ks > 1 else []
    bad_factors = {p: _bad_prime_factors(alphabet, n, p, table_budget)
                   for p in bad if p <= P}

    expansion: dict[int, Fraction] = {1: Fraction(1)}
    for p in primes:
        if p in bad_factors:
            powers = [(p**(t + 1), c) for t, c in enumerate(bad_factors[p]) if c]
        else:
            powers = [(p, averaged_Cq_closed_form(p, n))]
        new = dict(expansion)
        for q0, c0 in expansion.items():
            for q, c in powers:
                new[q0 * q] = new.get(q0 * q, Fraction(0)) + c0 * c
        expansion = new
    return sum((abs(c) for q, c in expansion.items() if q >= Q), Fraction(0))


@dataclass(frozen=True)
class RobinBound:
    n: int
    prime_product: Fraction     # prod_{p | n} (1 + 1/p)
    sigma_ratio: Fraction       # sigma_1(n) / n
    loglog_ratio: float         # prime_product / log log n

    @property
    def holds(self) -> bool:
        return self.prime_product <= self.sigma_ratio


def robin_bound_check(n: int) -> RobinBound:
    """prod_{p|n}(1 + 1/p) against sigma_1(n)/n and log log n."""
    if n < 3:
        raise DomainError(f"need n >= 3, got {n}")
    prod = Fraction(1)
    for p in factorize(n):
        prod *= Fraction(p + 1, p)
    ratio = Fraction(divisor_sum(n), n)
    return RobinBound(n, prod, ratio, float(prod) / math.log(math.log(n)))
