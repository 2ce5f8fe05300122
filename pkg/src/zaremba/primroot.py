"""Primes with primitive roots of bounded continued-fraction height.

The height of b/p is the largest partial quotient of its canonical
expansion.  When p = 3 (mod 4) and b sits at even index of exact gcd 2 in
the cyclic group mod p, the complement p - b is a primitive root, and the
complement rule changes the expansion height by at most one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .arith import factorize, sieve_primes
from .cf_core import expand
from .errors import DomainError

FACTOR_BUDGET = 10**7


def _check_prime(p: int) -> None:
    if p < 2 or any(p % q == 0 for q in range(2, math.isqrt(p) + 1)):
        raise DomainError(f"{p} is not prime")
    if p > FACTOR_BUDGET:
        raise DomainError(f"prime {p} over the factoring budget {FACTOR_BUDGET}")


def multiplicative_order(b: int, p: int) -> int:
    """Order of b in the cyclic group mod p (p prime, p does not divide b)."""
    _check_prime(p)
    if b % p == 0:
        raise DomainError(f"{b} is divisible by {p}")
    order = p - 1
    for ell in factorize(p - 1):
        while order % ell == 0 and pow(b, order // ell, p) == 1:
            order //= ell
    return order


def is_primitive_root(b: int, p: int) -> bool:
    """True iff b generates the full cyclic group mod p."""
    _check_prime(p)
    if not 1 <= b < p:
        raise DomainError(f"need 1 <= b < p, got b = {b}, p = {p}")
    if p == 2:
        return b == 1
    return all(pow(b, (p - 1) // ell, p) != 1 for ell in factorize(p - 1))


def fraction_height(numer: int, denom: int) -> int:
    """Largest partial quotient of the canonical expansion of numer/denom."""
    return max(expand(numer, denom))


@dataclass(frozen=True)
class HeightRecord:
    p: int
    b: Optional[int]          # None when no bounded-height primitive root exists
    height: Optional[int]
    is_primitive_root: bool

    @property
    def found(self) -> bool:
        return self.b is not None


def search_height_bounded(p_max: int, height_bound: int = 7,
                          residue_3_mod_4: bool = False,
                          min_factor_threshold: Optional[int] = None) -> list[HeightRecord]:
    """Least primitive root of height <= height_bound for each prime <= p_max.

    Scanning b upward and testing the cheap height filter first subsumes the
    complement shortcut (p - b is scanned in its own turn); the shortcut
    itself is exposed as complement_primitivity_check.  Optional filters
    restrict to p = 3 (mod 4) and to primes where every prime factor of
    (p-1)/2 exceeds the threshold.
    """
    if p_max < 3:
        raise DomainError(f"need p_max >= 3, got {p_max}")
    if height_bound < 2:
        raise DomainError(f"height bound must be >= 2, got {height_bound}")
    records = []
    for p in sieve_primes(p_max):
        if p == 2:
            continue
        if residue_3_mod_4 and p % 4 != 3:
            continue
        if min_factor_threshold is not None and any(
                ell <= min_factor_threshold for ell in factorize((p - 1) // 2)):
            continue
        found = None
        for b in range(1, p):
            if math.gcd(b, p) != 1:
                continue
            h = fraction_height(b, p)
            if h <= height_bound and is_primitive_root(b, p):
                found = HeightRecord(p, b, h, True)
                break
        records.append(found if found else HeightRecord(p, None, None, False))
    return records


def complement_primitivity_check(p: int, b: int) -> bool:
    """Certify that p - b is a primitive root from the order of b.

    Requires p = 3 (mod 4) and b of order exactly (p-1)/2, i.e. a quadratic
    residue whose index has gcd 2 with p - 1.  Then -1 is a non-residue and
    -b generates the residues and -1 together, the whole group.
    """
    _check_prime(p)
    if p % 4 != 3:
        raise DomainError(f"need p = 3 (mod 4), got p = {p}")
    if not 1 <= b < p:
        raise DomainError(f"need 1 <= b < p, got b = {b}")
    if multiplicative_order(b, p) != (p - 1) // 2:
        raise DomainError(
            f"{b} does not have order (p-1)/2 mod {p}; the certificate needs index gcd 2")
    return is_primitive_root(p - b, p)
