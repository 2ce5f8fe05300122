"""Semigroup closures mod q, strong approximation, and local obstructions.

The reduction of the quotient semigroup mod q is closed under multiplication
inside the finite group of det +-1 matrices, hence is itself a group; a BFS
over right multiplication by the generators reaches the fixpoint.  Matrices
are packed into a single integer ((a*q + b)*q + c)*q + d and membership lives
in a packed bit array, so the BFS is a handful of vectorized passes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .arith import factorize, prime_powers_up_to
from .cf_core import Alphabet
from .errors import DomainError, ResourceError

MODULUS_BUDGET = 512

DET_ALL = "all"
DET_PLUS_ONE = "plus-one-only"


def sl2_order(q: int) -> int:
    """|SL2(Z/q)| = q^3 prod_{p | q} (1 - 1/p^2)."""
    if q < 1:
        raise DomainError(f"modulus must be >= 1, got {q}")
    n = q**3
    for p in factorize(q):
        n = n * (p * p - 1) // (p * p)
    return n


@dataclass(frozen=True)
class ResidueTable:
    """Closure of the semigroup mod q, with its attainable bottom-right residues."""

    q: int
    det_filter: str
    codes: np.ndarray        # sorted packed matrices
    d_counts: np.ndarray     # d_counts[r] = #elements with d = r (mod q)
    size: int
    is_full_sl2: bool

    @property
    def d_residues(self) -> frozenset[int]:
        return frozenset(int(r) for r in np.nonzero(self.d_counts)[0])

    def contains(self, a: int, b: int, c: int, d: int) -> bool:
        q = self.q
        code = ((a % q * q + b % q) * q + c % q) * q + d % q
        i = np.searchsorted(self.codes, code)
        return bool(i < self.codes.size and self.codes[i] == code)

    def unpack(self) -> np.ndarray:
        """Rows [a, b, c, d] mod q, in code order."""
        q, code = self.q, self.codes.astype(np.int64)
        d = code % q
        code //= q
        c = code % q
        code //= q
        return np.stack([code // q, code % q, c, d], axis=1)


def _bfs_closure(gen_rows: list[tuple[int, int, int, int]], q: int) -> np.ndarray:
    nstate = q**4
    seen = np.zeros((nstate + 63) // 64, dtype=np.uint64)
    gens = [(a % q, b % q, c % q, d % q) for a, b, c, d in gen_rows]

    def test_and_set(codes: np.ndarray) -> np.ndarray:
        w = codes // 64
        bit = np.uint64(1) << (codes % 64).astype(np.uint64)
        unseen = (seen[w] & bit) == 0
        np.bitwise_or.at(seen, w[unseen], bit[unseen])
        return codes[unseen]

    frontier = np.unique(np.array(
        [((a * q + b) * q + c) * q + d for a, b, c, d in gens], dtype=np.int64))
    frontier = test_and_set(frontier)
    out = [frontier]
    while frontier.size:
        code = frontier.copy()
        d = code % q
        code //= q
        c = code % q
        code //= q
        b = code % q
        a = code // q
        nxt = []
        for ga, gb, gc, gd in gens:
            na = (a * ga + b * gc) % q
            nb = (a * gb + b * gd) % q
            nc = (c * ga + d * gc) % q
            nd = (c * gb + d * gd) % q
            nxt.append(((na * q + nb) * q + nc) * q + nd)
        frontier = test_and_set(np.unique(np.concatenate(nxt)))
        out.append(frontier)
    return np.sort(np.concatenate(out))


@lru_cache(maxsize=256)
def _closure_cached(members: tuple[int, ...], q: int, det_filter: str) -> ResidueTable:
    alphabet = Alphabet(members)
    if det_filter == DET_ALL:
        gen_rows = [(0, 1, 1, a) for a in alphabet]
    elif det_filter == DET_PLUS_ONE:
        # generators of the det +1 subsemigroup: [[0,1],[1,a]] [[0,1],[1,b]] = [[1, b], [a, 1 + a b]]
        gen_rows = [(1, b, a, 1 + a * b) for a in alphabet for b in alphabet]
    else:
        raise DomainError(f"unknown det filter {det_filter!r}")
    codes = _bfs_closure(gen_rows, q)

    d = (codes % q).astype(np.int64)
    d_counts = np.bincount(d, minlength=q)
    # a d - b c (mod q) per element, to count the det +1 part
    rest = codes // q
    c = rest % q
    rest //= q
    b = rest % q
    a = rest // q
    dets = (a * d - b * c) % q
    sl2_size = int(np.count_nonzero(dets == 1 % q))
    return ResidueTable(q, det_filter, codes, d_counts, int(codes.size),
                        sl2_size == sl2_order(q))


def closure_mod_q(alphabet: Alphabet, q: int, det_filter: str = DET_ALL) -> ResidueTable:
    """BFS fixpoint of the semigroup generated mod q.

    det_filter="all" reduces the full semigroup (det +-1); "plus-one-only"
    reduces the even-length subsemigroup.
    """
    if q < 2:
        raise DomainError(f"modulus must be >= 2, got {q}")
    if q > MODULUS_BUDGET:
        raise ResourceError(f"modulus {q} over the table budget {MODULUS_BUDGET}")
    return _closure_cached(alphabet.members, q, det_filter)


def admissible_residues(alphabet: Alphabet, q: int) -> frozenset[int]:
    """Attainable denominators mod q: d-entries of the full-semigroup closure."""
    return closure_mod_q(alphabet, q, DET_ALL).d_residues


def k_star(alphabet: Alphabet) -> int:
    """gcd of all pairwise member differences; 0 for a singleton alphabet."""
    m = alphabet.members
    return math.gcd(*(b - a for a in m for b in m if b > a)) if len(m) > 1 else 0


def certified_full(alphabet: Alphabet, q: int) -> bool:
    """True when reduction mod q is provably all of SL2(Z/q).

    Holds whenever gcd(q, k*) = 1: the closure group contains the lower
    unipotent with increment k*, hence the generator for every residue mod q,
    and two generators with consecutive quotients already produce SL2(Z).
    """
    return math.gcd(q, k_star(alphabet)) == 1


@dataclass(frozen=True)
class ObstructionReport:
    """Outcome of the bad-modulus search."""

    alphabet: Alphabet
    k_star: int
    residue_class: Optional[tuple[int, int]]  # (r, k*) with members in r + k*.Z
    mode: str                                 # "certified" or "searched"
    q_max: int
    checked_moduli: list[int]
    failing_moduli: list[int]                 # q where the det+1 closure is not SL2(q)
    inadmissible_residues: dict[int, list[int]]


def find_bad_modulus(alphabet: Alphabet, q_max: int = 120) -> ObstructionReport:
    """Scan prime powers q <= q_max for closure and residue obstructions.

    When k* = 1 the Theorem-B-style reduction certifies everywhere strong
    approximation and no scan is needed.
    """
    if q_max < 2:
        raise DomainError(f"q_max must be >= 2, got {q_max}")
    ks = k_star(alphabet)
    if ks == 1:
        return ObstructionReport(alphabet, 1, None, "certified", q_max, [], [], {})
    residue_class = (alphabet.min % ks, ks) if ks >= 2 else (alphabet.min, 0)
    checked = prime_powers_up_to(q_max)
    failing, inadmissible = [], {}
    for q in checked:
        if not closure_mod_q(alphabet, q, DET_PLUS_ONE).is_full_sl2:
            failing.append(q)
        missing = sorted(set(range(q)) - admissible_residues(alphabet, q))
        if missing:
            inadmissible[q] = missing
    return ObstructionReport(alphabet, ks, residue_class, "searched", q_max,
                             checked, failing, inadmissible)


@dataclass(frozen=True)
class AdmissibilityCertificate:
    d: int
    admissible: bool
    q_max: int
    checked_moduli: list[int]
    witness: Optional[tuple[int, int]]  # (q, d mod q) of the first obstruction

    def __bool__(self) -> bool:
        return self.admissible


def is_admissible(d: int, alphabet: Alphabet, q_max: int = 120,
                  det_filter: str = DET_ALL) -> AdmissibilityCertificate:
    """Bounded admissibility check: d mod q attainable for every prime power q <= q_max.

    This is a verification up to q_max, not a proof for all q (the bad modulus
    is finite but the paper-level bound is not effective here).
    """
    if q_max < 2:
        raise DomainError(f"q_max must be >= 2, got {q_max}")
    checked = []
    for q in prime_powers_up_to(q_max):
        checked.append(q)
        if certified_full(alphabet, q):
            continue
        table = closure_mod_q(alphabet, q, det_filter)
        if (d % q) not in table.d_residues:
            return AdmissibilityCertificate(d, False, q_max, checked, (q, d % q))
    return AdmissibilityCertificate(d, True, q_max, checked, None)


def admissibility_sieve(alphabet: Alphabet, n_max: int, q_max: int = 64,
                        det_filter: str = DET_ALL) -> np.ndarray:
    """Boolean mask over 0..n_max marking bounded-admissible integers."""
    mask = np.ones(n_max + 1, dtype=bool)
    mask[0] = False
    for q in prime_powers_up_to(q_max):
        if certified_full(alphabet, q):
            continue
        table = closure_mod_q(alphabet, q, det_filter)
        ok = np.zeros(q, dtype=bool)
        ok[sorted(table.d_residues)] = True
        mask &= ok[np.arange(n_max + 1) % q]
    return mask


def reduction_image(table: ResidueTable, q_new: int) -> np.ndarray:
    """Entrywise reduction of a closure to a divisor modulus, as sorted codes."""
    if table.q % q_new:
        raise DomainError(f"{q_new} does not divide {table.q}")
    rows = table.unpack() % q_new
    codes = ((rows[:, 0] * q_new + rows[:, 1]) * q_new + rows[:, 2]) * q_new + rows[:, 3]
    return np.unique(codes)
