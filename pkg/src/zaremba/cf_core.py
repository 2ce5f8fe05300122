"""Continued fractions with bounded partial quotients and their 2x2 matrix avatars.

A fraction b/d = [a_1, ..., a_k] (all a_i >= 1) corresponds to the matrix
product of the generators [[0,1],[1,a_i]]: the product carries b in its
top-right entry and d in its bottom-right entry.  Everything here is exact
integer arithmetic except the eigen-data, which is floating point with the
tolerances owned by the callers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .errors import DomainError

Word = tuple[int, ...]


@dataclass(frozen=True)
class Alphabet:
    """A finite set of allowed partial quotients, kept sorted and deduplicated."""

    members: tuple[int, ...]

    def __post_init__(self):
        m = tuple(sorted({int(a) for a in self.members}))
        if not m:
            raise DomainError("alphabet must be nonempty")
        if m[0] < 1:
            raise DomainError(f"alphabet members must be positive, got {m[0]}")
        object.__setattr__(self, "members", m)

    @classmethod
    def of(cls, *members: int) -> "Alphabet":
        return cls(tuple(members))

    @property
    def max(self) -> int:
        return self.members[-1]

    @property
    def min(self) -> int:
        return self.members[0]

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, a: object) -> bool:
        return a in self.members

    def __str__(self) -> str:
        return "{" + ",".join(str(a) for a in self.members) + "}"


@dataclass(frozen=True)
class Mat2:
    """Exact 2x2 integer matrix [[a, b], [c, d]] with determinant +-1."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.det not in (1, -1):
            raise DomainError(f"determinant must be +-1, got {self.det}")
        if min(self.a, self.b, self.c, self.d) < 0:
            raise DomainError("entries must be nonnegative")

    @classmethod
    def identity(cls) -> "Mat2":
        return cls(1, 0, 0, 1)

    @classmethod
    def generator(cls, a: int) -> "Mat2":
        """The partial-quotient generator [[0, 1], [1, a]]."""
        if a < 1:
            raise DomainError(f"generator quotient must be >= 1, got {a}")
        return cls(0, 1, 1, a)

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    @property
    def trace(self) -> int:
        return self.a + self.d

    def frobenius_sq(self) -> int:
        return self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d

    def frobenius(self) -> float:
        return math.sqrt(self.frobenius_sq())

    def is_identity(self) -> bool:
        return (self.a, self.b, self.c, self.d) == (1, 0, 0, 1)

    def __matmul__(self, other: "Mat2") -> "Mat2":
        return Mat2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def rows(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return ((self.a, self.b), (self.c, self.d))


@dataclass(frozen=True)
class EigenData:
    """Expanding/contracting eigen-pair of a hyperbolic matrix.

    Eigenvectors are unit-normalized with nonnegative second coordinate.
    """

    lambda_plus: float
    lambda_minus: float
    v_plus: np.ndarray
    v_minus: np.ndarray


def validate_word(word: Sequence[int]) -> Word:
    w = tuple(int(a) for a in word)
    if any(a < 1 for a in w):
        raise DomainError(f"partial quotients must be >= 1, got {w}")
    return w


def expand(numer: int, denom: int) -> Word:
    """Canonical continued fraction expansion of numer/denom.

    Returns the unique expansion with final quotient >= 2 (when length >= 2).
    Requires 0 < numer < denom and gcd(numer, denom) = 1.
    """
    if not (0 < numer < denom):
        raise DomainError(f"need 0 < numer < denom, got {numer}/{denom}")
    if math.gcd(numer, denom) != 1:
        raise DomainError(f"{numer}/{denom} is not in lowest terms")
    w = []
    a, b = numer, denom
    while a:
        q, r = divmod(b, a)
        w.append(q)
        b, a = a, r
    return tuple(w)


def reconstruct(word: Sequence[int]) -> tuple[int, int]:
    """Evaluate [a_1, ..., a_k] back to (numerator, denominator); () -> (0, 1)."""
    w = validate_word(word)
    num, den = 0, 1
    for q in reversed(w):
        num, den = den, q * den + num
    return num, den


def canonicalize(word: Sequence[int]) -> Word:
    """Normal form with final quotient >= 2: [..., x, 1] becomes [..., x+1]."""
    w = validate_word(word)
    if len(w) >= 2 and w[-1] == 1:
        return w[:-2] + (w[-2] + 1,)
    return w


def parity_mate(word: Sequence[int]) -> Word:
    """The unique same-value expansion of opposite length parity.

    [..., a_k] with a_k >= 2 maps to [..., a_k - 1, 1] and back.  The words
    () and (1,) have no mate.
    """
    w = validate_word(word)
    if not w or w == (1,):
        raise DomainError(f"{w} has no opposite-parity expansion")
    if w[-1] == 1:
        return w[:-2] + (w[-2] + 1,)
    return w[:-1] + (w[-1] - 1, 1)


def to_even_length(word: Sequence[int]) -> Word:
    """The expansion of the same value with an even number of quotients."""
    w = validate_word(word)
    return w if len(w) % 2 == 0 else parity_mate(w)


def matrix_of_word(word: Sequence[int]) -> Mat2:
    """Product of the generators [[0,1],[1,a_i]]; top-right = b, bottom-right = d."""
    m = Mat2.identity()
    for q in validate_word(word):
        m = m @ Mat2.generator(q)
    return m


def word_of_matrix(m: Mat2) -> Word:
    """Inverse of matrix_of_word; raises DomainError off the semigroup.

    The fraction b/d determines the word up to the final-quotient parity
    ambiguity, which the first column resolves.
    """
    if m.is_identity():
        return ()
    if (m.a, m.b, m.c, m.d) == (0, 1, 1, 1):
        return (1,)
    if not (1 <= m.b < m.d):
        raise DomainError(f"{m} is not a product of generators")
    w = expand(m.b, m.d)
    if matrix_of_word(w) == m:
        return w
    mate = parity_mate(w)
    if matrix_of_word(mate) == m:
        return mate
    raise DomainError(f"{m} is not a product of generators")


def complement_expansion(word: Sequence[int]) -> Word:
    """Expansion of (d-b)/d from an expansion of b/d.

    [1, a_2, ..., a_k]  ->  [1 + a_2, a_3, ..., a_k]
    [a_1, ..., a_k] (a_1 > 1)  ->  [1, a_1 - 1, a_2, ..., a_k]

    The result is not canonicalized; use canonicalize() to compare with
    expand(d - b, d).
    """
    w = validate_word(word)
    if not w:
        raise DomainError("empty word has no complement")
    if w == (1,):
        raise DomainError("(1,) expands 1/1, which has no complement in (0, 1)")
    if w[0] == 1:
        return (1 + w[1],) + w[2:]
    return (1, w[0] - 1) + w[1:]


def eigen(m: Mat2) -> EigenData:
    """Eigen-data of a hyperbolic matrix via the quadratic formula.

    Requires |trace| > 2 for det = +1 and trace != 0 for det = -1; anything
    else has unimodular eigenvalues and is rejected.
    """
    t, det = m.trace, m.det
    if det == 1 and abs(t) <= 2:
        raise DomainError(f"matrix with det +1 and |trace| {abs(t)} <= 2 is not hyperbolic")
    if det == -1 and t == 0:
        raise DomainError("matrix with det -1 and trace 0 is not hyperbolic")
    disc = math.sqrt(t * t - 4 * det)
    lam_plus = (t + disc) / 2 if t > 0 else (t - disc) / 2
    lam_minus = det / lam_plus
    return EigenData(lam_plus, lam_minus, _eigvec(m, lam_plus), _eigvec(m, lam_minus))


def _eigvec(m: Mat2, lam: float) -> np.ndarray:
    # (m - lam I) v = 0: v is proportional to (b, lam - a) or (lam - d, c);
    # pick the numerically larger representation.
    v1 = np.array([float(m.b), lam - m.a])
    v2 = np.array([lam - m.d, float(m.c)])
    v = v1 if np.abs(v1).sum() >= np.abs(v2).sum() else v2
    v = v / np.linalg.norm(v)
    if v[1] < 0 or (v[1] == 0 and v[0] < 0):
        v = -v
    return v
