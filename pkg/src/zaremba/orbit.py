"""Norm-ball enumeration of the quotient semigroup and denominator statistics.

The ball {gamma : ||gamma||_F < N} is enumerated by a level-synchronous BFS
over words.  Appending a generator strictly increases the Frobenius norm, so
pruning at the bound loses nothing.  The hot path runs on int64 numpy arrays
with rows [a, b, c, d]; the bound is checked up front so the 64-bit
arithmetic can never wrap.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

from .cf_core import Alphabet, Mat2, word_of_matrix
from .errors import DomainError, EnumerationOverflowError

DET_ALL = "all"
DET_PLUS_ONE = "plus-one-only"


def _int64_norm_limit(alphabet: Alphabet) -> int:
    # Child entries stay below sqrt(2)*(A+1)*N and the norm-square test
    # computes sums of four squares, so 8*(A+1)^2*N^2 must fit in int64.
    return math.isqrt((2**63 - 1) // (8 * (alphabet.max + 1) ** 2))


def _children(block: np.ndarray, gens: list[int], norm_sq: int) -> np.ndarray:
    a, b, c, d = block[:, 0], block[:, 1], block[:, 2], block[:, 3]
    outs = []
    for k in gens:
        na, nb, nc, nd = b, a + k * b, d, c + k * d
        keep = na * na + nb * nb + nc * nc + nd * nd < norm_sq
        if keep.any():
            outs.append(np.stack([na[keep], nb[keep], nc[keep], nd[keep]], axis=1))
    if not outs:
        return np.empty((0, 4), dtype=np.int64)
    return np.concatenate(outs, axis=0)


def _bfs_subtree(seed: np.ndarray, seed_length: int, gens: list[int], norm_sq: int,
                 collect: bool) -> tuple[list[tuple[int, np.ndarray]], dict[int, int]]:
    """Expand every descendant of the seed rows; returns per-length blocks and counts."""
    blocks: list[tuple[int, np.ndarray]] = []
    counts: dict[int, int] = {}
    cur, length = seed, seed_length
    while cur.shape[0]:
        counts[length] = counts.get(length, 0) + cur.shape[0]
        if collect:
            blocks.append((length, cur))
        cur = _children(cur, gens, norm_sq)
        length += 1
    return blocks, counts


def _enumerate(alphabet: Alphabet, norm_bound: int, threads: int,
               collect: bool) -> tuple[list[tuple[int, np.ndarray]], dict[int, int]]:
    if norm_bound < 0:
        raise DomainError(f"norm bound must be nonnegative, got {norm_bound}")
    if norm_bound > _int64_norm_limit(alphabet):
        raise EnumerationOverflowError(
            f"norm bound {norm_bound} exceeds the checked int64 limit "
            f"{_int64_norm_limit(alphabet)} for alphabet {alphabet}")
    gens = list(alphabet.members)
    norm_sq = norm_bound * norm_bound
    g = np.array([[0, 1, 1, k] for k in gens], dtype=np.int64)
    level1 = g[(g * g).sum(axis=1) < norm_sq]
    level2 = _children(level1, gens, norm_sq)

    blocks: list[tuple[int, np.ndarray]] = []
    counts: dict[int, int] = {}
    if level1.shape[0]:
        counts[1] = level1.shape[0]
        if collect:
            blocks.append((1, level1))
    if level2.shape[0] == 0:
        return blocks, counts

    threads = max(1, threads)
    if threads == 1 or level2.shape[0] < 2 * threads:
        sub_blocks, sub_counts = _bfs_subtree(level2, 2, gens, norm_sq, collect)
        blocks.extend(sub_blocks)
        for length, n in sub_counts.items():
            counts[length] = counts.get(length, 0) + n
        return blocks, counts

    # One subtree per length-2 prefix chunk; the final sort makes the merge
    # order-independent.
    chunks = np.array_split(level2, 4 * threads)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(_bfs_subtree, chunk, 2, gens, norm_sq, collect)
                   for chunk in chunks if chunk.shape[0]]
        for fut in futures:
            sub_blocks, sub_counts = fut.result()
            blocks.extend(sub_blocks)
            for length, n in sub_counts.items():
                counts[length] = counts.get(length, 0) + n
    return blocks, counts


@dataclass(frozen=True)
class OrbitBall:
    """The finite set {gamma : ||gamma||_F < norm_bound} as packed arrays.

    matrices holds one row [a, b, c, d] per element, sorted by (d, c, b, a)
    for reproducible iteration; lengths holds the word lengths.  The identity
    (empty word) is never included.
    """

    alphabet: Alphabet
    norm_bound: int
    det_filter: str
    matrices: np.ndarray
    lengths: np.ndarray

    def __len__(self) -> int:
        return self.matrices.shape[0]

    @property
    def denominator_column(self) -> np.ndarray:
        return self.matrices[:, 3]

    @property
    def dets(self) -> np.ndarray:
        return np.where(self.lengths % 2 == 0, 1, -1)

    def matrix_at(self, i: int) -> Mat2:
        a, b, c, d = (int(x) for x in self.matrices[i])
        return Mat2(a, b, c, d)

    def word_at(self, i: int) -> tuple[int, ...]:
        return word_of_matrix(self.matrix_at(i))

    def iter_matrices(self) -> Iterator[Mat2]:
        for i in range(len(self)):
            yield self.matrix_at(i)


def enumerate_ball(alphabet: Alphabet, norm_bound: int, det_filter: str = DET_ALL,
                   threads: int = 1) -> OrbitBall:
    """Enumerate the norm ball; det_filter="plus-one-only" keeps even-length words."""
    if det_filter not in (DET_ALL, DET_PLUS_ONE):
        raise DomainError(f"unknown det filter {det_filter!r}")
    blocks, _ = _enumerate(alphabet, norm_bound, threads, collect=True)
    if det_filter == DET_PLUS_ONE:
        blocks = [(length, arr) for length, arr in blocks if length % 2 == 0]
    if not blocks:
        empty = np.empty((0, 4), dtype=np.int64)
        return OrbitBall(alphabet, norm_bound, det_filter, empty,
                         np.empty((0,), dtype=np.int32))
    mats = np.concatenate([arr for _, arr in blocks], axis=0)
    lens = np.concatenate([np.full(arr.shape[0], length, dtype=np.int32)
                           for length, arr in blocks])
    if 2 * norm_bound * norm_bound < (1 << 28):
        # entries (< sqrt(2) N) fit 14 bits: one packed key sorts (d, c, b, a)
        key = ((mats[:, 3] << np.int64(42)) | (mats[:, 2] << np.int64(28))
               | (mats[:, 1] << np.int64(14)) | mats[:, 0])
        order = np.argsort(key)
    else:
        order = np.lexsort((mats[:, 0], mats[:, 1], mats[:, 2], mats[:, 3]))
    return OrbitBall(alphabet, norm_bound, det_filter, mats[order], lens[order])


def ball_count(alphabet: Alphabet, norm_bound: int, det_filter: str = DET_ALL,
               threads: int = 1) -> int:
    """Cardinality of the ball without storing it (for growth fits)."""
    _, counts = _enumerate(alphabet, norm_bound, threads, collect=False)
    if det_filter == DET_PLUS_ONE:
        return sum(n for length, n in counts.items() if length % 2 == 0)
    return sum(counts.values())


@dataclass(frozen=True)
class MultiplicityIndex:
    """Map from an integer frequency (usually a denominator) to its count."""

    counts: dict[int, int]
    total: int

    @classmethod
    def from_values(cls, values: np.ndarray) -> "MultiplicityIndex":
        if values.size == 0:
            return cls({}, 0)
        keys, cnts = np.unique(values, return_counts=True)
        return cls(dict(zip(keys.tolist(), cnts.tolist())), int(values.size))

    def __getitem__(self, d: int) -> int:
        return self.counts.get(d, 0)

    def __len__(self) -> int:
        return len(self.counts)

    def keys_sorted(self) -> list[int]:
        return sorted(self.counts)

    def median_multiplicity(self, lo: int, hi: int) -> Optional[float]:
        vals = [c for d, c in self.counts.items() if lo <= d <= hi]
        return float(np.median(vals)) if vals else None

    def rows(self) -> list[tuple[int, int]]:
        return [(d, self.counts[d]) for d in self.keys_sorted()]


def denominators(ball: OrbitBall) -> MultiplicityIndex:
    """Multiplicity of each denominator d = <gamma e2, e2> over the ball."""
    return MultiplicityIndex.from_values(ball.denominator_column)


def density_point(alphabet: Alphabet) -> tuple[float, np.ndarray]:
    """The point x = [A, A, ...] and its unit direction (x, 1)/|(x, 1)|.

    Requires max(alphabet) >= 3 so that x < sqrt(2) - 1.
    """
    A = alphabet.max
    if A < 3:
        raise DomainError(f"density point needs max(alphabet) >= 3, got {A}")
    x = (-A + math.sqrt(A * A + 4)) / 2
    v = np.array([x, 1.0]) / math.sqrt(1 + x * x)
    return x, v


def expanding_eigen_arrays(matrices: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized expanding eigenvalue and unit eigenvector for det +1 rows."""
    a = matrices[:, 0].astype(np.float64)
    b = matrices[:, 1].astype(np.float64)
    d = matrices[:, 3].astype(np.float64)
    t = a + d
    lam = (t + np.sqrt(t * t - 4.0)) / 2.0
    vx, vy = b, lam - a
    norm = np.sqrt(vx * vx + vy * vy)
    return lam, np.stack([vx / norm, vy / norm], axis=1)


def sector_count(alphabet: Alphabet, T: float, H: float) -> int:
    """#{gamma in the det+1 ball : ||gamma|| < T, ||v_plus(gamma) - v|| < 1/H}."""
    if T < 2:
        raise DomainError(f"norm bound T must be >= 2, got {T}")
    if H <= 0:
        raise DomainError(f"cone parameter H must be positive, got {H}")
    _, v0 = density_point(alphabet)
    ball = enumerate_ball(alphabet, math.ceil(T), DET_PLUS_ONE)
    m = ball.matrices
    norm_sq = (m.astype(np.float64) ** 2).sum(axis=1)
    inside = norm_sq < T * T
    if not inside.any():
        return 0
    _, vecs = expanding_eigen_arrays(m[inside])
    dist = np.linalg.norm(vecs - v0[None, :], axis=1)
    return int(np.count_nonzero(dist < 1.0 / H))


@dataclass(frozen=True)
class DensityReport:
    """Fraction of admissible integers <= n realized as denominators, per cutoff."""

    alphabet: Alphabet
    norm_bound: int
    q_max: int
    cutoffs: list[int]
    admissible_counts: list[int]
    realized_counts: list[int]
    fractions: list[float]

    def rows(self) -> list[tuple[int, int, int, float]]:
        return list(zip(self.cutoffs, self.admissible_counts,
                        self.realized_counts, self.fractions))


def density_report(alphabet: Alphabet, norm_bound: int, q_max: int = 64,
                   grid_points: int = 24, threads: int = 1) -> DensityReport:
    """Realized-denominator density among admissible integers, on a cutoff grid."""
    from .modular import admissibility_sieve

    ball = enumerate_ball(alphabet, norm_bound, DET_ALL, threads)
    present = np.zeros(norm_bound + 1, dtype=bool)
    dcol = ball.denominator_column
    present[dcol[dcol <= norm_bound]] = True
    admissible = admissibility_sieve(alphabet, norm_bound, q_max)

    cutoffs = sorted({int(round(x)) for x in np.geomspace(2, max(norm_bound, 2), grid_points)})
    adm_cum = np.cumsum(admissible)
    both_cum = np.cumsum(admissible & present)
    adm_counts, real_counts, fracs = [], [], []
    for n in cutoffs:
        adm = int(adm_cum[n])
        got = int(both_cum[n])
        adm_counts.append(adm)
        real_counts.append(got)
        fracs.append(got / adm if adm else 0.0)
    return DensityReport(alphabet, norm_bound, q_max, cutoffs, adm_counts,
                         real_counts, fracs)


@dataclass(frozen=True)
class OrbitDecomposition:
    """Set comparison between the full-orbit fractions and the det+1 split."""

    alphabet: Alphabet
    norm_bound: int
    equal: bool
    fraction_count: int
    only_full_orbit: int
    only_split: int


def orbit_decomposition_check(alphabet: Alphabet, norm_bound: int,
                              threads: int = 1) -> OrbitDecomposition:
    """Check that the full orbit equals Gamma e2 union gamma_a Gamma e2.

    Fractions are compared with denominator d < N/2 so that both enumerations
    certifiably contain every such fraction (||gamma|| <= 2d < N).
    """
    half = norm_bound / 2
    ball = enumerate_ball(alphabet, norm_bound, DET_ALL, threads)
    m = ball.matrices
    key = norm_bound + 1

    sel = m[:, 3] < half
    left = np.unique(m[sel, 1] * key + m[sel, 3])

    even = ball.lengths % 2 == 0
    g = m[even]
    parts = []
    sel = g[:, 3] < half
    parts.append(g[sel, 1] * key + g[sel, 3])
    for a in alphabet:
        # gamma_a @ [[A,B],[C,D]] = [[C, D], [A + aC, B + aD]]: fraction D / (B + aD)
        nb, nd = g[:, 3], g[:, 1] + a * g[:, 3]
        sel = nd < half
        parts.append(nb[sel] * key + nd[sel])
        if a < half:  # gamma_a times the identity contributes 1/a
            parts.append(np.array([1 * key + a], dtype=np.int64))
    right = np.unique(np.concatenate(parts))

    only_l = np.setdiff1d(left, right, assume_unique=True).size
    only_r = np.setdiff1d(right, left, assume_unique=True).size
    return OrbitDecomposition(alphabet, norm_bound, only_l == 0 and only_r == 0,
                              int(left.size), int(only_l), int(only_r))


def growth_exponent_fit(alphabet: Alphabet, norm_bounds: list[int],
                        threads: int = 1) -> tuple[float, list[int]]:
    """Least-squares slope of log #ball(N) against log N."""
    counts = [ball_count(alphabet, n, DET_ALL, threads) for n in norm_bounds]
    slope = float(np.polyfit(np.log(norm_bounds), np.log(counts), 1)[0])
    return slope, counts
