"""Desk-scale circle method over enumerated orbit balls.

The representation count R(d), the major-arc main term M(d), and the error
E = R - M are all exact or closed-form evaluations here; the quadrature and
DFT cross-checks live with the test oracles.  The main term follows from
integrating the periodized triangle spike against e((m - d) theta): each
spike at a/q contributes e((m - d) a/q) times the triangle transform, so

    M(d) = (Q/N) sum_gamma sinc^2(Q (m_gamma - d)/N) sum_{q < Q} c_q(m_gamma - d).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .arith import phi_summatory, ramanujan_sum
from .cf_core import Alphabet
from .construction import ProductSet
from .errors import DomainError
from .orbit import MultiplicityIndex, OrbitBall

IndexSet = Union[OrbitBall, ProductSet]


def triangle_spike(x) -> np.ndarray:
    """The unit triangle on [-1, 1] (autocorrelation of the unit box)."""
    x = np.asarray(x, dtype=float)
    return np.maximum(1.0 - np.abs(x), 0.0)


def sinc_sq(x) -> np.ndarray:
    """sinc(x)^2 = (sin pi x / pi x)^2, the Fourier transform of the triangle."""
    s = np.sinc(np.asarray(x, dtype=float))
    return s * s


def test_functions(x) -> tuple[np.ndarray, np.ndarray]:
    """(triangle, sinc^2) evaluated at x; the pair is a Fourier-transform pair."""
    return triangle_spike(x), sinc_sq(x)


@dataclass(frozen=True)
class MajorArcConfig:
    """Level and geometry of the major arcs [a/q +- Q_level/N], q < Q_level."""

    N: int
    Q_level: int
    alphabet: Alphabet
    shift: Optional[int] = None

    def __post_init__(self):
        if not 1 <= self.Q_level <= self.N:
            raise DomainError(f"need 1 <= Q_level <= N, got {self.Q_level}, {self.N}")
        if self.shift is not None and self.shift not in self.alphabet:
            raise DomainError(f"shift {self.shift} is not an alphabet member")


def frequencies(index_set: IndexSet, shift: Optional[int] = None) -> np.ndarray:
    """The integer frequencies m_gamma: the denominator d, or b + shift*d when shifted.

    <gamma e2, gamma_a e2> = b + a d since gamma_a e2 = (1, a).
    """
    m = index_set.matrices
    if shift is None:
        return m[:, 3].copy()
    return m[:, 1] + shift * m[:, 3]


def exponential_sum(index_set: IndexSet, theta: float,
                    shift: Optional[int] = None) -> complex:
    """S(theta) = sum_gamma e(theta * m_gamma)."""
    m = frequencies(index_set, shift)
    return complex(np.exp(2j * np.pi * theta * m).sum())


def representation_counts(index_set: IndexSet,
                          shift: Optional[int] = None) -> MultiplicityIndex:
    """Exact counts R(d) = #{gamma : m_gamma = d}."""
    return MultiplicityIndex.from_values(frequencies(index_set, shift))


def mollifier_value(theta, N: int, Q_level: int) -> np.ndarray:
    """The periodized triangle spikes placed at every a/q with q < Q_level."""
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    out = np.zeros_like(theta)
    scale = N / Q_level
    for q in range(1, Q_level):
        for a in range(q):
            if math.gcd(a, q) != 1 and not (a == 0 and q == 1):
                continue
            frac = theta - a / q
            frac -= np.round(frac)
            out += triangle_spike(scale * frac)
    return out


def _ramanujan_kernel(values: np.ndarray, Q_level: int) -> np.ndarray:
    """sum_{q < Q_level} c_q(x) for each x, via per-modulus residue tables."""
    out = np.zeros(values.shape, dtype=np.int64)
    for q in range(1, Q_level):
        table = np.array([ramanujan_sum(q, r) for r in range(q)], dtype=np.int64)
        out += table[values % q]
    return out


def main_term(index_set: IndexSet, d: int, config: MajorArcConfig) -> float:
    """Closed-form major-arc mass at d (zero when Q_level = 1: no q < 1 arcs)."""
    if config.Q_level == 1:
        return 0.0
    m = frequencies(index_set, config.shift)
    vals, counts = np.unique(m, return_counts=True)
    x = vals - d
    weight = sinc_sq(config.Q_level * x / config.N) * _ramanujan_kernel(x, config.Q_level)
    return float(config.Q_level / config.N * (counts * weight).sum())


@dataclass(frozen=True)
class DecompositionResult:
    """Per-d split R = M + E over a window, with the small-representation flags."""

    window: tuple[int, int]
    config: MajorArcConfig
    index_set_label: str
    index_set_size: int
    ds: np.ndarray
    R: np.ndarray
    M: np.ndarray
    E: np.ndarray
    exceptional: list[int]    # d with R < M/2
    l2_error: float

    @property
    def normalized_l2(self) -> float:
        """l2_error * N / |index set|^2, the scale on which the error tail decays."""
        return self.l2_error * self.config.N / self.index_set_size**2

    def rows(self) -> list[tuple[int, int, float, float, int]]:
        return [(int(d), int(r), float(mm), float(e), int(d in set(self.exceptional)))
                for d, r, mm, e in zip(self.ds, self.R, self.M, self.E)]


def decompose(index_set: IndexSet, window: tuple[int, int],
              config: MajorArcConfig) -> DecompositionResult:
    """Representation counts against the main term over [window_lo, window_hi]."""
    lo, hi = window
    if not (1 <= lo <= hi <= math.isqrt(2 * config.N * config.N) + 1):
        raise DomainError(f"window {window} outside [1, sqrt(2) N]")
    m = frequencies(index_set, config.shift)
    vals, counts = np.unique(m, return_counts=True)
    ds = np.arange(lo, hi + 1)
    R = np.zeros(ds.size, dtype=np.int64)
    inside = (vals >= lo) & (vals <= hi)
    R[vals[inside] - lo] = counts[inside]

    kernel_cache: dict[int, np.ndarray] = {}
    M = np.zeros(ds.size)
    if config.Q_level > 1:
        for q in range(1, config.Q_level):
            kernel_cache[q] = np.array([ramanujan_sum(q, r) for r in range(q)],
                                       dtype=np.int64)
        for i, d in enumerate(ds):
            x = vals - d
            kern = np.zeros(x.shape, dtype=np.int64)
            for q, table in kernel_cache.items():
                kern += table[x % q]
            weight = sinc_sq(config.Q_level * x / config.N) * kern
            M[i] = config.Q_level / config.N * (counts * weight).sum()
    E = R - M
    exceptional = [int(d) for d, r, mm in zip(ds, R, M) if r < mm / 2]
    label = type(index_set).__name__
    return DecompositionResult((lo, hi), config, label, len(index_set.matrices),
                               ds, R, M, E, exceptional, float((E * E).sum()))


@dataclass(frozen=True)
class ArcRegion:
    """One dyadic (Q, K) cell of the Dirichlet decomposition of [0, 1]."""

    Q: int
    K: int
    branch: str            # "base" (|beta| < K/N') or "annulus" (K/2 <= |beta| N' < K)
    T_param: Optional[float]
    beta_lo: float
    beta_hi: float
    pair_count: int        # number of coprime (s, q) centers with Q/2 <= q < Q

    def measure(self) -> float:
        return self.pair_count * 2.0 * (self.beta_hi - self.beta_lo)


@dataclass(frozen=True)
class ArcPartition:
    N: int
    N_prime: float
    c_tilde: int
    regions: list[ArcRegion]

    def locate(self, theta: float) -> Optional[tuple[ArcRegion, int, int, float]]:
        """Region containing theta, with its Dirichlet witness (s, q, beta)."""
        s, q = _dirichlet_witness(theta, math.sqrt(self.N_prime))
        beta = theta - s / q
        Q = 1 << (q.bit_length())  # dyadic block with Q/2 <= q < Q
        for region in self.regions:
            if region.Q == Q and region.beta_lo <= abs(beta) < region.beta_hi:
                return region, s, q, beta
        return None

    def measure_sum(self) -> float:
        return sum(r.measure() for r in self.regions)

    def cover_fraction(self, thetas: np.ndarray) -> float:
        hits = sum(1 for t in thetas if self.locate(float(t)) is not None)
        return hits / len(thetas)


def _dirichlet_witness(theta: float, q_bound: float) -> tuple[int, int]:
    """Convergent s/q with q <= q_bound and |theta - s/q| < 1/(q * q_bound)."""
    p0, q0, p1, q1 = 0, 1, 1, 0
    x = theta
    for _ in range(64):
        a = math.floor(x)
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        if q1 > q_bound:
            return p0, q0
        if x == a:
            break
        x = 1.0 / (x - a)
    return p1, q1


def arc_partition(N: int, alphabet: Optional[Alphabet] = None,
                  c_tilde: int = 2**20) -> ArcPartition:
    """Dyadic (Q, K) region grid covering [0, 1].

    N' = 2^26 (A+1)^2 N sets the Dirichlet resolution.  Each dyadic block of
    denominators Q gets one base region |beta| < c_tilde/N' plus dyadic
    annuli with T = K Q^(3/2); the annuli extend one dyadic step past
    sqrt(N')/Q so the union provably reaches the Dirichlet radius 2/(Q sqrt(N')).
    """
    if N < 4:
        raise DomainError(f"need N >= 4, got {N}")
    A = alphabet.max if alphabet is not None else 1
    n_prime = float(2**26 * (A + 1) ** 2 * N)
    sqrt_np = math.sqrt(n_prime)
    regions: list[ArcRegion] = []
    Q = 2
    while Q // 2 <= sqrt_np:
        pairs = phi_summatory(Q - 1) - phi_summatory(Q // 2 - 1)
        regions.append(ArcRegion(Q, c_tilde, "base", None, 0.0, c_tilde / n_prime,
                                 pairs))
        K = 2 * c_tilde
        while K / 2 <= 2 * sqrt_np / Q:
            regions.append(ArcRegion(Q, K, "annulus", K * Q**1.5,
                                     K / (2 * n_prime), K / n_prime, pairs))
            K *= 2
        Q *= 2
    return ArcPartition(N, n_prime, c_tilde, regions)
