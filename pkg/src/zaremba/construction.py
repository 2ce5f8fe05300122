"""Auxiliary parameter schedules and sector sets for product-set constructions.

Schedule levels are N raised to exponents of the form alpha + beta*(1-r)^g;
with r held as an exact Fraction every structural identity (paired exponents
summing to 1, the four ratio branches) is decidable exactly, so those checks
never depend on floating point.  Logs are base 2 throughout, matching the
power-of-two brackets the level-count formula is calibrated against.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .cf_core import Alphabet
from .errors import DomainError, EnumerationOverflowError, ResourceError, SectorUnrealizableError
from .orbit import DET_PLUS_ONE, density_point, enumerate_ball, expanding_eigen_arrays


def _exponent(j: int, r: Fraction, J1: int, J: int) -> Fraction:
    """Exact level exponent e_j, by the four-branch definition."""
    one_m_r = 1 - r
    if j == J + 1:
        return Fraction(1)
    if -J <= j <= -J1:
        return Fraction(1, 4) * one_m_r ** (-j - J1)
    if -J1 < j <= 0:
        return Fraction(1, 4) + Fraction(1, 4) * one_m_r ** (-j)
    if 0 <= j < J1:
        return Fraction(3, 4) - Fraction(1, 4) * one_m_r**j
    if J1 <= j <= J:
        return Fraction(1) - Fraction(1, 4) * one_m_r ** (j - J1)
    raise DomainError(f"index {j} outside [-J, J+1] = [{-J}, {J + 1}]")


def _ratio_branch(m: int, r: Fraction, J1: int) -> Fraction:
    """Closed form for e_{m+1} - e_m (the level-ratio exponent)."""
    if -J1 + 1 <= m <= J1 - 2:
        g = m if m >= 0 else -m - 1
        return Fraction(r, 4) * (1 - r) ** g
    if m in (-J1, J1 - 1):
        return Fraction(1, 4) * (1 - r) ** (J1 - 1)
    g = (m if m >= 0 else -m - 1) - J1
    return Fraction(r, 4) * (1 - r) ** g


@dataclass(frozen=True)
class Schedule:
    """Level ladder N^(e_j) for j in [-J, J+1], with exact exponents."""

    N: float
    r: Fraction
    C_r: float
    J1: int
    J2: int
    J: int
    J2_formula: int      # the ceiling-formula value before structural clamping
    exponents: dict[int, Fraction]

    def level(self, j: int) -> float:
        return self.N ** float(self.exponents[j])

    def indices(self) -> range:
        return range(-self.J, self.J + 2)

    def ratio_exponent(self, m: int) -> Fraction:
        return self.exponents[m + 1] - self.exponents[m]

    def check_identities(self) -> dict[str, bool]:
        """Exact exponent-space identities plus the C_r-dependent inequalities.

        The named inequalities are reported, not enforced; the constant C_r is
        only ever pinned down asymptotically.
        """
        e = self.exponents
        log2N = math.log2(self.N)
        ratio_floor = float(self.r) * 2.0 ** (self.C_r - 2)
        out = {
            "e0 == 1/2": e[0] == Fraction(1, 2),
            "e_-J1 == 1/4": e[-self.J1] == Fraction(1, 4),
            "e_J1 == 3/4": e[self.J1] == Fraction(3, 4),
            "paired exponents sum to 1": all(
                e[m] + e[-m] == 1 for m in range(-self.J, self.J + 1)),
            "strictly increasing": all(
                e[j + 1] > e[j] for j in range(-self.J, self.J + 1)),
            "ratio branch formulas": all(
                self.ratio_exponent(m) == _ratio_branch(m, self.r, self.J1)
                for m in range(-self.J, self.J)),
            "N_m >= N_{m+1}^(1-r)": all(
                e[m] >= (1 - self.r) * e[m + 1] for m in range(-self.J, self.J)),
            "ratio lower bound 2^(r 2^(C-2))": all(
                float(self.ratio_exponent(m)) * log2N >= ratio_floor
                for m in range(-self.J, self.J)),
            "J2 > 2 J1 + 2 (formula value)": self.J2_formula > 2 * self.J1 + 2,
        }
        return out

    def log_ratio_sum_report(self) -> tuple[float, float]:
        """(sum_j 1/log2(N_{j+1}/N_j), reference 32/(r^2 (1-r) 2^C_r))."""
        log2N = math.log2(self.N)
        total = sum(1.0 / (float(self.ratio_exponent(m)) * log2N)
                    for m in range(-self.J, self.J + 1))
        r = float(self.r)
        return total, 32.0 / (r * r * (1 - r) * 2.0**self.C_r)


def bracket_J1(r: Fraction) -> int:
    """The integer with (1-r)^J1 <= r < (1-r)^(J1-1)."""
    j = 1
    while (1 - r) ** j > r:
        j += 1
    return j


def build_schedule(N: float, r, C_r: float) -> Schedule:
    """Build the level ladder for ball bound N, spacing parameter r, constant C_r.

    The level count J2 comes from ceil((log2 log2 N - C_r) / -log2(1 - r)); when
    that is too small for the structural requirement J2 > 2 J1 + 2 (every desk
    N is, for small r) the build clamps to the smallest valid value and keeps
    the formula value in the report.
    """
    r = Fraction(r)
    if not 0 < r < 1:
        raise DomainError(f"spacing parameter must be in (0, 1), got {r}")
    if N <= math.exp(C_r):
        raise DomainError(f"need N > e^C_r = {math.exp(C_r):.4g}, got {N}")
    if N <= 4:
        raise DomainError(f"need N > 4 so log2 log2 N is positive, got {N}")
    J1 = bracket_J1(r)
    J2_formula = math.ceil((math.log2(math.log2(N)) - C_r) / -math.log2(1 - float(r)))
    J2 = max(J2_formula, 2 * J1 + 3)
    if J2 != J2_formula:
        warnings.warn(
            f"J2 formula gives {J2_formula}, violating J2 > 2 J1 + 2 = {2 * J1 + 2}; "
            f"clamped to {J2}", stacklevel=2)
    J = J1 + J2
    exponents = {j: _exponent(j, r, J1, J) for j in range(-J, J + 2)}
    return Schedule(float(N), r, float(C_r), J1, J2, J, J2_formula, exponents)


@dataclass(frozen=True)
class LocatedIndex:
    j: int
    h: int
    inequalities: dict[str, bool]

    @property
    def all_hold(self) -> bool:
        return all(self.inequalities.values())


def admissible_M_range(schedule: Schedule) -> tuple[float, float]:
    lo = 2.0 ** (2.0 ** (schedule.C_r - 2) / (1.0 - float(schedule.r)))
    hi = schedule.N ** (1.0 - float(schedule.r))
    return lo, hi


def locate_index(schedule: Schedule, M: float) -> LocatedIndex:
    """Find j with N_{j-1} <= M <= N_j, plus the mirrored N/N_{h-1} bounds.

    The mirror index is h = 1 - j, so that N/N_{h-1} = N_j by the pairing
    identity and the mirrored chain provably holds.
    """
    lo, hi = admissible_M_range(schedule)
    if not lo <= M < hi:
        raise DomainError(f"M = {M:.6g} outside the admissible range [{lo:.6g}, {hi:.6g})")
    t = math.log2(M) / math.log2(schedule.N)
    j = None
    for cand in range(-schedule.J + 1, schedule.J):
        if t <= float(schedule.exponents[cand]) + 1e-12:
            j = cand
            break
    if j is None:
        raise DomainError(f"M = {M:.6g} above every level up to J-1")
    h = 1 - j
    r = float(schedule.r)
    Nj = schedule.level(j)
    mirror = schedule.N / schedule.level(h - 1)
    slack = 1 + 1e-9
    ineqs = {
        "N_j^(1-r) <= M": Nj ** (1 - r) <= M * slack,
        "M <= N_j": M <= Nj * slack,
        "N_j <= M^(1+2r)": Nj <= M ** (1 + 2 * r) * slack,
        "(N/N_{h-1})^(1-r) <= M": mirror ** (1 - r) <= M * slack,
        "M <= N/N_{h-1}": M <= mirror * slack,
        "N/N_{h-1} <= M^(1+2r)": mirror <= M ** (1 + 2 * r) * slack,
    }
    return LocatedIndex(j, h, ineqs)


@dataclass(frozen=True)
class SectorSet:
    """Ball elements with eigenvalue in (L(1 - 1/log L), L), eigenvector within
    1/H of the density direction, and one common wordlength (in pair generators)."""

    alphabet: Alphabet
    M: float
    H: float
    L: float
    wordlength: int
    matrices: np.ndarray
    lambdas: np.ndarray

    def __len__(self) -> int:
        return len(self.matrices)


def build_sector_set(alphabet: Alphabet, M: float, H: float,
                     L_grid: int = 48, threads: int = 1) -> SectorSet:
    """Realize a sector set by filtering the enumerated ball.

    Scans candidate eigenvalue caps L across [M/4, 4M] and keeps the (L, k)
    slice of maximal cardinality, restricting to the modal pair-wordlength k
    (ties prefer smaller k, then smaller L).
    """
    if M < 8:
        raise DomainError(f"scale M must be >= 8, got {M}")
    if H <= 0:
        raise DomainError(f"cone parameter H must be positive, got {H}")
    if H >= math.exp(math.sqrt(math.log(M))):
        warnings.warn(f"H = {H:.3g} above e^sqrt(log M) = "
                      f"{math.exp(math.sqrt(math.log(M))):.3g}; sector may be empty",
                      stacklevel=2)
    _, v0 = density_point(alphabet)
    ball = enumerate_ball(alphabet, math.ceil(8 * M) + 2, DET_PLUS_ONE, threads)
    lam, vecs = expanding_eigen_arrays(ball.matrices)
    cone = np.linalg.norm(vecs - v0[None, :], axis=1) < 1.0 / H

    best = None
    for L in np.geomspace(M / 4, 4 * M, L_grid):
        window = (lam > L * (1.0 - 1.0 / math.log(L))) & (lam < L) & cone
        if not window.any():
            continue
        pair_len = ball.lengths[window] // 2
        ks, counts = np.unique(pair_len, return_counts=True)
        top = counts.max()
        k = int(ks[counts == top].min())
        score = (int(top), -k, -L)
        if best is None or score > best[0]:
            idx = np.nonzero(window)[0][pair_len == k]
            best = (score, float(L), k, idx)
    if best is None:
        raise SectorUnrealizableError(
            f"sector unrealizable at this scale (M = {M:.6g}, H = {H:.6g})")
    _, L, k, idx = best
    return SectorSet(alphabet, float(M), float(H), L, k,
                     ball.matrices[idx], lam[idx])


@dataclass(frozen=True)
class ProductSet:
    """All ordered products of the factor sector sets (unique by wordlength)."""

    factors: tuple[SectorSet, ...]
    matrices: np.ndarray
    expected_size: int

    def __len__(self) -> int:
        return len(self.matrices)

    def lambdas(self) -> np.ndarray:
        lam, _ = expanding_eigen_arrays(self.matrices)
        return lam

    @property
    def denominator_column(self) -> np.ndarray:
        return self.matrices[:, 3]


PRODUCT_SIZE_BUDGET = 5_000_000


def concat_product(parts: list[SectorSet]) -> ProductSet:
    """Ordered product of sector sets; the fixed wordlengths force unique factorization."""
    if not parts:
        raise DomainError("need at least one sector set")
    if any(len(p) == 0 for p in parts):
        raise DomainError("every factor must be nonempty")
    expected = math.prod(len(p) for p in parts)
    if expected > PRODUCT_SIZE_BUDGET:
        raise ResourceError(f"product would hold {expected} elements, over budget")
    # entries of a 2x2 product are bounded by 2 * product of max entries
    log_bound = sum(math.log2(2.0 * float(p.matrices.max())) for p in parts)
    if log_bound >= 62:
        raise EnumerationOverflowError(
            f"product entries could reach 2^{log_bound:.0f}, over the int64 bound")
    cur = parts[0].matrices
    for part in parts[1:]:
        x = cur.reshape(-1, 2, 2)
        y = part.matrices.reshape(-1, 2, 2)
        cur = np.einsum("nij,mjk->nmik", x, y).reshape(-1, 4)
    if np.unique(cur, axis=0).shape[0] != expected:
        raise AssertionError("product collision; factorization should be unique")
    return ProductSet(tuple(parts), cur, expected)
