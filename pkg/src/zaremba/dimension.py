"""Hausdorff dimension of the bounded-quotient Cantor set.

The dimension is the root of lambda(s) = 1, where lambda(s) is the leading
eigenvalue of the weighted composition operator

    (L_s f)(x) = sum_{a in alphabet} (a + x)^(-2s) f(1/(a + x))

discretized by polynomial collocation at Chebyshev points.  The kernel is
analytic, so the discretization converges spectrally; doubling the order
until the root stops moving gives the convergence certificate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import brentq

from .cf_core import Alphabet
from .errors import DomainError, NumericalError

DEFAULT_ORDER = 32
MAX_ORDER = 256


def _chebyshev_nodes(order: int, lo: float, hi: float) -> np.ndarray:
    k = np.arange(order)
    x = np.cos(np.pi * k / (order - 1))
    return lo + (hi - lo) * (x + 1.0) / 2.0


def _barycentric_weights(order: int) -> np.ndarray:
    w = np.ones(order)
    w[1::2] = -1.0
    w[0] *= 0.5
    w[-1] *= 0.5
    return w


def _interp_rows(y: np.ndarray, nodes: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Rows of barycentric cardinal values: f(y_i) = sum_j rows[i, j] f(x_j)."""
    diff = y[:, None] - nodes[None, :]
    exact_i, exact_j = np.nonzero(diff == 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        rows = weights[None, :] / diff
        rows /= rows.sum(axis=1)[:, None]
    if exact_i.size:
        rows[exact_i, :] = 0.0
        rows[exact_i, exact_j] = 1.0
    return rows


def _collocation_matrix(alphabet: Alphabet, s: float, order: int,
                        lo: float, hi: float) -> np.ndarray:
    x = _chebyshev_nodes(order, lo, hi)
    w = _barycentric_weights(order)
    M = np.zeros((order, order))
    for a in alphabet:
        M += ((a + x) ** (-2.0 * s))[:, None] * _interp_rows(1.0 / (a + x), x, w)
    return M


def _domain(alphabet: Alphabet, shrink: bool) -> tuple[float, float]:
    # For min(alphabet) = m the Cantor set lives in [0, 1/m]; shrinking the
    # collocation interval to its hull improves conditioning.
    return (0.0, 1.0 / alphabet.min) if shrink else (0.0, 1.0)


def _power_iteration(M: np.ndarray, tol: float = 1e-14, max_iter: int = 10000) -> float:
    n = M.shape[0]
    v = np.full(n, 1.0 / math.sqrt(n))
    lam = 0.0
    for _ in range(max_iter):
        w = M @ v
        lam_new = float(v @ w)
        norm = np.linalg.norm(w)
        if norm == 0.0:
            raise NumericalError("power iteration collapsed to zero", residual=abs(lam))
        v = w / norm
        if abs(lam_new - lam) < tol * max(1.0, abs(lam_new)):
            return lam_new
        lam = lam_new
    raise NumericalError(
        f"power iteration did not converge in {max_iter} steps",
        residual=abs(lam_new - lam))


def transfer_eigenvalue(alphabet: Alphabet, s: float, order: int = DEFAULT_ORDER,
                        domain_shrink: bool = True) -> float:
    """Leading eigenvalue of the discretized operator at contraction exponent s."""
    if not (0.0 < s <= 1.0):
        raise DomainError(f"exponent s must be in (0, 1], got {s}")
    if order < 4:
        raise DomainError(f"collocation order must be >= 4, got {order}")
    lo, hi = _domain(alphabet, domain_shrink)
    return _power_iteration(_collocation_matrix(alphabet, s, order, lo, hi))


@dataclass(frozen=True)
class DimensionEstimate:
    alphabet: Alphabet
    delta: float
    collocation_order: int
    residual: float     # |lambda(delta) - 1| at the final order
    converged: bool


def dimension(alphabet: Alphabet, tol: float = 1e-8,
              domain_shrink: bool = True) -> DimensionEstimate:
    """Hausdorff dimension by root-finding lambda(s) = 1, order-doubled to convergence.

    A singleton alphabet spans a one-point set, so its dimension is exactly 0.
    """
    if tol < 1e-10:
        raise DomainError(f"tolerance must be >= 1e-10, got {tol}")
    if len(alphabet) == 1:
        return DimensionEstimate(alphabet, 0.0, 0, 0.0, True)
    lo, hi = _domain(alphabet, domain_shrink)
    threshold = max(tol, 1e-8)

    def solve(order: int) -> float:
        f = lambda s: _power_iteration(_collocation_matrix(alphabet, s, order, lo, hi)) - 1.0
        try:
            return float(brentq(f, 1e-9, 1.0, xtol=1e-13, rtol=8.9e-16))
        except ValueError as exc:
            raise NumericalError(f"bracketing failed at order {order}: {exc}") from exc

    order = DEFAULT_ORDER
    delta = solve(order)
    while order * 2 <= MAX_ORDER:
        delta_next = solve(order * 2)
        order *= 2
        if abs(delta_next - delta) < threshold:
            residual = abs(_power_iteration(
                _collocation_matrix(alphabet, delta_next, order, lo, hi)) - 1.0)
            return DimensionEstimate(alphabet, delta_next, order, residual, True)
        delta = delta_next
    residual = abs(_power_iteration(
        _collocation_matrix(alphabet, delta, order, lo, hi)) - 1.0)
    return DimensionEstimate(alphabet, delta, order, residual, False)


def hensley_asymptotic(A: int) -> float:
    """Two-term expansion of the dimension of {1, ..., A}; the O(1/A^2) tail is dropped."""
    if A < 2:
        raise DomainError(f"need A >= 2, got {A}")
    return 1.0 - 6.0 / (math.pi**2 * A) - 72.0 * math.log(A) / (math.pi**4 * A * A)


@dataclass(frozen=True)
class OrderingResult:
    smaller_added: int
    larger_added: int
    delta_with_smaller: float
    delta_with_larger: float
    margin: float
    indeterminate: bool

    @property
    def holds(self) -> Optional[bool]:
        if self.indeterminate:
            return None
        return self.delta_with_smaller > self.delta_with_larger


def dimension_ordering_check(base: Alphabet, n1: int, n2: int,
                             tol: float = 1e-8) -> OrderingResult:
    """Compare dimensions after augmenting by n1 versus by n2 (n1 < n2, both new).

    Adding the smaller integer should give the larger dimension; estimates
    closer than the combined solver tolerance come back indeterminate.
    """
    if not n1 < n2:
        raise DomainError(f"need n1 < n2, got {n1}, {n2}")
    if n1 in base or n2 in base:
        raise DomainError("augmenting integers must not already be members")
    e1 = dimension(Alphabet(base.members + (n1,)), tol)
    e2 = dimension(Alphabet(base.members + (n2,)), tol)
    margin = e1.delta - e2.delta
    combined = 2 * max(tol, 1e-8) + e1.residual + e2.residual
    return OrderingResult(n1, n2, e1.delta, e2.delta, margin,
                          indeterminate=abs(margin) < combined)
