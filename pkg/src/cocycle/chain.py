"""Exact algebra of the strip construction's six-state plaquette chain.

A plaquette whose left and bottom labels are known is completed by choosing,
uniformly, one of the residual-zero (top, right) pairs. Reading one strip
left to right, the sequence of completed plaquettes is a Markov chain on the
six consistent labellings. Everything here is derived from that rule by
enumeration; no matrix entry is written by hand.
"""
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import NamedTuple

import numpy as np

from .errors import ConvergenceFailure, DomainError
from .lattice import SquareLabels, plaquette_residual

STATE_CODES = ("0110", "1001", "1010", "0101", "1111", "0000")
STATES = tuple(SquareLabels.from_code(c) for c in STATE_CODES)
INDEX = {s: i for i, s in enumerate(STATES)}
# the two strips' orientation reversal exchanges these two states
SWAP = (INDEX[SquareLabels.from_code("0110")], INDEX[SquareLabels.from_code("1001")])

POWER_ITERATIONS = 100_000
STATIONARY_TOL = 1e-12


class SquareState(NamedTuple):
    index: int

    @property
    def labels(self) -> SquareLabels:
        return STATES[self.index]

    @property
    def code(self) -> str:
        return STATE_CODES[self.index]

    @classmethod
    def from_code(cls, code: str) -> "SquareState":
        return cls(STATE_CODES.index(code))

    @classmethod
    def from_labels(cls, sq: SquareLabels) -> "SquareState":
        return cls(INDEX[sq])


def completions(left: int, bottom: int):
    """Residual-zero plaquettes with the given left and bottom labels.

    Ordered so that the ``top = right = 1`` completion comes first.
    """
    found = [
        SquareLabels(left, top, right, bottom)
        for top, right in product((1, 0), repeat=2)
        if plaquette_residual(SquareLabels(left, top, right, bottom)) == 0
    ]
    return found


def _as_probability(p):
    if isinstance(p, (Fraction, int)):
        p = Fraction(p)
    else:
        p = Fraction(float(p))
    if not 0 < p < 1:
        raise DomainError(f"p must lie in (0, 1), got {float(p)}")
    return p


def complete_square(left: int, bottom: int, coin) -> SquareState:
    """Complete a plaquette from its left and bottom labels.

    ``coin`` is either a truthy/falsy value or a zero-argument callable
    returning one; heads selects ``top = right = 1`` when two completions
    exist. It is only consulted when ``left == bottom``.
    """
    options = completions(left, bottom)
    if len(options) == 1:
        return SquareState.from_labels(options[0])
    heads = coin() if callable(coin) else coin
    return SquareState.from_labels(options[0] if heads else options[1])


@dataclass(frozen=True)
class TransitionMatrix6:
    """Row-stochastic 6x6 matrix with exact rational entries."""

    p: Fraction
    entries: tuple

    @property
    def array(self) -> np.ndarray:
        return np.array([[float(e) for e in row] for row in self.entries])

    def row_sums(self):
        return tuple(sum(row, Fraction(0)) for row in self.entries)

    def __getitem__(self, key):
        src, dst = key
        if isinstance(src, str):
            src = STATE_CODES.index(src)
        if isinstance(dst, str):
            dst = STATE_CODES.index(dst)
        return self.entries[src][dst]


def derive_transition_matrix(p) -> TransitionMatrix6:
    """Transition matrix of the strip chain at bottom-label probability ``p``.

    Given the current plaquette ``s``, the next one has left label
    ``right(s)``, a fresh Bernoulli(p) bottom label, and is completed
    uniformly among its consistent options.
    """
    p = _as_probability(p)
    weights = {1: p, 0: 1 - p}
    rows = []
    for s in STATES:
        row = [Fraction(0)] * 6
        for bottom, w in weights.items():
            options = completions(s.right, bottom)
            for nxt in options:
                row[INDEX[nxt]] += w / len(options)
        rows.append(tuple(row))
    return TransitionMatrix6(p, tuple(rows))


@dataclass(frozen=True)
class Dist6:
    probs: np.ndarray
    exact: tuple = None

    def __getitem__(self, code):
        i = STATE_CODES.index(code) if isinstance(code, str) else code
        if self.exact is not None:
            return self.exact[i]
        return float(self.probs[i])

    def marginal(self, edge: str) -> float:
        """Probability that the named plaquette edge carries label 1."""
        return float(sum(self.probs[i] for i, s in enumerate(STATES) if getattr(s, edge) == 1))


def _matrix(P) -> np.ndarray:
    A = P.array if isinstance(P, TransitionMatrix6) else np.asarray(P, dtype=np.float64)
    if A.shape != (6, 6):
        raise ValueError("expected a 6x6 matrix")
    return A


def _exact_stationary(entries):
    # solve pi (P - I) = 0 with sum(pi) = 1 by Gauss-Jordan over the rationals
    n = len(entries)
    rows = [[entries[j][i] - (1 if i == j else 0) for j in range(n)] for i in range(n - 1)]
    rows.append([Fraction(1)] * n)
    rhs = [Fraction(0)] * (n - 1) + [Fraction(1)]
    for col in range(n):
        piv = next((r for r in range(col, n) if rows[r][col] != 0), None)
        if piv is None:
            raise ConvergenceFailure("singular stationary system")
        rows[col], rows[piv] = rows[piv], rows[col]
        rhs[col], rhs[piv] = rhs[piv], rhs[col]
        inv = 1 / rows[col][col]
        rows[col] = [e * inv for e in rows[col]]
        rhs[col] *= inv
        for r in range(n):
            if r != col and rows[r][col] != 0:
                factor = rows[r][col]
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[col])]
                rhs[r] -= factor * rhs[col]
    return tuple(rhs)


def stationary_residual(A, pi) -> float:
    A = _matrix(A)
    return float(np.max(np.abs(pi @ A - pi)))


def stationary_distribution(P, iterations: int = POWER_ITERATIONS) -> Dist6:
    """Stationary law by power iteration, falling back to a linear solve.

    Exact rational probabilities are attached when ``P`` carries rational
    entries.

    Raises
    ------
    ConvergenceFailure
        If neither route reaches ``||pi P - pi||_inf <= 1e-12``.
    """
    A = _matrix(P)
    pi = np.full(6, 1.0 / 6.0)
    converged = False
    for _ in range(iterations):
        nxt = pi @ A
        nxt /= nxt.sum()
        if np.max(np.abs(nxt - pi)) <= STATIONARY_TOL / 10:
            pi = nxt
            converged = True
            break
        pi = nxt
    if not converged or stationary_residual(A, pi) > STATIONARY_TOL:
        M = np.vstack([A.T - np.eye(6), np.ones((1, 6))])
        b = np.zeros(7)
        b[-1] = 1.0
        pi = np.linalg.lstsq(M, b, rcond=None)[0]
        if np.any(pi < -STATIONARY_TOL) or stationary_residual(A, pi) > STATIONARY_TOL:
            raise ConvergenceFailure("stationary distribution did not converge")
        pi = np.clip(pi, 0.0, None)
        pi /= pi.sum()
    exact = None
    if isinstance(P, TransitionMatrix6):
        exact = _exact_stationary(P.entries)
    return Dist6(pi, exact)


def _swap_perm():
    perm = list(range(6))
    a, b = SWAP
    perm[a], perm[b] = b, a
    return perm


def reversed_matrix(P, pi) -> np.ndarray:
    """Time reversal of the state-swapped chain.

    ``P'`` exchanges the rows and columns of ``0110`` and ``1001``; the
    result is ``Q[i, j] = pi'[j] P'[j, i] / pi'[i]``.
    """
    A = _matrix(P)
    probs = pi.probs if isinstance(pi, Dist6) else np.asarray(pi, dtype=np.float64)
    perm = _swap_perm()
    Ap = A[np.ix_(perm, perm)]
    pip = probs[perm]
    return (Ap.T * pip[None, :]) / pip[:, None]


def reversal_check(P, pi, tol: float = 1e-9) -> bool:
    """True iff the reversed, state-swapped chain has transition matrix ``P``."""
    return bool(np.max(np.abs(reversed_matrix(P, pi) - _matrix(P))) <= tol)


def backward_completion_distribution(P, pi):
    """Law of (left, bottom) given (top, right) under the stationary plaquette law.

    Returns ``{(top, right): {(left, bottom): probability}}``. Probabilities
    are exact fractions when ``pi`` carries exact values.
    """
    table = {}
    for top, right in product((0, 1), repeat=2):
        masses = {}
        for i, s in enumerate(STATES):
            if s.top == top and s.right == right:
                w = pi.exact[i] if getattr(pi, "exact", None) is not None else float(pi.probs[i])
                masses[(s.left, s.bottom)] = masses.get((s.left, s.bottom), 0) + w
        total = sum(masses.values())
        table[(top, right)] = {k: w / total for k, w in masses.items()}
    return table
