from fractions import Fraction

import numpy as np
import pytest

from cocycle import chain
from cocycle.chain import (
    STATE_CODES,
    SquareState,
    backward_completion_distribution,
    complete_square,
    completions,
    derive_transition_matrix,
    reversal_check,
    reversed_matrix,
    stationary_distribution,
    stationary_residual,
)
from cocycle.errors import DomainError
from cocycle.lattice import SquareLabels

GRID = [Fraction(k, 100) for k in range(5, 100, 5)]


def closed_form_stationary(p):
    q = 1 - p
    law = {"0000": p * q / 2, "0110": p * q / 2, "1111": p * q / 2, "1001": p * q / 2,
           "0101": p * p, "1010": q * q}
    return tuple(law[c] for c in STATE_CODES)


def test_completions_forced_and_free():
    assert completions(0, 1) == [SquareLabels(0, 1, 0, 1)]
    assert completions(1, 0) == [SquareLabels(1, 0, 1, 0)]
    assert completions(1, 1) == [SquareLabels(1, 1, 1, 1), SquareLabels(1, 0, 0, 1)]
    assert completions(0, 0) == [SquareLabels(0, 1, 1, 0), SquareLabels(0, 0, 0, 0)]


def test_complete_square_coin():
    assert complete_square(0, 0, True).code == "0110"
    assert complete_square(0, 0, lambda: 0).code == "0000"
    calls = []
    complete_square(1, 0, lambda: calls.append(1))
    assert calls == []
    assert SquareState.from_code("1111").labels == SquareLabels(1, 1, 1, 1)


@pytest.mark.parametrize("p", GRID)
def test_rows_sum_to_one_exactly(p):
    P = derive_transition_matrix(p)
    assert all(s == 1 for s in P.row_sums())
    assert np.max(np.abs(P.array.sum(axis=1) - 1)) <= 1e-12


def test_spot_entries():
    for p in GRID:
        P = derive_transition_matrix(p)
        assert P["0000", "0101"] == p
        assert P["0110", "1010"] == 1 - p
        assert P["0000", "0110"] == (1 - p) / 2


def _mc_transition(p, n, seed):
    # direct simulation of one strip: fresh bottom labels, uniform completion
    rng = np.random.default_rng(seed)
    counts = np.zeros((6, 6))
    left = 0
    prev = None
    for b, c in zip(rng.random(n) < p, rng.random(n) < 0.5):
        s = complete_square(left, int(b), bool(c))
        if prev is not None:
            counts[prev, s.index] += 1
        prev = s.index
        left = s.labels.right
    return counts / counts.sum(axis=1, keepdims=True)


def test_matrix_matches_simulation():
    est = _mc_transition(0.3, 200_000, 0)
    P = derive_transition_matrix(Fraction(3, 10)).array
    assert np.max(np.abs(est - P)) < 0.01


@pytest.mark.parametrize("p", GRID)
def test_stationary_closed_form_and_residual(p):
    P = derive_transition_matrix(p)
    pi = stationary_distribution(P)
    assert pi.exact == closed_form_stationary(p)
    assert stationary_residual(P, pi.probs) <= 1e-12
    assert np.allclose(pi.probs, [float(x) for x in closed_form_stationary(p)], atol=1e-12)


@pytest.mark.parametrize("p", GRID)
def test_reversal(p):
    P = derive_transition_matrix(p)
    pi = stationary_distribution(P)
    assert reversal_check(P, pi)


def test_reversal_fails_without_swap():
    P = derive_transition_matrix(Fraction(3, 10))
    pi = stationary_distribution(P)
    A = P.array
    plain = (A.T * pi.probs[None, :]) / pi.probs[:, None]
    assert np.max(np.abs(plain - A)) > 0.1
    assert np.max(np.abs(reversed_matrix(P, pi) - A)) <= 1e-12


def test_stationary_marginals_are_p():
    for p in GRID:
        pi = stationary_distribution(derive_transition_matrix(p))
        assert abs(pi.marginal("top") - float(p)) <= 1e-12
        assert abs(pi.marginal("bottom") - float(p)) <= 1e-12
        assert abs(pi.marginal("left") - float(1 - p)) <= 1e-12


def test_symmetric_point():
    pi = stationary_distribution(derive_transition_matrix(Fraction(1, 2)))
    assert pi["0101"] == pi["1010"] == Fraction(1, 4)


@pytest.mark.parametrize("p", [Fraction(1, 5), Fraction(1, 2), Fraction(4, 5)])
def test_backward_completion(p):
    P = derive_transition_matrix(p)
    table = backward_completion_distribution(P, stationary_distribution(P))
    assert table[(1, 1)] == {(0, 0): Fraction(1, 2), (1, 1): Fraction(1, 2)}
    assert table[(0, 0)] == {(0, 0): Fraction(1, 2), (1, 1): Fraction(1, 2)}
    # unequal top/right forces left = right, bottom = top
    assert table[(1, 0)] == {(0, 1): 1}
    assert table[(0, 1)] == {(1, 0): 1}


def test_domain_errors():
    for bad in (0, 1, Fraction(3, 2), -0.1):
        with pytest.raises(DomainError):
            derive_transition_matrix(bad)


def test_float_input_is_accepted():
    P = derive_transition_matrix(0.25)
    assert P.p == Fraction(1, 4)


def test_stationary_of_plain_array():
    A = derive_transition_matrix(Fraction(2, 5)).array
    pi = stationary_distribution(A)
    assert pi.exact is None
    assert stationary_residual(A, pi.probs) <= 1e-12
    with pytest.raises(ValueError):
        stationary_distribution(np.eye(3))


def test_constants():
    assert chain.STATIONARY_TOL == 1e-12
    assert {STATE_CODES[i] for i in chain.SWAP} == {"0110", "1001"}
