"""Matroid oracles: matching rank vs brute force, axioms, positroid tests."""

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from wlpoles.diagrams import Propagator, WilsonLoopDiagram, enumerate_diagrams
from wlpoles.errors import InconsistencyError
from wlpoles.exact import mat_rank
from wlpoles.matroids import (
    MatrixMatroid,
    TransversalMatroid,
    check_rank_oracle,
    is_cyclic_interval,
    is_positroid,
    numeric_rank_probe,
    structure,
)
from wlpoles.positroids import diagram_matroid
from wlpoles.sampling import seeded_rng


def brute_matching_rank(rows, S):
    """Largest subset of S matchable into distinct rows containing it."""
    S = sorted(set(S))
    best = 0
    for size in range(len(S), 0, -1):
        for cols in itertools.combinations(S, size):
            for assign in itertools.permutations(range(len(rows)), size):
                if all(cols[i] in rows[assign[i]] for i in range(size)):
                    return size
    return best


set_systems = st.lists(
    st.sets(st.integers(1, 7), min_size=1, max_size=5), min_size=1, max_size=4
)


@given(set_systems, st.sets(st.integers(1, 7)))
@settings(max_examples=150, deadline=None)
def test_matching_rank_matches_brute_force(rows, S):
    M = TransversalMatroid(7, [frozenset(r) for r in rows])
    assert M.rank(S) == brute_matching_rank(rows, S)


@given(set_systems, st.sets(st.integers(1, 7)), st.sets(st.integers(1, 7)))
@settings(max_examples=120, deadline=None)
def test_rank_submodular_monotone(rows, A, B):
    M = TransversalMatroid(7, [frozenset(r) for r in rows])
    assert M.rank(A | B) + M.rank(A & B) <= M.rank(A) + M.rank(B)
    assert M.rank(A) <= M.rank(A | B) <= M.rank(A) + len(B - A)


@given(set_systems, st.integers(0, 2**16))
@settings(max_examples=100, deadline=None)
def test_matching_rank_equals_numeric_probe(rows, seed):
    M = TransversalMatroid(7, [frozenset(r) for r in rows])
    S = frozenset(range(1, 8))
    assert M.rank(S) == numeric_rank_probe(M, S, seed)


def test_check_rank_oracle_runs():
    M = TransversalMatroid(6, [{1, 2, 4, 5}, {1, 2, 3, 4}])
    assert check_rank_oracle(M, {1, 2, 3, 4, 5, 6}) == 2


def test_basis_exchange_sampled():
    rng = seeded_rng(11, "exchange")
    for W in enumerate_diagrams(2, 7)[:8]:
        M = diagram_matroid(W)
        bases = sorted(M.bases(), key=sorted)
        for _ in range(20):
            B1 = bases[rng.randrange(len(bases))]
            B2 = bases[rng.randrange(len(bases))]
            for x in B1 - B2:
                assert any(
                    (B1 - {x}) | {y} in M.bases() for y in B2 - B1
                ), f"exchange fails for {sorted(B1)}, {sorted(B2)}"


def test_circuits_are_minimal_dependent():
    M = TransversalMatroid(6, [{1, 2, 4, 5}, {1, 2, 3, 4}])
    for C in M.circuits():
        assert M.rank(C) == len(C) - 1
        for x in C:
            assert M.rank(C - {x}) == len(C) - 1


def test_closure_and_flats():
    M = TransversalMatroid(6, [{1, 2, 4, 5}, {1, 2, 3, 4}])
    for F in M.flats():
        assert M.closure(F) == F
    S = {1, 2}
    cl = M.closure(S)
    assert S <= cl
    assert M.rank(cl) == M.rank(S)


def test_uniform_u24_has_no_flacets():
    M = TransversalMatroid(4, [{1, 2, 3, 4}, {1, 2, 3, 4}])
    assert M.k == 2
    assert structure(M).flacets == ()
    assert is_positroid(M).ok


def test_flacets_are_cyclic_flats():
    for W in enumerate_diagrams(2, 6):
        M = diagram_matroid(W)
        cyclic = set(M.cyclic_flats())
        for F in M.flacets():
            assert F in cyclic


def test_diagram_matroids_pass_positroid_test():
    for W in enumerate_diagrams(2, 7):
        verdict = is_positroid(diagram_matroid(W), expect=True)
        assert verdict.ok


def test_is_cyclic_interval():
    assert is_cyclic_interval({5, 6, 1}, 6)
    assert is_cyclic_interval({2, 3}, 6)
    assert is_cyclic_interval(set(), 6)
    assert is_cyclic_interval({1, 2, 3, 4, 5, 6}, 6)
    assert not is_cyclic_interval({1, 3}, 6)


def test_matrix_matroid_agrees_with_transversal_on_generic_rows():
    for W in enumerate_diagrams(2, 6)[:6]:
        rows = W.supports()
        from wlpoles.exact import Polynomial, VarId

        sym = [
            {c: Polynomial.variable(VarId(r0, c)) for c in sorted(sup)}
            for r0, sup in enumerate(rows, start=1)
        ]
        Mt = TransversalMatroid(W.n, rows)
        Mx = MatrixMatroid(W.n, sym)
        assert Mt.bases() == Mx.bases()


def test_restrict_contract_ranks():
    M = TransversalMatroid(6, [{1, 2, 4, 5}, {1, 2, 3, 4}])
    F = frozenset({1, 2, 3})
    R = M.restrict(F)
    assert R.k == M.rank(F)
    C = M.contract(F)
    assert C.k == M.k - M.rank(F)
