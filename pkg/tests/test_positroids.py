"""Gale orders, necklaces, minimality, cell descriptors, boundaries."""

import itertools

import pytest
from hypothesis import given, settings, strategies as st

from wlpoles.diagrams import Propagator, WilsonLoopDiagram, enumerate_diagrams
from wlpoles.errors import StructuralError
from wlpoles.matroids import TransversalMatroid
from wlpoles.positroids import (
    cell_descriptor,
    diagram_cell,
    diagram_matroid,
    gale_key,
    gale_leq,
    gale_sorted,
    is_boundary_of,
    is_minimal,
    necklace,
    reverse_necklace,
)

V1 = [{1, 2, 4, 5}, {1, 2, 3, 4}]
V2 = [{1, 2, 4, 5}, {2, 3, 4, 5}]


def test_gale_sorted_and_key():
    assert gale_sorted({1, 3, 5}, 4, 6) == [5, 1, 3]
    assert gale_key(4, 4, 6) == 0
    assert gale_key(3, 4, 6) == 5


def test_gale_leq_requires_same_size():
    with pytest.raises(StructuralError):
        gale_leq({1, 2}, {1, 2, 3}, 1, 6)
    assert gale_leq({1, 2}, {1, 3}, 1, 6)
    assert not gale_leq({1, 3}, {1, 2}, 1, 6)


def gale_min_basis(M, a):
    """Brute-force Gale-minimal basis for the a-th shift."""
    best = None
    for B in M.bases():
        if best is None or gale_leq(B, best, a, M.n):
            best = B
    return best


def gale_max_basis(M, a):
    best = None
    for B in M.bases():
        if best is None or gale_leq(best, B, a, M.n):
            best = B
    return best


def test_necklace_golden_v1():
    M = TransversalMatroid(6, V1)
    assert [tuple(e) for e in necklace(M)] == [
        (1, 2), (2, 3), (3, 4), (4, 5), (5, 1), (1, 2),
    ]


def test_necklace_golden_running_diagram():
    W = WilsonLoopDiagram(6, (Propagator.of(1, 3), Propagator.of(1, 5)))
    assert [tuple(e) for e in necklace(diagram_matroid(W))] == [
        (1, 2), (2, 3), (3, 5), (4, 5), (5, 1), (6, 1),
    ]


def test_necklace_is_gale_minimal_over_all_bases():
    for W in enumerate_diagrams(2, 6) + enumerate_diagrams(1, 6):
        M = diagram_matroid(W)
        neck = necklace(M)
        rev = reverse_necklace(M)
        for a in range(1, M.n + 1):
            assert frozenset(neck[a - 1]) == gale_min_basis(M, a)
            assert frozenset(rev[a - 1]) == gale_max_basis(M, a)


def test_necklace_rejects_rank_zero():
    M = TransversalMatroid(4, [set()]) if False else None
    with pytest.raises(StructuralError):
        necklace(TransversalMatroid(4, [{1}]).restrict(frozenset({2})))


def test_is_minimal_goldens():
    rep = is_minimal([{1, 2, 5}, {1, 2, 5, 6}], 6)
    assert not rep.minimal
    assert rep.dimension is None
    assert rep.violating

    good = is_minimal(V1, 6)
    assert good.minimal
    assert good.dimension == 8 - 2  # 4k entries minus rank


def test_diagram_systems_minimal_dimension_3k():
    for k, n in ((1, 6), (2, 6), (2, 7)):
        for W in enumerate_diagrams(k, n):
            rep = is_minimal(W.supports(), n)
            assert rep.minimal
            assert rep.dimension == 3 * k


def test_cell_descriptor_json():
    cd = cell_descriptor(V1, 6)
    js = cd.to_json()
    assert js["k"] == 2 and js["n"] == 6
    assert js["dimension"] == 6
    assert js["rows"] == [[1, 2, 4, 5], [1, 2, 3, 4]]
    assert js["necklace"][0] == [1, 2]


def test_diagram_cell_positroid_gate():
    W = WilsonLoopDiagram(6, (Propagator.of(1, 3), Propagator.of(1, 5)))
    cd = diagram_cell(W)
    assert cd.dimension == 6
    assert cd.k == 2


def test_is_boundary_of():
    V = [{1, 2, 4, 5}, {1, 2, 3, 4}]
    Vb = [{1, 2, 4}, {1, 2, 3, 4}]
    ev = is_boundary_of(Vb, V, 6)
    assert ev.is_boundary
    assert ev.contained and ev.proper
    same = is_boundary_of(V, V, 6)
    assert not same.proper


def test_is_boundary_of_rejects_rank_mismatch():
    with pytest.raises(StructuralError):
        is_boundary_of([{1}], [{1, 2}, {3, 4}], 6)
