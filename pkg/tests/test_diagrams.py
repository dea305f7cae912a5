"""Diagram combinatorics: supports, admissibility, enumeration, edge order."""

import itertools

import pytest
from hypothesis import given, settings, strategies as st

from wlpoles.diagrams import (
    Propagator,
    WilsonLoopDiagram,
    crossing,
    cyc,
    edge_order,
    enumerate_diagrams,
    is_admissible,
    propagator_flat,
    props_on,
    validate,
    valid_propagators,
    vertex_support,
)
from wlpoles.errors import StructuralError


def test_cyc_wraps():
    assert cyc(7, 6) == 1
    assert cyc(0, 6) == 6
    assert cyc(-1, 6) == 5
    assert cyc(6, 6) == 6


def test_propagator_canonical():
    assert Propagator.of(5, 2) == Propagator.of(2, 5) == Propagator(2, 5)
    with pytest.raises(StructuralError):
        Propagator.of(3, 3)


def test_vertex_support_golden():
    assert vertex_support(Propagator.of(2, 5), 8) == (2, 3, 5, 6)
    assert vertex_support(Propagator.of(1, 7), 8) == (1, 2, 7, 8)
    # wrap: the second edge's successor vertex is 1
    assert vertex_support(Propagator.of(2, 8), 8) == (2, 3, 8, 1)


def test_vertex_support_strict_rejects_degenerate():
    with pytest.raises(StructuralError):
        vertex_support(Propagator.of(1, 2), 6)
    # the non-strict form deduplicates; density checks use it as a set
    assert vertex_support(Propagator.of(1, 2), 6, strict=False) == (1, 2, 3)


def test_crossing_golden():
    assert crossing(Propagator.of(1, 3), Propagator.of(2, 4))
    assert not crossing(Propagator.of(1, 3), Propagator.of(1, 5))
    assert not crossing(Propagator.of(1, 4), Propagator.of(2, 4))
    # nested chords do not cross
    assert not crossing(Propagator.of(1, 5), Propagator.of(2, 4))


def test_validate_reports_all_violations():
    W = WilsonLoopDiagram(8, (Propagator.of(1, 3), Propagator.of(2, 4)))
    verdict = validate(W)
    assert not verdict.admissible
    assert (Propagator.of(1, 3), Propagator.of(2, 4)) in verdict.crossing_violations

    # two propagators squeezed onto three vertices' worth of support
    W2 = WilsonLoopDiagram(8, (Propagator.of(1, 3), Propagator.of(1, 3)))
    verdict2 = validate(W2)
    assert not verdict2.admissible
    assert verdict2.local_density_violations


def test_global_density():
    assert enumerate_diagrams(1, 4) == []
    assert len(enumerate_diagrams(0, 4)) == 1
    assert enumerate_diagrams(0, 3) == []


def test_valid_propagators_count():
    # chords avoiding both degenerate separations: n(n-3)/2
    for n in range(4, 10):
        assert len(valid_propagators(n)) == n * (n - 3) // 2


def brute_enumerate(k, n):
    out = []
    for combo in itertools.combinations(valid_propagators(n), k):
        W = WilsonLoopDiagram(n, combo)
        if is_admissible(W):
            out.append(W)
    return out


def test_enumerate_counts_match_brute_force():
    for k, n in ((1, 5), (1, 6), (2, 6), (2, 7), (3, 7)):
        fast = enumerate_diagrams(k, n)
        slow = brute_enumerate(k, n)
        assert sorted(W.props for W in fast) == sorted(W.props for W in slow)
        assert len(set(W.props for W in fast)) == len(fast)


def test_enumerate_golden_counts():
    assert len(enumerate_diagrams(1, 5)) == 5
    assert len(enumerate_diagrams(1, 6)) == 9


@given(st.sampled_from([(1, 5), (1, 6), (1, 7), (2, 6), (2, 7)]))
@settings(max_examples=10, deadline=None)
def test_enumerate_closed_under_rotation(kn):
    k, n = kn
    diagrams = {W.props for W in enumerate_diagrams(k, n)}
    rotated = {W.rotate(1).props for W in enumerate_diagrams(k, n)}
    assert diagrams == rotated


def test_edge_order_golden():
    W = WilsonLoopDiagram(
        8, (Propagator.of(3, 5), Propagator.of(2, 5), Propagator.of(1, 7))
    )
    assert is_admissible(W)
    assert edge_order(W, 5) == [Propagator.of(3, 5), Propagator.of(2, 5)]
    assert edge_order(W, 2) == [Propagator.of(2, 5)]
    assert edge_order(W, 4) == []


def test_edge_order_rejects_crossing_diagram():
    W = WilsonLoopDiagram(8, (Propagator.of(1, 3), Propagator.of(2, 4)))
    with pytest.raises(StructuralError):
        edge_order(W, 1)


def test_edge_order_no_interleaving():
    # consecutive propagators in the order share no closer propagator:
    # far endpoints are strictly decreasing in cyclic distance from e+1
    for W in enumerate_diagrams(2, 7) + enumerate_diagrams(3, 8):
        for e in range(1, W.n + 1):
            order = edge_order(W, e)
            dists = []
            for p in order:
                far = p.e2 if p.e1 == e else p.e1
                dists.append((far - e - 1) % W.n)
            assert dists == sorted(dists, reverse=True)
            assert len(set(dists)) == len(dists)


def test_propagator_flat_and_props_on():
    # F(P) is the complement of the support of the complementary family
    W = WilsonLoopDiagram(6, (Propagator.of(1, 3), Propagator.of(1, 5)))
    assert propagator_flat([Propagator.of(1, 3)], W) == frozenset({3, 4})
    assert propagator_flat([Propagator.of(1, 5)], W) == frozenset({5, 6})
    assert propagator_flat(W.props, W) == frozenset(range(1, 7))
    assert propagator_flat([], W) == frozenset()
    assert props_on({3, 4}, W) == (Propagator.of(1, 3),)
    assert props_on({1, 2}, W) == (Propagator.of(1, 3), Propagator.of(1, 5))


def test_json_roundtrip():
    W = WilsonLoopDiagram(7, (Propagator.of(2, 4), Propagator.of(2, 6)))
    assert WilsonLoopDiagram.from_json(W.to_json()) == W
    with pytest.raises(StructuralError):
        WilsonLoopDiagram.from_json({"n": 6, "props": [[1]]})


def test_rotate_preserves_admissibility():
    for W in enumerate_diagrams(2, 6):
        for s in range(1, 6):
            assert is_admissible(W.rotate(s))
