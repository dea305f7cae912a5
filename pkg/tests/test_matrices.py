"""Symbolic diagram matrices, minors and the change-of-variables Jacobian."""

from fractions import Fraction

import pytest

from wlpoles.diagrams import Propagator, WilsonLoopDiagram
from wlpoles.errors import StructuralError
from wlpoles.exact import Polynomial, VarId
from wlpoles.matrices import SymbolicMatrix, jacobian_det, matrix_from_sets
from wlpoles.positroids import diagram_matrix


def test_entries_follow_supports():
    m = matrix_from_sets([{1, 2, 4, 5}, {1, 2, 3, 4}], n=6)
    assert m.entry(1, 1) == Polynomial.variable(VarId(1, 1))
    assert m.entry(1, 3).is_zero()
    assert m.entry(2, 3) == Polynomial.variable(VarId(2, 3))


def test_minor_order_sensitivity():
    m = matrix_from_sets([{1, 2}, {1, 2}], n=2)
    d = m.minor((1, 2), (1, 2))
    flipped = m.minor((1, 2), (2, 1))
    assert flipped == Polynomial.constant(Fraction(-1)) * d


def test_diagram_matrix_matches_supports():
    W = WilsonLoopDiagram(6, (Propagator.of(1, 3), Propagator.of(1, 5)))
    m = diagram_matrix(W)
    for r0, sup in enumerate(W.supports(), start=1):
        for c in range(1, 7):
            assert m.entry(r0, c).is_zero() == (c not in sup)


def test_evaluate_rank():
    m = matrix_from_sets([{1, 2}, {1, 2}], n=2)
    assignment = {
        VarId(1, 1): Fraction(1),
        VarId(1, 2): Fraction(2),
        VarId(2, 1): Fraction(2),
        VarId(2, 2): Fraction(4),
    }
    grid, rank = m.evaluate(assignment)
    assert rank == 1
    assert grid[0][1] == Fraction(2)


def test_jacobian_identity_and_swap():
    u, v = VarId(1, 1), VarId(1, 2)
    pu, pv = Polynomial.variable(u), Polynomial.variable(v)
    ident = jacobian_det((u, v), (u, v), {u: pu, v: pv})
    assert ident == Polynomial.constant(Fraction(1))
    swap = jacobian_det((u, v), (u, v), {u: pv, v: pu})
    assert swap == Polynomial.constant(Fraction(-1))


def test_jacobian_elimination_substitution():
    # (x, y, xz, zy + w) in the variables (x, y, z, w) has Jacobian x
    old = tuple(VarId(1, c) for c in (1, 2, 3, 4))
    new = tuple(VarId(2, c) for c in (1, 2, 3, 4))
    x, y, z, w = (Polynomial.variable(t) for t in new)
    subst = {old[0]: x, old[1]: y, old[2]: x * z, old[3]: z * y + w}
    assert jacobian_det(old, new, subst) == x
