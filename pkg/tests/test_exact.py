"""Polynomial ring, determinants and structured factorization."""

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from wlpoles.errors import UnstructuredResidualError
from wlpoles.exact import (
    Polynomial,
    VarId,
    mat_det,
    mat_rank,
    poly_det,
    structured_factorize,
)

V = [VarId(r, c) for r in range(1, 4) for c in range(1, 4)]


def small_polys(depth=2):
    atoms = st.one_of(
        st.sampled_from(V).map(Polynomial.variable),
        st.integers(-4, 4).map(lambda c: Polynomial.constant(Fraction(c))),
    )
    return st.recursive(
        atoms,
        lambda sub: st.tuples(sub, sub, st.sampled_from("+-*")).map(
            lambda t: t[0] + t[1] if t[2] == "+" else (t[0] - t[1] if t[2] == "-" else t[0] * t[1])
        ),
        max_leaves=6,
    )


@given(small_polys(), small_polys(), small_polys())
@settings(max_examples=120, deadline=None)
def test_ring_laws(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == Polynomial.zero()


@given(small_polys())
@settings(max_examples=80, deadline=None)
def test_evaluate_is_ring_hom(p):
    point = {v: Fraction(i + 2, 3) for i, v in enumerate(V)}
    q = p * p + p
    assert q.evaluate(point) == p.evaluate(point) * p.evaluate(point) + p.evaluate(point)


def test_division_exact_roundtrip():
    x = Polynomial.variable(VarId(1, 1))
    y = Polynomial.variable(VarId(1, 2))
    p = (x + y) * (x - y) * x
    assert p.div_exact(x) == (x + y) * (x - y)
    assert p.div_exact(x + y) == (x - y) * x
    assert p.div_exact(y) is None


def test_poly_det_matches_permutation_expansion():
    rng_vals = [[Polynomial.variable(VarId(r, c)) for c in range(1, 4)] for r in range(1, 4)]
    det = poly_det(rng_vals)
    expected = Polynomial.zero()
    for perm in itertools.permutations(range(3)):
        sign = 1
        for i in range(3):
            for j in range(i + 1, 3):
                if perm[i] > perm[j]:
                    sign = -sign
        term = Polynomial.constant(Fraction(sign))
        for i in range(3):
            term = term * rng_vals[i][perm[i]]
        expected = expected + term
    assert det == expected


def test_poly_det_row_swap_flips_sign():
    rows = [[Polynomial.variable(VarId(r, c)) for c in range(1, 4)] for r in range(1, 4)]
    d = poly_det(rows)
    swapped = [rows[1], rows[0], rows[2]]
    assert poly_det(swapped) == Polynomial.constant(Fraction(-1)) * d


@given(
    st.lists(
        st.lists(st.fractions(max_denominator=20, min_value=-5, max_value=5), min_size=3, max_size=3),
        min_size=3,
        max_size=3,
    )
)
@settings(max_examples=60, deadline=None)
def test_mat_det_matches_permutation_expansion(grid):
    grid = [[Fraction(x) for x in row] for row in grid]
    got = mat_det([row[:] for row in grid])
    expected = Fraction(0)
    for perm in itertools.permutations(range(3)):
        sign = 1
        for i in range(3):
            for j in range(i + 1, 3):
                if perm[i] > perm[j]:
                    sign = -sign
        term = Fraction(sign)
        for i in range(3):
            term *= grid[i][perm[i]]
        expected += term
    assert got == expected


def test_mat_rank_basic():
    assert mat_rank([[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]]) == 1
    assert mat_rank([[Fraction(1), Fraction(0)], [Fraction(0), Fraction(1)]]) == 2
    assert mat_rank([]) == 0


def test_structured_factorize_recomposes():
    x11 = Polynomial.variable(VarId(1, 1))
    x12 = Polynomial.variable(VarId(1, 2))
    cross = Polynomial.cross_term(1, 2, 3, 4)
    p = x11 * x11 * x12 * cross
    fac = structured_factorize(p)
    assert fac.ok
    assert dict(fac.var_factors) == {VarId(1, 1): 2, VarId(1, 2): 1}
    assert dict(fac.cross_factors) == {(1, 2, 3, 4): 1}
    recomposed = Polynomial.constant(fac.residual)
    for v, m in fac.var_factors:
        for _ in range(m):
            recomposed = recomposed * Polynomial.variable(v)
    for key, m in fac.cross_factors:
        for _ in range(m):
            recomposed = recomposed * Polynomial.cross_term(*key)
    assert recomposed == p


def test_structured_factorize_strict_raises_on_residual():
    x11 = Polynomial.variable(VarId(1, 1))
    x22 = Polynomial.variable(VarId(2, 2))
    p = x11 + x22
    with pytest.raises(UnstructuredResidualError):
        structured_factorize(p, strict=True)
    fac = structured_factorize(p)
    assert not fac.ok


@given(st.sampled_from(V), st.sampled_from(V))
@settings(max_examples=40, deadline=None)
def test_derivative_product_rule(u, v):
    pu, pv = Polynomial.variable(u), Polynomial.variable(v)
    p = (pu + Polynomial.constant(Fraction(2))) * pv
    lhs = p.derivative(u)
    rhs = pv if u != v else pv + (pu + Polynomial.constant(Fraction(2)))
    assert lhs == rhs
