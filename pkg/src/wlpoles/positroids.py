"""Grassmann necklaces, cell descriptors, and boundary relations.

The necklace of a rank-k matroid is the n-tuple of Gale-minimal
bases, one per cyclic shift of the ground order; the reverse necklace
collects the Gale-maximal ones.  Both come from the greedy algorithm
run against the rank oracle, scanning the shifted order upward or
downward.  Minimality of a set-system representation is the subset
counting inequality; when it holds the cell dimension is the number
of nonzero entries minus k.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .diagrams import WilsonLoopDiagram, cyc
from .errors import StructuralError
from .exact import Polynomial
from .matrices import SymbolicMatrix, matrix_from_sets
from .matroids import Matroid, TransversalMatroid, is_positroid


def gale_key(v: int, a: int, n: int) -> int:
    """Position of v in the a-shifted cyclic order (a comes first)."""
    return (v - a) % n


def gale_sorted(S: Iterable[int], a: int, n: int) -> list[int]:
    return sorted(S, key=lambda v: gale_key(v, a, n))


def gale_leq(A: Iterable[int], B: Iterable[int], a: int, n: int) -> bool:
    """Componentwise comparison of equal-size sets in the a-th Gale order."""
    sa = gale_sorted(A, a, n)
    sb = gale_sorted(B, a, n)
    if len(sa) != len(sb):
        raise StructuralError(f"Gale comparison needs equal sizes, got {sa} vs {sb}")
    return all(
        gale_key(x, a, n) <= gale_key(y, a, n) for x, y in zip(sa, sb)
    )


def necklace(M: Matroid) -> list[tuple[int, ...]]:
    """Gale-minimal basis for each shift, by greedy rank-increasing scan.

    Entry a-1 of the result is I_a, listed in the a-shifted order.
    """
    n = M.n
    k = M.k
    if k == 0:
        raise StructuralError("necklace of a rank-0 matroid")
    out = []
    for a in range(1, n + 1):
        chosen: list[int] = []
        mask = 0
        r = 0
        for t in range(n):
            v = cyc(a + t, n)
            m = mask | (1 << (v - 1))
            if M.rank_mask(m) > r:
                chosen.append(v)
                mask = m
                r += 1
                if r == k:
                    break
        out.append(tuple(chosen))
    return out


def reverse_necklace(M: Matroid) -> list[tuple[int, ...]]:
    """Gale-maximal basis for each shift, by greedy downward scan.

    The scan for shift a starts at a-1 (the largest element of the
    a-shifted order) and walks down; the result is re-listed in the
    a-shifted order for presentation.
    """
    n = M.n
    k = M.k
    if k == 0:
        raise StructuralError("reverse necklace of a rank-0 matroid")
    out = []
    for a in range(1, n + 1):
        chosen: list[int] = []
        mask = 0
        r = 0
        for t in range(n):
            v = cyc(a - 1 - t, n)
            m = mask | (1 << (v - 1))
            if M.rank_mask(m) > r:
                chosen.append(v)
                mask = m
                r += 1
                if r == k:
                    break
        out.append(tuple(reversed(chosen)))
    return out


def necklace_minors(
    M: SymbolicMatrix, I: Sequence[Sequence[int]]
) -> list[Polynomial]:
    """Symbolic minor on every necklace element, columns ascending."""
    rows = list(range(1, M.k + 1))
    return [M.minor(rows, sorted(I_a)) for I_a in I]


@dataclass(frozen=True)
class MinimalityReport:
    minimal: bool
    dimension: int | None
    entries: int
    rank: int
    violating: tuple[int, ...] | None

    def __bool__(self) -> bool:
        return self.minimal


def is_minimal(V: Sequence[Iterable[int]], n: int | None = None) -> MinimalityReport:
    """Subset inequality test for a minimal set-system representation.

    Every nonempty subfamily T of rows must cover at least
    max(|V_i|) + |T| - 1 vertices; with the generic rank equal to the
    row count this certifies dimension = (total entries) - k.
    """
    rows = [frozenset(r) for r in V]
    if not rows or any(not r for r in rows):
        raise StructuralError("set system needs nonempty rows")
    if n is None:
        n = max(max(r) for r in rows)
    k = len(rows)
    m = sum(len(r) for r in rows)
    rank = TransversalMatroid(n, rows).k

    violating = None
    for mask in range(1, 1 << k):
        members = [rows[i] for i in range(k) if mask >> i & 1]
        union = frozenset().union(*members)
        need = max(len(r) for r in members) + len(members) - 1
        if len(union) < need:
            violating = tuple(i + 1 for i in range(k) if mask >> i & 1)
            break

    minimal = violating is None and rank == k
    return MinimalityReport(
        minimal=minimal,
        dimension=(m - k) if minimal else None,
        entries=m,
        rank=rank,
        violating=violating,
    )


@dataclass(frozen=True)
class CellDescriptor:
    k: int
    n: int
    rows: tuple[frozenset[int], ...]
    necklace: tuple[tuple[int, ...], ...]
    reverse_necklace: tuple[tuple[int, ...], ...]
    dimension: int | None

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "n": self.n,
            "rows": [sorted(r) for r in self.rows],
            "necklace": [list(e) for e in self.necklace],
            "reverse_necklace": [list(e) for e in self.reverse_necklace],
            "dimension": self.dimension,
        }


def cell_descriptor(
    V: Sequence[Iterable[int]],
    n: int | None = None,
    matroid: Matroid | None = None,
    dimension: int | None = None,
) -> CellDescriptor:
    """Descriptor of the cell of a set system.

    The matroid defaults to the transversal matroid of V and the
    dimension to the minimality count; both can be supplied explicitly
    for limit configurations whose entries are not independent.
    """
    rows = tuple(frozenset(r) for r in V)
    if n is None:
        n = max(max(r) for r in rows if r)
    M = matroid if matroid is not None else TransversalMatroid(n, rows)
    if dimension is None and matroid is None:
        dimension = is_minimal(rows, n).dimension
    return CellDescriptor(
        k=M.k,
        n=n,
        rows=rows,
        necklace=tuple(necklace(M)),
        reverse_necklace=tuple(reverse_necklace(M)),
        dimension=dimension,
    )


def diagram_matroid(W: WilsonLoopDiagram) -> TransversalMatroid:
    return TransversalMatroid(W.n, W.supports())


def diagram_matrix(W: WilsonLoopDiagram, gauge: bool = False) -> SymbolicMatrix:
    return matrix_from_sets(W.supports(), gauge=gauge, n=W.n)


def diagram_cell(W: WilsonLoopDiagram, expect_positroid: bool = True) -> CellDescriptor:
    M = diagram_matroid(W)
    if expect_positroid:
        is_positroid(M, expect=True)
    return cell_descriptor(W.supports(), n=W.n, matroid=M,
                           dimension=is_minimal(W.supports(), W.n).dimension)


@dataclass(frozen=True)
class BoundaryEvidence:
    is_boundary: bool
    contained: bool
    proper: bool
    necklace_diff: tuple[int, tuple[int, ...], tuple[int, ...]] | None

    def __bool__(self) -> bool:
        return self.is_boundary


def is_boundary_of(
    Vb: Sequence[Iterable[int]], V: Sequence[Iterable[int]], n: int
) -> BoundaryEvidence:
    """True when the cell of Vb lies strictly below the cell of V.

    Decided at the matroid level: the bases of M(Vb) must be a proper
    subset of the bases of M(V).  Evidence includes the first shift
    where the necklaces differ, when they do.
    """
    Mb = TransversalMatroid(n, [frozenset(r) for r in Vb])
    M = TransversalMatroid(n, [frozenset(r) for r in V])
    if Mb.k != M.k:
        raise StructuralError(f"rank mismatch: {Mb.k} vs {M.k}")
    if Mb.k == 0:
        raise StructuralError("boundary comparison needs positive rank")
    bb, b = Mb.bases(), M.bases()
    contained = bb <= b
    proper = contained and bb != b
    diff = None
    if proper:
        for a, (ia, ib) in enumerate(zip(necklace(M), necklace(Mb)), start=1):
            if set(ia) != set(ib):
                diff = (a, ia, ib)
                break
    return BoundaryEvidence(
        is_boundary=proper, contained=contained, proper=proper, necklace_diff=diff
    )
