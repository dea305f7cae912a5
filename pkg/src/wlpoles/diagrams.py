"""Wilson loop diagrams on a cyclic vertex set.

A diagram places k propagators on the marked circle with vertices
1..n.  Edge i joins vertices i and i+1, cyclically, so edge n joins
vertices n and 1.  A propagator is an unordered pair of distinct
edges; it is supported by the four vertices bounding those edges.

Degenerate propagators (adjacent edges, or the same pair listed
twice) may be constructed; they are reported by :func:`validate`
through the density conditions rather than rejected up front.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from .errors import StructuralError


def cyc(v: int, n: int) -> int:
    """Wrap an integer into the 1-based cyclic range [1, n]."""
    return (v - 1) % n + 1


class Propagator(NamedTuple):
    """Unordered pair of edge indices, stored with e1 < e2."""

    e1: int
    e2: int

    @staticmethod
    def of(a: int, b: int) -> "Propagator":
        if a == b:
            raise StructuralError(f"propagator ends on one edge: ({a},{b})")
        return Propagator(min(a, b), max(a, b))

    def __str__(self) -> str:
        return f"({self.e1},{self.e2})"


def vertex_support(p: Propagator, n: int, strict: bool = True) -> tuple[int, ...]:
    """Vertices supporting p, in intrinsic order (e1, e1+1, e2, e2+1).

    With ``strict`` (the default) a propagator whose support collapses
    to fewer than 4 distinct vertices is a structural error.  The
    non-strict form is used by the density checks, which are the
    mechanism that reports such degeneracies.
    """
    if not (1 <= p.e1 <= n and 1 <= p.e2 <= n):
        raise StructuralError(f"propagator {p} out of range for n={n}")
    out: list[int] = []
    for v in (p.e1, cyc(p.e1 + 1, n), p.e2, cyc(p.e2 + 1, n)):
        if v not in out:
            out.append(v)
    if strict and len(out) < 4:
        raise StructuralError(f"propagator {p} has support {out} on n={n}")
    return tuple(out)


@dataclass(frozen=True)
class WilsonLoopDiagram:
    """A set of propagators on [n], stored in canonical sorted order."""

    n: int
    props: tuple[Propagator, ...]

    def __post_init__(self):
        if self.n < 1:
            raise StructuralError(f"need at least one vertex, got n={self.n}")
        norm = tuple(sorted(Propagator.of(a, b) for a, b in self.props))
        for p in norm:
            if not (1 <= p.e1 <= self.n and 1 <= p.e2 <= self.n):
                raise StructuralError(f"propagator {p} out of range for n={self.n}")
        object.__setattr__(self, "props", norm)

    @property
    def k(self) -> int:
        return len(self.props)

    def support(self, p: Propagator, strict: bool = True) -> tuple[int, ...]:
        return vertex_support(p, self.n, strict=strict)

    def supports(self) -> list[frozenset[int]]:
        """Row supports of the diagram's matrix, in row order."""
        return [frozenset(vertex_support(p, self.n)) for p in self.props]

    def rotate(self, shift: int) -> "WilsonLoopDiagram":
        """Shift every edge index by ``shift`` and re-canonicalize."""
        return WilsonLoopDiagram(
            self.n,
            tuple(
                Propagator.of(cyc(p.e1 + shift, self.n), cyc(p.e2 + shift, self.n))
                for p in self.props
            ),
        )

    def to_json(self) -> dict:
        return {"n": self.n, "props": [[p.e1, p.e2] for p in self.props]}

    @staticmethod
    def from_json(obj: dict) -> "WilsonLoopDiagram":
        try:
            n = int(obj["n"])
            pairs = [(int(a), int(b)) for a, b in obj["props"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise StructuralError(f"malformed diagram object: {obj!r}") from exc
        return WilsonLoopDiagram(n, tuple(Propagator.of(a, b) for a, b in pairs))

    def __str__(self) -> str:
        inner = ",".join(str(p) for p in self.props)
        return f"({{{inner}}},[{self.n}])"


def propagator_flat(P: Iterable[Propagator], W: WilsonLoopDiagram) -> frozenset[int]:
    """Vertices avoided by every propagator outside P.

    F(P) is the complement of the union of supports of the
    complementary propagator set.  F of the full set is all of [n].
    """
    pset = {Propagator.of(*p) for p in P}
    if not pset <= set(W.props):
        raise StructuralError(f"{sorted(pset)} is not a subset of {W}")
    covered: set[int] = set()
    for q in W.props:
        if q not in pset:
            covered.update(vertex_support(q, W.n, strict=False))
    return frozenset(range(1, W.n + 1)) - covered


def props_on(S: Iterable[int], W: WilsonLoopDiagram) -> tuple[Propagator, ...]:
    """Propagators whose support meets the vertex set S."""
    vs = set(S)
    return tuple(
        p for p in W.props if vs & set(vertex_support(p, W.n, strict=False))
    )


def crossing(p: Propagator, q: Propagator) -> bool:
    """True when the two propagators interleave around the circle.

    Propagators sharing an endpoint edge never cross.
    """
    a, b = p
    c, d = q
    return (a < c < b < d) or (c < a < d < b)


@dataclass(frozen=True)
class AdmissibilityVerdict:
    crossing_violations: tuple[tuple[Propagator, Propagator], ...]
    local_density_violations: tuple[tuple[Propagator, ...], ...]
    global_density_ok: bool

    @property
    def admissible(self) -> bool:
        return (
            not self.crossing_violations
            and not self.local_density_violations
            and self.global_density_ok
        )


def validate(W: WilsonLoopDiagram) -> AdmissibilityVerdict:
    """Check non-crossing, local density, and global density.

    Local density requires every nonempty propagator subset P to be
    supported by at least |P| + 3 vertices; subsets are enumerated
    exhaustively (k is small).  Global density requires n >= k + 4.
    """
    crossings = tuple(
        (p, q) for p, q in itertools.combinations(W.props, 2) if crossing(p, q)
    )

    seen: set[tuple[Propagator, ...]] = set()
    violations: list[tuple[Propagator, ...]] = []
    for size in range(1, W.k + 1):
        for subset in itertools.combinations(W.props, size):
            if subset in seen:
                continue
            seen.add(subset)
            covered: set[int] = set()
            for p in subset:
                covered.update(vertex_support(p, W.n, strict=False))
            if len(covered) < len(subset) + 3:
                violations.append(subset)

    return AdmissibilityVerdict(
        crossing_violations=crossings,
        local_density_violations=tuple(violations),
        global_density_ok=W.n >= W.k + 4,
    )


def is_admissible(W: WilsonLoopDiagram) -> bool:
    return validate(W).admissible


def edge_order(W: WilsonLoopDiagram, e: int) -> list[Propagator]:
    """Propagators ending on edge e, ordered by proximity to vertex e.

    The first propagator is the one nearest vertex e.  Sorting key:
    cyclic distance from vertex e+1 to the far endpoint edge,
    descending.  Only meaningful for non-crossing diagrams, so a
    crossing pair anywhere in the diagram is a structural error.
    """
    if not (1 <= e <= W.n):
        raise StructuralError(f"edge {e} out of range for n={W.n}")
    for p, q in itertools.combinations(W.props, 2):
        if crossing(p, q):
            raise StructuralError(f"edge order undefined, {p} and {q} cross")
    incident = [p for p in W.props if e in (p.e1, p.e2)]

    def key(p: Propagator) -> tuple[int, Propagator]:
        far = p.e2 if p.e1 == e else p.e1
        return (-((far - (e + 1)) % W.n), p)

    return sorted(incident, key=key)


def valid_propagators(n: int) -> list[Propagator]:
    """All propagators on [n] with 4 distinct support vertices."""
    return [
        Propagator(a, b)
        for a in range(1, n + 1)
        for b in range(a + 2, n + 1)
        if b - a <= n - 2
    ]


def enumerate_diagrams(k: int, n: int) -> list[WilsonLoopDiagram]:
    """All admissible diagrams with k propagators on [n], sorted.

    Backtracks over the canonical propagator list keeping pairwise
    non-crossing prefixes, then applies the full verdict (density
    conditions included) to each candidate.
    """
    if k < 0 or n < 1:
        raise StructuralError(f"bad enumeration bounds k={k}, n={n}")
    if n < k + 4:
        return []
    if k == 0:
        return [WilsonLoopDiagram(n, ())]

    candidates = valid_propagators(n)
    out: list[WilsonLoopDiagram] = []
    chosen: list[Propagator] = []

    def extend(start: int) -> None:
        if len(chosen) == k:
            W = WilsonLoopDiagram(n, tuple(chosen))
            if is_admissible(W):
                out.append(W)
            return
        for idx in range(start, len(candidates)):
            p = candidates[idx]
            if any(crossing(p, q) for q in chosen):
                continue
            chosen.append(p)
            extend(idx + 1)
            chosen.pop()

    extend(0)
    return out
