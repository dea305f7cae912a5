"""Pole structure of diagram parameterizations.

The denominator R attached to a diagram is computed two independent
ways: as the per-edge product of boundary variables and adjacent-pair
quadratics, and as the set of prime factors of the necklace minors.
Their agreement is a checkable invariant, not an assumption.  The
module also classifies each factor's vanishing locus by codimension
and certifies boundary cells that no factor vanishes on.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Sequence

from .diagrams import (
    Propagator,
    WilsonLoopDiagram,
    cyc,
    edge_order,
    propagator_flat,
    validate,
)
from .errors import InconsistencyError, StructuralError, UnstructuredResidualError
from .exact import Polynomial, VarId, structured_factorize
from .matrices import SymbolicMatrix
from .matroids import MatrixMatroid, TransversalMatroid, is_cyclic_interval
from .positroids import (
    diagram_matrix,
    diagram_matroid,
    is_boundary_of,
    is_minimal,
    necklace,
    necklace_minors,
    reverse_necklace,
)
from .sampling import rand_fraction, seeded_rng

CODIM_ONE = "1"
CODIM_GE2 = ">=2"
CODIM_UNKNOWN = "unknown"

EDGE_FORMULA = "edge-formula"
NECKLACE_RADICAL = "necklace-radical"
REVERSE_NECKLACE_RADICAL = "reverse-necklace-radical"


@dataclass(frozen=True)
class PoleFactor:
    """One prime factor of R: a single entry or a 2x2 adjacent-pair minor.

    Identity is (kind, rows, cols); the originating edge and the codim
    tag are bookkeeping and excluded from comparison.
    """

    kind: str
    rows: tuple[int, ...]
    cols: tuple[int, ...]
    edge: int | None = field(default=None, compare=False)
    codim: str = field(default=CODIM_UNKNOWN, compare=False)

    def __post_init__(self) -> None:
        if self.kind == "var":
            if len(self.rows) != 1 or len(self.cols) != 1:
                raise StructuralError(f"bad var factor shape {self}")
        elif self.kind == "quad":
            if len(self.rows) != 2 or len(self.cols) != 2:
                raise StructuralError(f"bad quad factor shape {self}")
            if self.rows[0] >= self.rows[1] or self.cols[0] >= self.cols[1]:
                raise StructuralError(f"quad factor not canonical {self}")
        else:
            raise StructuralError(f"unknown factor kind {self.kind!r}")

    def polynomial(self) -> Polynomial:
        if self.kind == "var":
            return Polynomial.variable(VarId(self.rows[0], self.cols[0]))
        a, b = self.rows
        i, j = self.cols
        return Polynomial.cross_term(a, b, i, j)

    def sort_key(self) -> tuple:
        return (self.kind, self.rows, self.cols)

    def label(self) -> str:
        parts = [self.kind, *map(str, self.rows), *map(str, self.cols)]
        return ":".join(parts)

    def to_json(self) -> dict:
        if self.kind == "var":
            return {"kind": "var", "row": self.rows[0], "col": self.cols[0]}
        return {"kind": "quad", "rows": list(self.rows), "cols": list(self.cols)}

    @staticmethod
    def from_json(data: dict) -> "PoleFactor":
        try:
            if data["kind"] == "var":
                return pole_var(data["row"], data["col"])
            if data["kind"] == "quad":
                (a, b), (i, j) = data["rows"], data["cols"]
                return pole_quad(a, b, i, j)
        except (KeyError, TypeError, ValueError) as exc:
            raise StructuralError(f"malformed factor {data!r}") from exc
        raise StructuralError(f"unknown factor kind {data!r}")


def pole_var(row: int, col: int, edge: int | None = None) -> PoleFactor:
    return PoleFactor("var", (row,), (col,), edge=edge)


def pole_quad(ra: int, rb: int, c1: int, c2: int, edge: int | None = None) -> PoleFactor:
    rows = tuple(sorted((ra, rb)))
    cols = tuple(sorted((c1, c2)))
    return PoleFactor("quad", rows, cols, edge=edge)


@dataclass(frozen=True)
class RPolynomial:
    factors: tuple[PoleFactor, ...]
    provenance: str

    def factor_set(self) -> frozenset[PoleFactor]:
        return frozenset(self.factors)

    def __len__(self) -> int:
        return len(self.factors)

    def to_json(self) -> dict:
        return {
            "factors": [f.to_json() for f in self.factors],
            "provenance": self.provenance,
        }


def r_poly_edge(W: WilsonLoopDiagram) -> RPolynomial:
    """Per-edge product form of R.

    Edge e with incident propagators q_1..q_s (ordered far to near)
    contributes x_{q_1,e+1}, the s-1 quadratics on columns (e, e+1)
    for adjacent pairs, and x_{q_s,e}.  Factors are collected as a
    set; a repeat across edges would contradict square-freeness.
    """
    verdict = validate(W)
    if not verdict.admissible:
        raise StructuralError(f"diagram not admissible: {W}")
    n = W.n
    row_of = {p: i for i, p in enumerate(W.props, start=1)}
    seen: dict[PoleFactor, int] = {}

    def add(f: PoleFactor) -> None:
        if f in seen:
            raise InconsistencyError(
                f"factor {f.label()} arises on edges {seen[f]} and {f.edge}"
            )
        seen[f] = f.edge

    for e in range(1, n + 1):
        order = edge_order(W, e)
        if not order:
            continue
        add(pole_var(row_of[order[0]], cyc(e + 1, n), edge=e))
        for qa, qb in zip(order, order[1:]):
            add(pole_quad(row_of[qa], row_of[qb], e, cyc(e + 1, n), edge=e))
        add(pole_var(row_of[order[-1]], e, edge=e))

    factors = tuple(sorted(seen, key=PoleFactor.sort_key))
    return RPolynomial(factors=factors, provenance=EDGE_FORMULA)


def _radical_factors(
    V: Sequence[frozenset[int]], n: int, entries: Sequence[Sequence[int]]
) -> set[PoleFactor]:
    M = SymbolicMatrix(n=n, supports=tuple(V))
    out: set[PoleFactor] = set()
    for I_a in entries:
        minor = M.minor(list(range(1, len(V) + 1)), sorted(I_a))
        if minor.is_zero():
            raise InconsistencyError(f"necklace entry {I_a} is not a basis")
        fz = structured_factorize(minor, strict=True)
        for vid, _ in fz.var_factors:
            out.add(pole_var(vid.row, vid.col))
        for (a, b, i, j), _ in fz.cross_factors:
            out.add(pole_quad(a, b, i, j))
    return out


def _as_set_system(V: Sequence, n: int | None) -> tuple[tuple[frozenset[int], ...], int]:
    rows = tuple(frozenset(r) for r in V)
    if not rows or any(not r for r in rows):
        raise StructuralError("set system needs nonempty rows")
    if n is None:
        n = max(max(r) for r in rows)
    return rows, n


def r_poly_necklace(V: Sequence, n: int | None = None) -> RPolynomial:
    """Distinct prime factors of the necklace minors of V."""
    rows, n = _as_set_system(V, n)
    M = TransversalMatroid(n, rows)
    if M.k != len(rows):
        raise StructuralError(f"set system has rank {M.k}, expected {len(rows)}")
    out = _radical_factors(rows, n, necklace(M))
    return RPolynomial(
        factors=tuple(sorted(out, key=PoleFactor.sort_key)),
        provenance=NECKLACE_RADICAL,
    )


def r_poly_reverse(V: Sequence, n: int | None = None) -> RPolynomial:
    """Distinct prime factors of the reverse-necklace minors of V."""
    rows, n = _as_set_system(V, n)
    M = TransversalMatroid(n, rows)
    if M.k != len(rows):
        raise StructuralError(f"set system has rank {M.k}, expected {len(rows)}")
    out = _radical_factors(rows, n, reverse_necklace(M))
    return RPolynomial(
        factors=tuple(sorted(out, key=PoleFactor.sort_key)),
        provenance=REVERSE_NECKLACE_RADICAL,
    )


@dataclass(frozen=True)
class REqualityReport:
    edge: RPolynomial
    necklace: RPolynomial
    reverse: RPolynomial
    ok: bool
    mismatches: tuple[str, ...]

    def __bool__(self) -> bool:
        return self.ok


def check_r_equalities(W: WilsonLoopDiagram) -> REqualityReport:
    """Compare the edge-product factors against both necklace radicals."""
    re_ = r_poly_edge(W)
    if W.k == 0:
        # no propagators, no factors: all three routes are empty products
        empty = RPolynomial((), NECKLACE_RADICAL)
        return REqualityReport(
            edge=re_,
            necklace=empty,
            reverse=RPolynomial((), REVERSE_NECKLACE_RADICAL),
            ok=True,
            mismatches=(),
        )
    rn = r_poly_necklace(W.supports(), W.n)
    rr = r_poly_reverse(W.supports(), W.n)
    se, sn, sr = re_.factor_set(), rn.factor_set(), rr.factor_set()
    mismatches = []
    for name, s in (("necklace", sn), ("reverse", sr)):
        if s != se:
            missing = sorted(se - s, key=PoleFactor.sort_key)
            extra = sorted(s - se, key=PoleFactor.sort_key)
            mismatches.append(
                f"{name}: missing={[f.label() for f in missing]}"
                f" extra={[f.label() for f in extra]}"
            )
    return REqualityReport(
        edge=re_, necklace=rn, reverse=rr,
        ok=not mismatches, mismatches=tuple(mismatches),
    )


def limit_rows(
    supports: Sequence[frozenset[int]], n: int, p_row: int, q_row: int, e: int
) -> list[dict[int, Polynomial]]:
    """Symbolic rows after the quadratic on (p_row, q_row) columns (e, e+1)
    degenerates: row q becomes proportional to row p there, via a fresh
    scale variable carried in the reserved column index -1."""
    lam = Polynomial.variable(VarId(q_row, -1))
    rows: list[dict[int, Polynomial]] = []
    pair_cols = {e, cyc(e + 1, n)}
    for r0, V in enumerate(supports, start=1):
        row: dict[int, Polynomial] = {}
        for c in sorted(V):
            if r0 == q_row and c in pair_cols:
                row[c] = lam * Polynomial.variable(VarId(p_row, c))
            else:
                row[c] = Polynomial.variable(VarId(r0, c))
        rows.append(row)
    return rows


def span_growth(
    rows: Sequence[Mapping[int, Polynomial]],
    n: int,
    dependent: tuple[int, int, int] | None = None,
) -> bool:
    """Whether adding any row to any proper row subset grows the span.

    Two failure modes exist and both are checked exactly.  A symbolic
    rank below the row count exhibits a dependent subset directly.
    With the (p, q, e) dependency imposed, combinations of rows p and
    q additionally sweep out every vector supported on
    (V_p u V_q) - {e, e+1}, so any third row living inside that
    support adds nothing to the span of {p, q} even at full rank.
    """
    k = len(rows)
    if k == 0:
        raise StructuralError("span growth needs at least one row")
    M = MatrixMatroid(n, rows)
    if M.rank_mask(M.ground_mask) < k:
        return False
    if dependent is not None:
        p_row, q_row, e = dependent
        cancel = (set(rows[p_row - 1]) | set(rows[q_row - 1])) - {e, cyc(e + 1, n)}
        for j0, row in enumerate(rows, start=1):
            if j0 in (p_row, q_row):
                continue
            if set(row) <= cancel:
                return False
    return True


def quad_geometry(
    W: WilsonLoopDiagram, f: PoleFactor
) -> tuple[int, Propagator, Propagator, int, int]:
    """Resolve a quad factor to (edge, near prop, far prop, near far-end,
    far far-end).  Distances are measured cyclically from e+1, so the far
    propagator is the one whose other endpoint is reached last."""
    n = W.n
    c1, c2 = f.cols
    if c2 == cyc(c1 + 1, n):
        e = c1
    elif c1 == cyc(c2 + 1, n):
        e = c2
    else:
        raise StructuralError(f"quad columns {f.cols} are not adjacent mod {n}")
    pa, pb = (W.props[r - 1] for r in f.rows)
    ends = []
    for p in (pa, pb):
        if e not in p:
            raise StructuralError(f"propagator {p} is not on edge {e}")
        far = p.e2 if p.e1 == e else p.e1
        ends.append(((far - e - 1) % n, far, p))
    ends.sort()
    (_, j_far, near), (_, k_far, far_p) = ends
    return e, near, far_p, j_far, k_far


def factor_codim(W: WilsonLoopDiagram, f: PoleFactor) -> str:
    """Codimension of the factor's vanishing locus inside the cell closure.

    Single entries: delete the entry and re-test minimality of the
    reduced system at rank k; exactly one dimension is lost iff the
    test passes.  Quadratics on far ends (j, k): codimension one iff
    (j, k) is not already a propagator, cross-checked against the
    span-growth criterion on the degenerate symbolic matrix.
    """
    if f not in r_poly_edge(W).factor_set():
        raise StructuralError(f"factor {f.label()} is not a factor of R({W})")
    supports = W.supports()
    n, k = W.n, W.k

    if f.kind == "var":
        row, col = f.rows[0], f.cols[0]
        reduced = [set(V) for V in supports]
        reduced[row - 1].discard(col)
        rank_kept = TransversalMatroid(n, [frozenset(r) for r in reduced]).k == k
        report = is_minimal(reduced, n)
        one = rank_kept and report.minimal and report.dimension == 3 * k - 1
        return CODIM_ONE if one else CODIM_GE2

    e, near, far_p, j_far, k_far = quad_geometry(W, f)
    narrow = (k_far - j_far) % n == 1
    if narrow:
        combinatorial = True
    else:
        r = Propagator.of(j_far, k_far)
        combinatorial = r not in W.props
    p_row = W.props.index(near) + 1
    q_row = W.props.index(far_p) + 1
    rows = limit_rows(supports, n, p_row, q_row, e)
    grows = span_growth(rows, n, dependent=(p_row, q_row, e))
    if grows != combinatorial:
        raise InconsistencyError(
            f"span growth {grows} disagrees with propagator test"
            f" {combinatorial} for {f.label()} on {W}"
        )
    return CODIM_ONE if combinatorial else CODIM_GE2


@dataclass(frozen=True)
class BoundaryWitness:
    factor: PoleFactor
    assignment: tuple[tuple[VarId, Fraction], ...]
    vanishing_shifts: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "factor": self.factor.to_json(),
            "assignment": {
                f"{vid.row},{vid.col}": str(val) for vid, val in self.assignment
            },
            "vanishing_shifts": list(self.vanishing_shifts),
        }


def vanish_on_boundary_witness(
    W: WilsonLoopDiagram, f: PoleFactor, seed: int = 0
) -> BoundaryWitness:
    """Exact rational point where f vanishes and the point leaves the cell.

    All other entries are random positive rationals; the factor is
    killed by zeroing its entry or imposing the 2x2 proportionality.
    At least one necklace minor must vanish there, which certifies the
    point sits on the cell boundary.
    """
    if f not in r_poly_edge(W).factor_set():
        raise StructuralError(f"factor {f.label()} is not a factor of R({W})")
    supports = W.supports()
    rng = seeded_rng(seed, "witness", str(W), f.label())
    assignment: dict[VarId, Fraction] = {}
    for r0, V in enumerate(supports, start=1):
        for c in sorted(V):
            assignment[VarId(r0, c)] = rand_fraction(rng)
    if f.kind == "var":
        assignment[VarId(f.rows[0], f.cols[0])] = Fraction(0)
    else:
        ra, rb = f.rows
        t = rand_fraction(rng)
        for c in f.cols:
            assignment[VarId(rb, c)] = t * assignment[VarId(ra, c)]
    if f.polynomial().evaluate(assignment) != 0:
        raise InconsistencyError(f"witness failed to kill {f.label()}")

    minors = necklace_minors(diagram_matrix(W), necklace(diagram_matroid(W)))
    shifts = tuple(
        a for a, m in enumerate(minors, start=1) if m.evaluate(assignment) == 0
    )
    if not shifts:
        raise InconsistencyError(
            f"no necklace minor vanishes at the {f.label()} witness of {W};"
            " the factor would not lie on the cell boundary"
        )
    return BoundaryWitness(
        factor=f,
        assignment=tuple(sorted(assignment.items())),
        vanishing_shifts=shifts,
    )


@dataclass(frozen=True)
class BoundaryNoPoleCertificate:
    """Boundary cell reached by zeroing one flat and growing another,
    on which no factor of R vanishes identically."""

    zero_flat: frozenset[int]
    extend_flat: frozenset[int]
    vprime_rows: tuple[frozenset[int], ...]
    v: int
    w: int
    checks: tuple[tuple[str, bool], ...]
    implication: str

    @property
    def valid(self) -> bool:
        return all(flag for _, flag in self.checks) and self.implication == "certified"

    def to_json(self) -> dict:
        return {
            "zero_flat": sorted(self.zero_flat),
            "extend_flat": sorted(self.extend_flat),
            "vprime_rows": [sorted(r) for r in self.vprime_rows],
            "v": self.v,
            "w": self.w,
            "checks": {name: flag for name, flag in self.checks},
            "implication": self.implication,
            "valid": self.valid,
        }


def _interval_start(S: frozenset[int], n: int) -> int:
    for s in sorted(S):
        if cyc(s - 1, n) not in S:
            return s
    raise StructuralError(f"{sorted(S)} has no cyclic start in [{n}]")


def _first_positive(S: frozenset[int], start: int, M: TransversalMatroid) -> int | None:
    n = M.n
    for t in range(n):
        c = cyc(start + t, n)
        if c not in S:
            continue
        if M.rank(frozenset([c])) > 0:
            return c
    return None


def boundary_without_pole(W: WilsonLoopDiagram) -> list[BoundaryNoPoleCertificate]:
    """Search for boundary cells that carry no pole of R.

    Candidates are pairs of propagator flats, each a cyclic flat of
    rank strictly between 0 and k, with both flats and their union
    cyclic intervals and neither flat nested in the other.  The flat
    of smaller difference-rank is zeroed out of the rows meeting it,
    the rows meeting the other flat are extended across the union,
    and the resulting system is certified: rank preserved, bases
    strictly contained, necklace changed at the witness column v but
    not at w, restricted circuits still dependent, and the minor
    non-vanishing implication established by factor containment.
    """
    verdict = validate(W)
    if not verdict.admissible:
        raise StructuralError(f"diagram not admissible: {W}")
    n, k = W.n, W.k
    if k < 2:
        return []
    supports = W.supports()
    M = diagram_matroid(W)
    Msym = diagram_matrix(W)
    nk = necklace(M)

    flats: set[frozenset[int]] = set()
    for size in range(len(W.props) + 1):
        for P in combinations(W.props, size):
            F = propagator_flat(frozenset(P), W)
            if not 0 < M.rank(F) < k:
                continue
            if M.closure(F) != F or not M.is_cyclic_flat(F):
                continue
            if not is_cyclic_interval(F, n):
                continue
            flats.add(F)

    certs: list[BoundaryNoPoleCertificate] = []
    seen: set[tuple] = set()
    for F1, F2 in combinations(sorted(flats, key=sorted), 2):
        if F1 <= F2 or F2 <= F1:
            continue
        union = F1 | F2
        if not is_cyclic_interval(union, n) or len(union) == n:
            continue
        r12 = M.rank(F1 - F2)
        r21 = M.rank(F2 - F1)
        orientations = []
        if r12 >= r21:
            orientations.append((F2, F1))
        if r21 >= r12:
            orientations.append((F1, F2))
        for Z, X in orientations:
            zi = [i for i, V in enumerate(supports) if V & Z]
            xi = [i for i, V in enumerate(supports) if V & X]
            if set(zi) & set(xi):
                continue
            vrows = list(supports)
            for i in zi:
                vrows[i] = vrows[i] - Z
            for i in xi:
                vrows[i] = vrows[i] | union
            v = _first_positive(union, _interval_start(union, n), M)
            if v is None:
                continue
            other = X if v not in X else (Z if v not in Z else None)
            if other is None:
                continue
            w = _first_positive(other, _interval_start(other, n), M)
            if w is None:
                continue

            key = (tuple(sorted(tuple(sorted(r)) for r in vrows)), v, w)
            if key in seen:
                continue
            seen.add(key)

            Mp = TransversalMatroid(n, vrows)
            checks: list[tuple[str, bool]] = []
            checks.append(("rank_preserved", Mp.k == k))
            if Mp.k != k:
                certs.append(BoundaryNoPoleCertificate(
                    zero_flat=Z, extend_flat=X, vprime_rows=tuple(vrows),
                    v=v, w=w, checks=tuple(checks), implication="inconclusive",
                ))
                continue
            ev = is_boundary_of(vrows, supports, n)
            checks.append(("bases_contained", ev.is_boundary))
            nkp = necklace(Mp)
            checks.append(("necklace_differs_at_v",
                           set(nkp[v - 1]) != set(nk[v - 1])))
            checks.append(("necklace_matches_at_w",
                           set(nkp[w - 1]) == set(nk[w - 1])))
            circuits_ok = True
            for F in (X, Z):
                for C in M.restrict(F).circuits():
                    if Mp.rank(C) >= len(C):
                        circuits_ok = False
            checks.append(("circuits_preserved", circuits_ok))

            implication = "inconclusive"
            rows_idx = list(range(1, k + 1))
            m_v = Msym.minor(rows_idx, sorted(nk[v - 1]))
            m_w = Msym.minor(rows_idx, sorted(nk[w - 1]))
            m_pv = Msym.minor(rows_idx, sorted(nkp[v - 1]))
            if not (m_v.is_zero() or m_w.is_zero() or m_pv.is_zero()):
                try:
                    kv = _factor_keys(m_v)
                    kw = _factor_keys(m_w)
                    kpv = _factor_keys(m_pv)
                    if kv <= (kw | kpv):
                        implication = "certified"
                except UnstructuredResidualError:
                    pass

            certs.append(BoundaryNoPoleCertificate(
                zero_flat=Z, extend_flat=X, vprime_rows=tuple(vrows),
                v=v, w=w, checks=tuple(checks), implication=implication,
            ))
    return certs


def _factor_keys(poly: Polynomial) -> frozenset[PoleFactor]:
    fz = structured_factorize(poly, strict=True)
    out: set[PoleFactor] = set()
    for vid, _ in fz.var_factors:
        out.add(pole_var(vid.row, vid.col))
    for (a, b, i, j), _ in fz.cross_factors:
        out.add(pole_quad(a, b, i, j))
    return frozenset(out)
