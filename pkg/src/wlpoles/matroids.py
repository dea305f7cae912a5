"""Matroids given by rank oracles, with the structure theory used here.

Three realizations share one interface: transversal matroids of a set
system (rank by bipartite matching), matroids of a symbolic matrix
with polynomial entries (rank by exact symbolic minors, needed when
entries are algebraically dependent), and minors (restriction or
contraction) of either.  On top of the rank oracle sit bases,
circuits, closure, flats, cyclic flats, flacets, connectivity, and
the cyclic-interval positroid test.

Ground sets are subsets of {1..n} stored as bit masks; n <= 64.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import InconsistencyError, StructuralError
from .exact import Polynomial, VarId, mat_rank, poly_det
from .sampling import seeded_rng

_STRUCTURE_LIMIT = 16  # flat/connectivity enumeration is 2^n


def mask_of(S: Iterable[int]) -> int:
    m = 0
    for v in S:
        m |= 1 << (v - 1)
    return m


def set_of(mask: int) -> frozenset[int]:
    out = set()
    v = 1
    while mask:
        if mask & 1:
            out.add(v)
        mask >>= 1
        v += 1
    return frozenset(out)


def is_cyclic_interval(S: Iterable[int], n: int) -> bool:
    """True when S is a run of cyclically consecutive vertices."""
    s = set(S)
    if not s or len(s) == n:
        return True
    gaps = sum(1 for v in s if (v % n) + 1 not in s)
    return gaps == 1


class Matroid:
    """Base class: subclasses provide ``n``, ``ground_mask``, ``_rank``."""

    n: int
    ground_mask: int

    def __init__(self):
        self._rank_cache: dict[int, int] = {}

    def _rank(self, mask: int) -> int:
        raise NotImplementedError

    def rank_mask(self, mask: int) -> int:
        if mask & ~self.ground_mask:
            raise StructuralError("subset outside the ground set")
        hit = self._rank_cache.get(mask)
        if hit is None:
            hit = self._rank_cache[mask] = self._rank(mask)
        return hit

    def rank(self, S: Iterable[int]) -> int:
        return self.rank_mask(mask_of(S))

    @property
    def ground(self) -> frozenset[int]:
        return set_of(self.ground_mask)

    @property
    def k(self) -> int:
        return self.rank_mask(self.ground_mask)

    def independent(self, S: Iterable[int]) -> bool:
        m = mask_of(S)
        return self.rank_mask(m) == m.bit_count()

    def bases(self) -> frozenset[frozenset[int]]:
        k = self.k
        out = []
        for combo in itertools.combinations(sorted(self.ground), k):
            m = mask_of(combo)
            if self.rank_mask(m) == k:
                out.append(frozenset(combo))
        return frozenset(out)

    def circuits(self) -> list[frozenset[int]]:
        """Minimal dependent sets; any circuit has at most k+1 elements."""
        found: list[frozenset[int]] = []
        elems = sorted(self.ground)
        for size in range(1, self.k + 2):
            for combo in itertools.combinations(elems, size):
                s = set(combo)
                if any(c <= s for c in found):
                    continue
                if self.rank_mask(mask_of(combo)) < size:
                    found.append(frozenset(combo))
        return found

    def closure(self, S: Iterable[int]) -> frozenset[int]:
        m = mask_of(S)
        base = self.rank_mask(m)
        out = m
        rest = self.ground_mask & ~m
        v = rest
        while v:
            low = v & -v
            if self.rank_mask(m | low) == base:
                out |= low
            v &= v - 1
        return set_of(out)

    def flats(self) -> list[frozenset[int]]:
        if len(self.ground) > _STRUCTURE_LIMIT:
            raise StructuralError("flat enumeration capped at 16 elements")
        seen: set[frozenset[int]] = set()
        elems = sorted(self.ground)
        for size in range(len(elems) + 1):
            for combo in itertools.combinations(elems, size):
                seen.add(self.closure(combo))
        return sorted(seen, key=lambda f: (self.rank(f), len(f), sorted(f)))

    def is_cyclic_flat(self, F: Iterable[int]) -> bool:
        """A flat with no coloops in the restriction to it."""
        fs = frozenset(F)
        if self.closure(fs) != fs:
            return False
        m = mask_of(fs)
        r = self.rank_mask(m)
        v = m
        while v:
            low = v & -v
            if self.rank_mask(m & ~low) < r:
                return False
            v &= v - 1
        return True

    def cyclic_flats(self) -> list[frozenset[int]]:
        return [f for f in self.flats() if self.is_cyclic_flat(f)]

    def is_connected(self) -> bool:
        """No proper nonempty part splits the rank additively."""
        g = self.ground_mask
        size = g.bit_count()
        if size <= 1:
            return True
        if size > 20:
            raise StructuralError("connectivity scan capped at 20 elements")
        total = self.rank_mask(g)
        elems = sorted(self.ground)
        anchor = elems[0]
        for r in range(1, size):
            for combo in itertools.combinations(elems[1:], r - 1):
                part = mask_of(combo) | mask_of([anchor])
                if self.rank_mask(part) + self.rank_mask(g & ~part) == total:
                    return False
        return True

    def restrict(self, F: Iterable[int]) -> "MinorMatroid":
        return MinorMatroid(self, keep=mask_of(F), contracted=0)

    def contract(self, F: Iterable[int]) -> "MinorMatroid":
        m = mask_of(F)
        return MinorMatroid(self, keep=self.ground_mask & ~m, contracted=m)

    def flacets(self) -> list[frozenset[int]]:
        """Flats F, 2 <= |F| <= n-1, with M|F and M/F both connected."""
        size = self.ground_mask.bit_count()
        out = []
        for f in self.flats():
            if not (2 <= len(f) <= size - 1):
                continue
            if self.restrict(f).is_connected() and self.contract(f).is_connected():
                out.append(f)
        return out

    def same_matroid(self, other: "Matroid") -> bool:
        return (
            self.ground_mask == other.ground_mask
            and self.n == other.n
            and self.bases() == other.bases()
        )


class TransversalMatroid(Matroid):
    """Matroid of a set system; rank by maximum bipartite matching."""

    def __init__(self, n: int, row_supports: Sequence[Iterable[int]]):
        super().__init__()
        if n < 1 or n > 64:
            raise StructuralError(f"ground size {n} outside [1, 64]")
        self.n = n
        self.ground_mask = (1 << n) - 1
        self.row_supports = tuple(frozenset(r) for r in row_supports)
        for sup in self.row_supports:
            if any(not (1 <= v <= n) for v in sup):
                raise StructuralError(f"support {sorted(sup)} outside [1, {n}]")
        self._rows_of_col: dict[int, tuple[int, ...]] = {
            c: tuple(i for i, sup in enumerate(self.row_supports) if c in sup)
            for c in range(1, n + 1)
        }

    def _rank(self, mask: int) -> int:
        cols = [v + 1 for v in range(self.n) if mask >> v & 1]
        row_match: dict[int, int] = {}

        def augment(col: int, seen: set[int]) -> bool:
            for r in self._rows_of_col[col]:
                if r in seen:
                    continue
                seen.add(r)
                if r not in row_match or augment(row_match[r], seen):
                    row_match[r] = col
                    return True
            return False

        size = 0
        for c in cols:
            if augment(c, set()):
                size += 1
        return size


class MatrixMatroid(Matroid):
    """Matroid of a matrix of polynomial entries over the rationals.

    Needed when entries are not algebraically independent (limit
    configurations with a proportional row).  Rank of a column set is
    the largest r with a symbolically nonzero r x r minor; a random
    exact evaluation provides the lower bound cheaply and the minors
    certify it and cap it.
    """

    def __init__(self, n: int, rows: Sequence[Mapping[int, Polynomial]]):
        super().__init__()
        if n < 1 or n > 64:
            raise StructuralError(f"ground size {n} outside [1, 64]")
        self.n = n
        self.ground_mask = (1 << n) - 1
        self.rows = tuple(
            {c: p for c, p in row.items() if not p.is_zero()} for row in rows
        )
        rng = seeded_rng(104729, "matrixmatroid", n, len(self.rows))
        vals: dict[VarId, Fraction] = {}
        for row in self.rows:
            for p in row.values():
                for var in p.variables():
                    if var not in vals:
                        vals[var] = Fraction(
                            rng.randint(1, 10**6), rng.randint(1, 10**6)
                        )
        self._probe = vals

    def _numeric_rows(self, cols: Sequence[int]) -> list[list[Fraction]]:
        out = []
        for row in self.rows:
            out.append(
                [
                    row[c].evaluate(self._probe) if c in row else Fraction(0)
                    for c in cols
                ]
            )
        return out

    def _rank(self, mask: int) -> int:
        cols = [v + 1 for v in range(self.n) if mask >> v & 1]
        if not cols:
            return 0
        r = mat_rank(self._numeric_rows(cols))
        cap = min(len(self.rows), len(cols))
        while r < cap and self._has_nonzero_minor(cols, r + 1):
            r += 1
        return r

    def _has_nonzero_minor(self, cols: Sequence[int], size: int) -> bool:
        for rsel in itertools.combinations(range(len(self.rows)), size):
            live = [c for c in cols if any(c in self.rows[i] for i in rsel)]
            if len(live) < size:
                continue
            for csel in itertools.combinations(live, size):
                grid = [
                    [self.rows[i].get(c, Polynomial.zero()) for c in csel]
                    for i in rsel
                ]
                if not poly_det(grid).is_zero():
                    return True
        return False


class MinorMatroid(Matroid):
    """Restriction and/or contraction, delegating to the parent oracle."""

    def __init__(self, parent: Matroid, keep: int, contracted: int):
        super().__init__()
        if keep & contracted:
            raise StructuralError("kept and contracted sets overlap")
        self.parent = parent
        self.n = parent.n
        self.ground_mask = keep
        self._contracted = contracted
        self._base = parent.rank_mask(contracted) if contracted else 0

    def _rank(self, mask: int) -> int:
        return self.parent.rank_mask(mask | self._contracted) - self._base


@dataclass(frozen=True)
class PositroidVerdict:
    ok: bool
    witness: frozenset[int] | None

    def __bool__(self) -> bool:
        return self.ok


def is_positroid(M: Matroid, expect: bool = False) -> PositroidVerdict:
    """Necessary test: every flacet must be a cyclic interval.

    With ``expect`` a failure is promoted to an inconsistency: the
    caller asserts on other grounds that M must pass (admissible
    diagrams always do), so a counterexample means a bug.
    """
    for f in M.flacets():
        if not is_cyclic_interval(f, M.n):
            if expect:
                raise InconsistencyError(
                    f"flacet {sorted(f)} is not a cyclic interval"
                )
            return PositroidVerdict(False, f)
    return PositroidVerdict(True, None)


@dataclass(frozen=True)
class FlatReport:
    flats_by_rank: tuple[tuple[int, tuple[frozenset[int], ...]], ...]
    cyclic_flats: tuple[frozenset[int], ...]
    flacets: tuple[frozenset[int], ...]
    connected: bool
    positroid: bool

    def to_json(self) -> dict:
        return {
            "flats_by_rank": {
                str(r): [sorted(f) for f in fs] for r, fs in self.flats_by_rank
            },
            "cyclic_flats": [sorted(f) for f in self.cyclic_flats],
            "flacets": [sorted(f) for f in self.flacets],
            "connected": self.connected,
            "positroid": self.positroid,
        }


def structure(M: Matroid) -> FlatReport:
    by_rank: dict[int, list[frozenset[int]]] = {}
    for f in M.flats():
        by_rank.setdefault(M.rank(f), []).append(f)
    return FlatReport(
        flats_by_rank=tuple(
            (r, tuple(by_rank[r])) for r in sorted(by_rank)
        ),
        cyclic_flats=tuple(M.cyclic_flats()),
        flacets=tuple(M.flacets()),
        connected=M.is_connected(),
        positroid=is_positroid(M).ok,
    )


def numeric_rank_probe(
    M: TransversalMatroid, S: Iterable[int], seed: int
) -> int:
    """Rank of a random exact evaluation of the set-system matrix.

    Entries are independent positive rationals with numerator and
    denominator up to 10^6; used as a cross-check of the matching
    oracle, never as the primary answer.
    """
    rng = seeded_rng(seed, "rankprobe", tuple(sorted(S)))
    cols = sorted(set(S))
    grid = []
    for sup in M.row_supports:
        grid.append(
            [
                Fraction(rng.randint(1, 10**6), rng.randint(1, 10**6))
                if c in sup
                else Fraction(0)
                for c in cols
            ]
        )
    return mat_rank(grid) if grid else 0


def check_rank_oracle(
    M: TransversalMatroid, S: Iterable[int], seeds: Sequence[int] = (1, 2, 3)
) -> int:
    """Matching rank with numeric agreement enforced across seeds."""
    want = M.rank(S)
    for seed in seeds:
        got = numeric_rank_probe(M, S, seed)
        if got != want:
            raise InconsistencyError(
                f"matching rank {want} but numeric rank {got} on {sorted(set(S))}"
            )
    return want
