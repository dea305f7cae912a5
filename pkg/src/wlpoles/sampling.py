"""Deterministic random sampling and positive twistor data.

Every random draw in the package flows through :func:`seeded_rng`, so
a single integer seed reproduces a whole run byte for byte.  Twistor
matrices are built from Vandermonde rows, which makes every ordered
maximal minor positive by construction; positivity is still verified
exactly because downstream certificates depend on it.
"""

from __future__ import annotations

import hashlib
import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import StructuralError
from .exact import mat_det


def seeded_rng(seed: int, *key) -> random.Random:
    """A Random stream derived from (seed, key) only."""
    digest = hashlib.sha256(str((seed,) + key).encode()).digest()
    return random.Random(int.from_bytes(digest, "big"))


def rand_fraction(rng: random.Random, lo: int = 1, hi: int = 1000) -> Fraction:
    """Positive rational with numerator and denominator in [lo, hi]."""
    return Fraction(rng.randint(lo, hi), rng.randint(lo, hi))


def rand_fraction_excluding(
    rng: random.Random, avoid: set[Fraction], lo: int = 1, hi: int = 1000
) -> Fraction:
    while True:
        x = rand_fraction(rng, lo, hi)
        if x not in avoid:
            return x


@dataclass(frozen=True)
class TwistorData:
    """External data: n twistor rows plus one gauge row, all exact.

    ``rows`` is an n-tuple of (k+4)-tuples with every ordered maximal
    minor strictly positive.  ``gauge`` is the reference row Z_0 used
    by the localization determinants.
    """

    rows: tuple[tuple[Fraction, ...], ...]
    gauge: tuple[Fraction, ...]

    @property
    def n(self) -> int:
        return len(self.rows)

    @property
    def width(self) -> int:
        return len(self.rows[0])

    def check_positive(self) -> None:
        """Verify all ordered maximal minors are positive, exactly."""
        n, w = self.n, self.width
        if n < w:
            raise StructuralError(f"need at least {w} rows, got {n}")
        for combo in itertools.combinations(range(n), w):
            d = mat_det([self.rows[i] for i in combo])
            if d <= 0:
                raise StructuralError(f"non-positive minor at rows {combo}")


def twistor_data(k: int, n: int, seed: int, zero_gauge: bool = False) -> TwistorData:
    """Seeded positive twistor data for diagrams in W(k, n).

    Rows are scaled Vandermonde vectors (1, t, ..., t^{k+3}) at
    strictly increasing positive rationals t, so ordered maximal
    minors are positive products of differences; the scales keep the
    sample varied without touching signs.
    """
    width = k + 4
    rng = seeded_rng(seed, "twistor", k, n)
    ts: list[Fraction] = []
    for i in range(n):
        ts.append(Fraction(i + 1) + Fraction(rng.randint(1, 999), 1000))
    rows = []
    for t in ts:
        scale = rand_fraction(rng)
        rows.append(tuple(scale * t**j for j in range(width)))
    if zero_gauge:
        gauge = tuple(Fraction(0) for _ in range(width))
    else:
        gauge = tuple(rand_fraction(rng) for _ in range(width))
    data = TwistorData(rows=tuple(rows), gauge=gauge)
    data.check_positive()
    return data
