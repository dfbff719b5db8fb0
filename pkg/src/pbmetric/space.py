"""Partial b-metric spaces and their structural checks.

Two kinds of space are supported:

* :class:`PartialBMetricSpace` -- a finite point set with an exact rational
  distance table. Every check on it is exhaustive and exact.
* :class:`FunctionSpace` -- an interval of the real line with a closed-form
  distance, examined on a sampling grid. Verdicts on it are labelled
  ``"sampled"`` and use a comparison tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Callable, Hashable, Iterable, Optional

import numpy as np

from ._num import exact
from .errors import AxiomError, StructuralError

Point = Hashable

DEFAULT_TOL = 1e-12


def _lcm(values: Iterable[int]) -> int:
    out = 1
    for v in values:
        out = out * v // math.gcd(out, v)
    return out


@dataclass(frozen=True, eq=False)
class PartialBMetricSpace:
    """A finite point set with an exact, tabulated distance ``p``.

    ``table[i][j]`` is ``p(points[i], points[j])``. The constructor only
    normalises values to :class:`~fractions.Fraction` and checks the table is
    square; the axioms are left to :func:`verify_axioms` so that broken tables
    can still be inspected.
    """

    points: tuple
    table: tuple
    declared_s: Fraction = Fraction(1)

    exact = True
    tol = 0.0

    def __post_init__(self):
        points = tuple(self.points)
        if len(set(points)) != len(points):
            raise StructuralError("duplicate point identifiers")
        rows = tuple(tuple(exact(v) for v in row) for row in self.table)
        if len(rows) != len(points) or any(len(r) != len(points) for r in rows):
            raise StructuralError(
                f"distance table must be {len(points)}x{len(points)}"
            )
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "table", rows)
        object.__setattr__(self, "declared_s", exact(self.declared_s))

    @classmethod
    def from_function(cls, points, func: Callable, declared_s=1):
        """Tabulate ``func`` over ``points``."""
        points = tuple(points)
        return cls(points, [[func(x, y) for y in points] for x in points], declared_s)

    @classmethod
    def discrete(cls, points, declared_s=1):
        """The 0/1 metric: zero self-distance, one between distinct points."""
        return cls.from_function(points, lambda x, y: 0 if x == y else 1, declared_s)

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __repr__(self):
        return f"PartialBMetricSpace(n={len(self.points)}, declared_s={self.declared_s})"

    @cached_property
    def index(self) -> dict:
        return {x: i for i, x in enumerate(self.points)}

    @cached_property
    def scaled(self) -> tuple:
        """The table times the lcm ``D`` of its denominators, as ints.

        Every scale-invariant check (ratios, the pm axioms) runs on this
        integer table; it is several times faster than Fraction arithmetic.
        """
        denom = _lcm(v.denominator for row in self.table for v in row)
        ints = tuple(tuple(v.numerator * (denom // v.denominator) for v in row)
                     for row in self.table)
        return ints, denom

    def p(self, x, y) -> Fraction:
        return self.table[self.index[x]][self.index[y]]

    def with_declared_s(self, s) -> "PartialBMetricSpace":
        out = PartialBMetricSpace(self.points, self.table, s)
        # same table, so cached derived data carries over
        for key in ("index", "scaled"):
            if key in self.__dict__:
                out.__dict__[key] = self.__dict__[key]
        return out

    def same_points(self, other) -> bool:
        return tuple(self.points) == tuple(other.points)


def _abs_diff_pow(k):
    k = float(k)

    def p(x, y):
        return np.abs(np.subtract(x, y)) ** k

    return p


FORMULAS = {"abs_diff_pow_k": _abs_diff_pow}


@dataclass(frozen=True, eq=False)
class FunctionSpace:
    """An interval ``[lo, hi]`` with a named closed-form distance.

    The only built-in formula is ``"abs_diff_pow_k"``, ``p(x, y) = |x-y|**k``.
    ``grid`` is the number of equally spaced sample points used by every
    check; results on this space are lower bounds / sampled verdicts only.
    """

    lo: float
    hi: float
    formula: str = "abs_diff_pow_k"
    params: dict = field(default_factory=lambda: {"k": 2})
    grid: int = 51
    declared_s: float = 1.0
    tol: float = DEFAULT_TOL

    exact = False

    def __post_init__(self):
        if self.formula not in FORMULAS:
            raise StructuralError(f"unknown formula {self.formula!r}")
        if not self.lo < self.hi:
            raise StructuralError("interval must satisfy lo < hi")
        object.__setattr__(self, "declared_s", float(self.declared_s))

    @cached_property
    def _func(self):
        return FORMULAS[self.formula](**self.params)

    @cached_property
    def points(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.grid)

    def __len__(self):
        return self.grid

    def __repr__(self):
        return (
            f"FunctionSpace([{self.lo}, {self.hi}], {self.formula}{self.params}, "
            f"grid={self.grid}, declared_s={self.declared_s})"
        )

    def p(self, x, y):
        return self._func(x, y)

    def matrix(self, xs=None, ys=None) -> np.ndarray:
        xs = self.points if xs is None else np.asarray(xs, dtype=float)
        ys = self.points if ys is None else np.asarray(ys, dtype=float)
        return self._func(xs[:, None], ys[None, :])

    def contains(self, x) -> bool:
        return self.lo - self.tol <= x <= self.hi + self.tol


@dataclass
class AxiomReport:
    """Per-axiom verdicts for one space at one coefficient ``s``."""

    s: object
    pm1: bool
    pm2: bool
    pm3: bool
    pm4: bool
    witnesses: dict = field(default_factory=dict)
    minimal_s: Optional[object] = None
    mode: str = "exact"

    @property
    def passed(self) -> bool:
        return self.pm1 and self.pm2 and self.pm3 and self.pm4

    def failing(self) -> list:
        return [ax for ax in ("pm1", "pm2", "pm3", "pm4") if not getattr(self, ax)]


def _check_structure(space: PartialBMetricSpace) -> None:
    pts, tab = space.points, space.table
    P, _ = space.scaled
    for i, row in enumerate(P):
        for j, v in enumerate(row):
            if v < 0:
                raise StructuralError(f"negative value p({pts[i]!r}, {pts[j]!r}) = {tab[i][j]}")
            if v != P[j][i]:
                raise StructuralError(
                    f"asymmetric table at ({pts[i]!r}, {pts[j]!r}): {tab[i][j]} != {tab[j][i]}"
                )


def _worst_triple(P) -> tuple:
    """Max of (P[x][y] + P[z][z]) / (P[x][z] + P[z][y]) over all triples.

    Returns ``(num, den, (i, j, k))`` for the lexicographically first triple
    attaining the max; ``den == 0`` signals an unbounded ratio (positive
    numerator over zero). 0/0 triples are skipped; when every triple is
    skipped the result is ``(0, 1, None)``.
    """
    n = len(P)
    diag = [P[k][k] for k in range(n)]
    cols = list(zip(*P))
    best_n, best_d, arg = 0, 1, None
    for i in range(n):
        Pi = P[i]
        for j in range(n):
            pij = Pi[j]
            cj = cols[j]
            for k in range(n):
                num = pij + diag[k]
                den = Pi[k] + cj[k]
                if den == 0:
                    if num:
                        return num, 0, (i, j, k)
                    continue
                if arg is None or num * best_d > best_n * den:
                    best_n, best_d, arg = num, den, (i, j, k)
    return best_n, best_d, arg


def _pm1_pm2(P, pts) -> tuple:
    pm1 = pm2 = True
    w = {}
    n = len(P)
    for i in range(n):
        for j in range(n):
            if P[i][i] > P[i][j] and pm2:
                pm2 = False
                w["pm2"] = (pts[i], pts[j])
            if i < j and pm1 and P[i][j] == P[i][i] == P[j][j]:
                pm1 = False
                w["pm1"] = (pts[i], pts[j])
    return pm1, pm2, w


def verify_axioms(space, s=None) -> AxiomReport:
    """Check pm1-pm4 on ``space`` with coefficient ``s``.

    Finite spaces are checked exhaustively over all pairs and triples in
    exact arithmetic. Function-backed spaces are checked over all sampled
    pairs/triples with tolerance ``space.tol`` and the report is labelled
    ``"sampled"``.

    The pm4 witness is the triple with the largest ratio
    ``(p(x,y)+p(z,z)) / (p(x,z)+p(z,y))``, i.e. the worst violation.

    Raises:
        StructuralError: if the table is negative or asymmetric.
    """
    if not space.exact:
        return _verify_sampled(space, s)
    s = space.declared_s if s is None else exact(s)
    if s < 1:
        raise ValueError("coefficient s must be >= 1")
    _check_structure(space)
    P, _ = space.scaled
    pts = space.points
    pm1, pm2, w = _pm1_pm2(P, pts)
    num, den, arg = _worst_triple(P)
    pm4 = not (den == 0 or Fraction(num, den) > s)
    if not pm4:
        w["pm4"] = tuple(pts[t] for t in arg)
    minimal = None
    if pm1 and pm2 and den != 0:
        minimal = max(Fraction(num, den), Fraction(1))
    return AxiomReport(s, pm1, pm2, True, pm4, w, minimal, "exact")


def _verify_sampled(space: FunctionSpace, s=None) -> AxiomReport:
    s = space.declared_s if s is None else float(s)
    if len(space) < 2:
        raise ValueError("sampling grid needs at least 2 points")
    tol = space.tol
    g = space.points
    P = space.matrix()
    if (P < -tol).any():
        i, j = np.argwhere(P < -tol)[0]
        raise StructuralError(f"negative value at ({g[i]}, {g[j]})")
    if not np.allclose(P, P.T, rtol=0, atol=tol):
        raise StructuralError("asymmetric distance on the grid")
    d = np.diag(P)
    w = {}
    bad2 = d[:, None] > P + tol
    pm2 = not bad2.any()
    if not pm2:
        i, j = np.argwhere(bad2)[0]
        w["pm2"] = (g[i], g[j])
    same = (np.abs(P - d[:, None]) <= tol) & (np.abs(P - d[None, :]) <= tol)
    np.fill_diagonal(same, False)
    pm1 = not same.any()
    if not pm1:
        i, j = np.argwhere(same)[0]
        w["pm1"] = (g[i], g[j])
    lhs = P[:, :, None] + d[None, None, :]
    rhs = P[:, None, :] + P.T[None, :, :]
    excess = lhs - s * rhs
    pm4 = not (excess > tol).any()
    ratio = np.where(rhs > tol, lhs / np.where(rhs > tol, rhs, 1.0), 0.0)
    if not pm4:
        masked = np.where(excess > tol, ratio, -np.inf)
        i, j, k = np.unravel_index(np.argmax(masked), masked.shape)
        w["pm4"] = (g[i], g[j], g[k])
    minimal = max(float(ratio.max()), 1.0) if pm1 and pm2 else None
    return AxiomReport(s, pm1, pm2, True, pm4, w, minimal, "sampled")


def minimal_coefficient(space, with_witness: bool = False):
    """The least ``s >= 1`` for which pm4 holds.

    On a finite space this is the exact maximum over all triples with a
    positive denominator of ``(p(x,y)+p(z,z)) / (p(x,z)+p(z,y))``, floored at
    1. On a function-backed space it is the sampled maximum, which is only a
    lower bound of the true supremum.

    With ``with_witness=True`` returns ``(s, (x, y, z))``; the witness is
    ``None`` when the floor at 1 is what decides.

    Raises:
        AxiomError: if pm1 or pm2 fail (a positive numerator over a zero
            denominator can only happen then).
    """
    if not space.exact:
        rep = _verify_sampled(space, space.declared_s)
        if rep.minimal_s is None:
            raise AxiomError(f"pm1/pm2 fail on the sampled grid: {rep.witnesses}")
        return (rep.minimal_s, None) if with_witness else rep.minimal_s
    _check_structure(space)
    P, _ = space.scaled
    pm1, pm2, w = _pm1_pm2(P, space.points)
    if not (pm1 and pm2):
        raise AxiomError(f"minimal coefficient needs pm1-pm3; failing: {w}")
    num, den, arg = _worst_triple(P)
    if den == 0:
        raise AxiomError(
            "zero denominator with positive numerator at "
            f"{tuple(space.points[t] for t in arg)}"
        )
    value = Fraction(num, den)
    if value < 1:
        value, arg = Fraction(1), None
    if not with_witness:
        return value
    return value, (None if arg is None else tuple(space.points[t] for t in arg))


@dataclass
class UltraVerdict:
    holds: bool
    witness: Optional[tuple] = None

    def __bool__(self):
        return self.holds


def is_ultra(space: PartialBMetricSpace) -> UltraVerdict:
    """Check the strong inequality ``p(x,y) + p(z,z) <= max{p(x,z), p(z,y)}``.

    The coefficient ``s`` plays no role here. When the ordinary triangle
    inequality (pm4 with s = 1) already fails, its worst triple is reported
    as the witness, since any such triple also breaks the strong form;
    otherwise the witness is the triple with the largest ratio against the
    max.
    """
    _check_structure(space)
    P, _ = space.scaled
    pts = space.points
    num, den, arg = _worst_triple(P)
    if den == 0 or num > den:
        return UltraVerdict(False, tuple(pts[t] for t in arg))
    n = len(P)
    best, arg = None, None
    for i in range(n):
        for j in range(n):
            for k in range(n):
                lhs = P[i][j] + P[k][k]
                m = max(P[i][k], P[k][j])
                if lhs > m:
                    key = (True, 0) if m == 0 else (False, Fraction(lhs, m))
                    if best is None or key > best:
                        best, arg = key, (i, j, k)
    if arg is None:
        return UltraVerdict(True)
    return UltraVerdict(False, tuple(pts[t] for t in arg))


@dataclass(frozen=True)
class MetricPair:
    """Two partial metrics on the same finite point set."""

    first: PartialBMetricSpace
    second: PartialBMetricSpace

    def __post_init__(self):
        if not self.first.same_points(self.second):
            raise StructuralError("metric pair must share an identical point list")


def equivalence_constants(pair: MetricPair) -> Optional[tuple]:
    """Best ``(alpha, beta)`` with ``alpha*p1 <= p2 <= beta*p1`` everywhere.

    ``alpha`` and ``beta`` are the min and max of ``p2/p1`` over pairs with
    ``p1 > 0``. Pairs where both metrics vanish are skipped. Returns ``None``
    when some pair has ``p1 = 0 != p2`` or when ``alpha`` would be 0.
    """
    if not isinstance(pair, MetricPair):
        pair = MetricPair(*pair)
    t1, t2 = pair.first.table, pair.second.table
    lo = hi = None
    n = len(t1)
    for i in range(n):
        for j in range(n):
            a, b = t1[i][j], t2[i][j]
            if a == 0:
                if b != 0:
                    return None
                continue
            r = b / a
            if lo is None or r < lo:
                lo = r
            if hi is None or r > hi:
                hi = r
    if lo is None:
        # both metrics vanish identically; any positive constants work
        return Fraction(1), Fraction(1)
    if lo == 0:
        return None
    return lo, hi


def ball_contains(space, center, eps, y) -> bool:
    """Membership of ``y`` in the basic open set ``{y : p(c,y) < eps + p(c,c)}``."""
    if not eps > 0:
        raise ValueError("ball radius must be positive")
    if space.exact:
        eps = exact(eps)
    return bool(space.p(center, y) < eps + space.p(center, center))


def ball(space: PartialBMetricSpace, center, eps) -> list:
    """All points of a finite space inside the basic open set around ``center``."""
    return [y for y in space.points if ball_contains(space, center, eps, y)]
