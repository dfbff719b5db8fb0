"""Turning a power contraction into a one-step contraction.

If ``p(T^n x, T^n y) <= K p(x, y)`` with ``0 < K < 1`` and ``lam`` satisfies
``K^(1/n) < 1/lam < 1``, the weighted sum

    p'(x, y) = sum_{i<n} lam^i p(T^i x, T^i y)

is again a partial b-metric (same coefficient ``s``) under which ``T`` is a
contraction with constant ``1/lam``. The full series ``h`` (``i`` running to
infinity) is squeezed between ``p'`` and ``p' / (1 - lam^n K)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from ._num import exact
from .contraction import check_banach
from .errors import DivergenceError, ParameterError, PreconditionError
from .maps import SelfMap
from .space import PartialBMetricSpace

FINITE_SUM = "finite-sum"
SERIES = "series"


@dataclass
class TransformedSpace:
    """The transformed metric together with the data it was built from."""

    space: PartialBMetricSpace
    base: PartialBMetricSpace
    map: SelfMap
    n: Optional[int]
    K: Optional[Fraction]
    lam: Fraction
    mode: str = FINITE_SUM
    tail_bound: Fraction = Fraction(0)
    details: dict = field(default_factory=dict)

    def p(self, x, y):
        return self.space.p(x, y)


def _require_finite(space):
    if not space.exact:
        raise TypeError("metric transforms are tabulated on finite spaces only")


def _check_params(n, K, lam):
    if not isinstance(n, int) or n < 2:
        raise ParameterError("power n must be an integer > 1")
    if not 0 < K < 1:
        raise ParameterError("K must lie strictly between 0 and 1")
    # K^(1/n) < 1/lam < 1  <=>  lam > 1 and lam^n K < 1
    if not (lam > 1 and lam ** n * K < 1):
        raise ParameterError(
            f"lam = {lam} must satisfy 1 < lam < K^(-1/n) (K = {K}, n = {n})"
        )


def build_pprime(space, T: SelfMap, n: int, K, lam) -> TransformedSpace:
    """Tabulate ``p'`` exactly.

    Raises:
        ParameterError: if ``n``, ``K`` or ``lam`` are out of range.
        PreconditionError: if the measured Banach constant of ``T^n``
            exceeds ``K`` (or is unbounded).
    """
    _require_finite(space)
    K, lam = exact(K), exact(lam)
    _check_params(n, K, lam)
    T.check_total(space)
    measured = check_banach(space, T.power(n)).constant
    if measured is None or measured > K:
        raise PreconditionError(
            f"T^{n} is not a contraction with constant {K} (measured {measured})"
        )
    tab = space.table
    t = T.indices(space)
    size = len(tab)
    iterates = [list(range(size))]
    for _ in range(n - 1):
        iterates.append([t[k] for k in iterates[-1]])
    weights = [lam ** i for i in range(n)]
    table = [
        [sum(w * tab[it[i]][it[j]] for w, it in zip(weights, iterates)) for j in range(size)]
        for i in range(size)
    ]
    out = PartialBMetricSpace(space.points, table, space.declared_s)
    return TransformedSpace(out, space, T, n, K, lam, FINITE_SUM,
                            details={"measured_power_constant": measured})


@dataclass
class TransformCheck:
    holds: bool
    witness: Optional[tuple]
    identity_holds: bool
    identity_witness: Optional[tuple]


def verify_transform_contraction(t: TransformedSpace) -> TransformCheck:
    """Check ``p'(Tx,Ty) <= p'(x,y) / lam`` on every pair.

    Also checks the exact identity
    ``p'(Tx,Ty) = (p'(x,y) - p(x,y)) / lam + lam^(n-1) p(T^n x, T^n y)``.
    A failure of either is a falsification event.
    """
    T, base, lam = t.map, t.base, t.lam
    Tn = T.power(t.n)
    lam_top = lam ** (t.n - 1)
    holds, identity = True, True
    wit = id_wit = None
    for x in base.points:
        for y in base.points:
            lhs = t.p(T(x), T(y))
            pxy = t.p(x, y)
            if holds and lhs * lam > pxy:
                holds, wit = False, (x, y)
            rhs = (pxy - base.p(x, y)) / lam + lam_top * base.p(Tn(x), Tn(y))
            if identity and lhs != rhs:
                identity, id_wit = False, (x, y)
    return TransformCheck(holds, wit, identity, id_wit)


def _pair_series(tab, t, i, j, lam):
    """Exact value of sum_k lam^k p(T^k x, T^k y) for one pair, or raise.

    The pair orbit is eventually periodic; the sum is finite when the
    periodic part contributes nothing, and for ``lam < 1`` a geometric closed
    form covers the rest.
    """
    seen = {}
    seq = []
    a, b = i, j
    while (a, b) not in seen:
        seen[(a, b)] = len(seq)
        seq.append(tab[a][b])
        a, b = t[a], t[b]
    start = seen[(a, b)]
    prefix = sum(lam ** k * v for k, v in enumerate(seq[:start]))
    cycle = seq[start:]
    if not any(cycle):
        return prefix
    if lam < 1:
        period = len(cycle)
        head = sum(lam ** k * v for k, v in enumerate(cycle))
        return prefix + lam ** start * head / (1 - lam ** period)
    return None


def build_h_series(space, T: SelfMap, lam, tail_tol=0, n: Optional[int] = None,
                   K=None) -> TransformedSpace:
    """Tabulate ``h(x,y) = sum_{i>=0} lam^i p(T^i x, T^i y)`` exactly.

    Sums are exact (``tail_bound`` is always 0, below any ``tail_tol``).
    When ``n`` and ``K`` are given the sandwich
    ``p' <= h <= p' / (1 - lam^n K)`` is checked entrywise and recorded in
    ``details["sandwich_ok"]``.

    Raises:
        DivergenceError: naming a pair whose series diverges.
    """
    _require_finite(space)
    lam = exact(lam)
    if lam <= 0:
        raise ParameterError("lam must be positive")
    T.check_total(space)
    tab = space.table
    t = T.indices(space)
    pts = space.points
    size = len(tab)
    table = []
    for i in range(size):
        row = []
        for j in range(size):
            v = _pair_series(tab, t, i, j, lam)
            if v is None:
                raise DivergenceError(
                    f"series diverges at ({pts[i]!r}, {pts[j]!r}) for lam = {lam}",
                    (pts[i], pts[j]),
                )
            row.append(v)
        table.append(row)
    h = PartialBMetricSpace(pts, table, space.declared_s)
    out = TransformedSpace(h, space, T, n, None if K is None else exact(K), lam, SERIES)
    if n is not None and K is not None:
        pp = build_pprime(space, T, n, K, lam)
        factor = 1 / (1 - lam ** n * out.K)
        ok = all(
            pp.space.table[i][j] <= table[i][j] <= factor * pp.space.table[i][j]
            for i in range(size) for j in range(size)
        )
        out.details.update(sandwich_ok=ok, sandwich_factor=factor)
    return out


@dataclass
class TransferReport:
    verdict: str
    limit: object = None
    tail_start: Optional[int] = None
    reason: str = ""


def check_convergence_transfer(space, T: SelfMap, t: TransformedSpace,
                               seq: Sequence) -> TransferReport:
    """Does a ``p``-convergent sequence with a zero self-distance limit
    converge under ``p'`` as well?

    On a finite space such a sequence is eventually constant at its limit
    ``xi`` (``p(xi, x) = 0`` forces ``x = xi``), so the question reduces to
    ``p'(xi, xi) = 0``. Unmet preconditions give ``"inconclusive"``.
    """
    _require_finite(space)
    seq = list(seq)
    if not seq:
        return TransferReport("inconclusive", reason="empty sequence")
    xi = seq[-1]
    if space.p(xi, xi) != 0:
        return TransferReport("inconclusive", xi,
                              reason="limit has positive self-distance")
    k0 = len(seq) - 1
    while k0 > 0 and seq[k0 - 1] == xi:
        k0 -= 1
    if t.p(xi, xi) != 0:
        # only possible when T carries xi to a point of positive
        # self-distance, i.e. T is not uniformly continuous at xi
        return TransferReport("inconclusive", xi, k0,
                              reason="map does not preserve zero self-distance along the limit's orbit")
    if any(t.p(xi, x) != 0 for x in seq[k0:]):
        return TransferReport("fails", xi, k0, reason="p'-distance to the limit does not vanish")
    return TransferReport("transfers", xi, k0)
