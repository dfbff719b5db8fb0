"""Contraction conditions for a self-map and their minimal constants.

Each ``check_*`` function scans every ordered pair ``(x, y)`` of the space,
equal pairs included, and returns the least constant for which the
condition holds together with a pair attaining it. Pairs where both sides of
a ratio vanish say nothing (any constant works there) and are skipped; a
positive numerator over a zero denominator means no finite constant exists.

On function-backed spaces the scan runs over the sampling grid, so the
constant is a sampled lower bound of the true supremum.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from ._num import exact
from .errors import AxiomError, ParameterError
from .maps import SelfMap

BANACH = "banach"
CHATTERJEA = "chatterjea"
CHATTERJEA_MAX = "chatterjea-max"
CHATTERJEA_KANNAN = "chatterjea-kannan"
ORBIT = "orbit"

SAMPLED_NOTE = "sampled lower bound of the true supremum"


@dataclass
class ContractionReport:
    """Outcome of testing one contraction condition.

    ``constant`` is ``None`` when no finite constant satisfies the condition.
    ``witness`` is the pair (or, for the orbit condition, the point) where
    the extremal ratio is attained.
    """

    condition: str
    constant: object
    witness: object
    admissible: bool
    threshold: object
    s: object = None
    mode: str = "exact"
    details: dict = field(default_factory=dict)

    @property
    def bounded(self) -> bool:
        return self.constant is not None


@dataclass
class PowerReport:
    """Minimal Banach constants of the iterates ``T^n``, ``n = 2..n_max``."""

    constants: list
    witnesses: list
    least_n: Optional[int]
    mode: str = "exact"

    def constant(self, n: int):
        for m, k in self.constants:
            if m == n:
                return k
        raise KeyError(n)


def _scan_exact(num, den, keys):
    """Max of num/den over ``keys``; returns (Fraction | None, key)."""
    best_n, best_d, arg = 0, 1, None
    for key, a, b in zip(keys, num, den):
        if b == 0:
            if a:
                return None, key
            continue
        if arg is None or a * best_d > best_n * b:
            best_n, best_d, arg = a, b, key
    if arg is None:
        return Fraction(0), None
    return Fraction(best_n, best_d), arg


def _scan_sampled(num: np.ndarray, den: np.ndarray, tol: float):
    """Vectorised counterpart of :func:`_scan_exact` on grid arrays."""
    zero = den <= tol
    unbounded = zero & (num > tol)
    if unbounded.any():
        return None, np.unravel_index(np.argmax(unbounded), num.shape)
    if zero.all():
        return 0.0, None
    ratio = np.where(zero, -np.inf, num / np.where(zero, 1.0, den))
    flat = int(np.argmax(ratio))
    return float(ratio.flat[flat]), np.unravel_index(flat, num.shape)


def _pairs(n):
    return [(i, j) for i in range(n) for j in range(n)]


def _finite_setup(space, T: SelfMap):
    T.check_total(space)
    P, _ = space.scaled
    return P, T.indices(space), space.points


def _name_pair(space, key):
    if key is None:
        return None
    if space.exact:
        return tuple(space.points[i] for i in key)
    g = space.points
    return tuple(float(g[i]) for i in key)


def _ratio_report(space, T, kind, num_den, threshold, s=None, details=None):
    if space.exact:
        P, t, _ = _finite_setup(space, T)
        keys = _pairs(len(P))
        num, den = num_den(P, t, keys)
        value, key = _scan_exact(num, den, keys)
        mode = "exact"
    else:
        g = space.points
        Tg = np.asarray(T(g), dtype=float)
        num, den = num_den(space, g, Tg)
        value, key = _scan_sampled(num, den, space.tol)
        mode = "sampled"
    details = dict(details or {})
    if mode == "sampled":
        details["note"] = SAMPLED_NOTE
    admissible = value is not None and value < threshold
    return ContractionReport(kind, value, _name_pair(space, key), admissible,
                             threshold, s, mode, details)


def _banach_terms(P, t, keys):
    return ([P[t[i]][t[j]] for i, j in keys], [P[i][j] for i, j in keys])


def _banach_sampled(space, g, Tg):
    return space.matrix(Tg, Tg), space.matrix(g, g)


def check_banach(space, T: SelfMap) -> ContractionReport:
    """Least ``lam`` with ``p(Tx,Ty) <= lam * p(x,y)``; admissible iff ``lam < 1``."""
    terms = _banach_terms if space.exact else _banach_sampled
    threshold = Fraction(1) if space.exact else 1.0
    return _ratio_report(space, T, BANACH, terms, threshold)


def check_power_banach(space, T: SelfMap, n_max: int) -> PowerReport:
    """Minimal Banach constant ``K_n`` of ``T^n`` for ``n = 2..n_max``.

    ``least_n`` is the smallest such ``n`` with ``K_n < 1`` (or ``None``).
    """
    if n_max < 2:
        raise ParameterError("n_max must be at least 2")
    consts, wits, least = [], [], None
    Tn = T
    for n in range(2, n_max + 1):
        Tn = T.compose(Tn) if T.finite else T.power(n)
        rep = check_banach(space, Tn)
        consts.append((n, rep.constant))
        wits.append((n, rep.witness))
        if least is None and rep.admissible:
            least = n
    return PowerReport(consts, wits, least, "exact" if space.exact else "sampled")


def _chatterjea_terms(P, t, keys):
    num = [P[t[i]][t[j]] for i, j in keys]
    den = [P[i][t[j]] + P[j][t[i]] for i, j in keys]
    return num, den


def _chatterjea_sampled(space, g, Tg):
    cross = space.matrix(g, Tg)
    return space.matrix(Tg, Tg), cross + cross.T


def _as_s(space, s):
    if s is None:
        s = space.declared_s
    s = exact(s) if space.exact else float(s)
    if s < 1:
        raise ParameterError("coefficient s must be >= 1")
    return s


def check_chatterjea(space, T: SelfMap, s=None) -> ContractionReport:
    """Least ``lam`` with ``p(Tx,Ty) <= lam * [p(x,Ty) + p(y,Tx)]``.

    Admissible iff ``s >= 2`` and ``lam < 1/s**2``. ``details["sharp"]``
    records whether ``lam < 1/s**2`` holds with ``s >= sqrt(2)``, the wider
    range for which the same conclusion is claimed without proof.
    """
    s = _as_s(space, s)
    threshold = 1 / (s * s)
    terms = _chatterjea_terms if space.exact else _chatterjea_sampled
    rep = _ratio_report(space, T, CHATTERJEA, terms, threshold, s,
                        {"precondition": "s >= 2", "precondition_met": s >= 2})
    below = rep.admissible
    rep.admissible = below and s >= 2
    rep.details["sharp"] = below and s * s >= 2
    return rep


def _max_terms(P, t, keys):
    num = [P[t[i]][t[j]] for i, j in keys]
    den = [max(P[i][j], P[i][t[j]], P[j][t[i]]) for i, j in keys]
    return num, den


def _max_sampled(space, g, Tg):
    cross = space.matrix(g, Tg)
    den = np.maximum(space.matrix(g, g), np.maximum(cross, cross.T))
    return space.matrix(Tg, Tg), den


def check_chatterjea_max(space, T: SelfMap, s=None) -> ContractionReport:
    """Least ``lam`` with ``p(Tx,Ty) <= lam * max{p(x,y), p(x,Ty), p(y,Tx)}``.

    Admissible iff ``lam < 1/s``. The accompanying fixed-point result asks
    for ``s > 1``; that is reported in ``details`` but not folded into the
    verdict.
    """
    s = _as_s(space, s)
    terms = _max_terms if space.exact else _max_sampled
    return _ratio_report(space, T, CHATTERJEA_MAX, terms, 1 / s, s,
                         {"precondition": "s > 1", "precondition_met": s > 1})


def picard_rate(lambdas: Sequence, s):
    """Per-step rate implied by the five Chatterjea-Kannan constants.

    ``(2l1 + 2s l3 + s l4 + s l5) / (2 - 2l2 - 2s l3 - s l4 - s l5)``, or
    ``None`` when the denominator is not positive.
    """
    l1, l2, l3, l4, l5 = lambdas
    den = 2 - 2 * l2 - 2 * s * l3 - s * l4 - s * l5
    if den <= 0:
        return None
    return (2 * l1 + 2 * s * l3 + s * l4 + s * l5) / den


def chatterjea_kannan_sum(lambdas: Sequence, s):
    l1, l2, l3, l4, l5 = lambdas
    return l1 + l2 + 2 * s * l3 + s * l4 + s * l5


def _ck_exact(space, T, lam):
    T.check_total(space)
    tab = space.table
    t = T.indices(space)
    n = len(tab)
    l1, l2, l3, l4, l5 = lam
    worst, worst_pair = None, None
    for i in range(n):
        ti = t[i]
        ri = tab[i]
        for j in range(n):
            tj = t[j]
            rj = tab[j]
            pxy = ri[j]
            a, b = ri[ti], rj[tj]          # p(x,Tx), p(y,Ty)
            c, d = ri[tj], rj[ti]          # p(x,Ty), p(y,Tx)
            rhs = l1 * pxy + (l2 * a * b + l3 * c * d + l4 * a * c + l5 * b * d) / (1 + pxy)
            excess = tab[ti][tj] - rhs
            if excess > 0 and (worst is None or excess > worst):
                worst, worst_pair = excess, (space.points[i], space.points[j])
    return worst, worst_pair


def _ck_sampled(space, T, lam):
    g = space.points
    Tg = np.asarray(T(g), dtype=float)
    l1, l2, l3, l4, l5 = (float(v) for v in lam)
    pxy = space.matrix(g, g)
    a = space.p(g, Tg)[:, None]
    b = space.p(g, Tg)[None, :]
    cross = space.matrix(g, Tg)
    c, d = cross, cross.T
    rhs = l1 * pxy + (l2 * a * b + l3 * c * d + l4 * a * c + l5 * b * d) / (1 + pxy)
    excess = space.matrix(Tg, Tg) - rhs
    if (excess > space.tol).any():
        i, j = np.unravel_index(int(np.argmax(excess)), excess.shape)
        return float(excess[i, j]), (float(g[i]), float(g[j]))
    return None, None


def check_chatterjea_kannan(space, T: SelfMap, lambdas: Sequence, s=None) -> ContractionReport:
    """Verify the five-term rational condition for given ``l1..l5``.

    The inequality

        p(Tx,Ty) <= l1 p(x,y) + [l2 p(x,Tx)p(y,Ty) + l3 p(x,Ty)p(y,Tx)
                    + l4 p(x,Tx)p(x,Ty) + l5 p(y,Ty)p(y,Tx)] / (1 + p(x,y))

    is checked on every pair. The report is admissible iff it holds
    everywhere and ``l1 + l2 + 2s l3 + s l4 + s l5 < 1``. ``constant`` holds
    the derived Picard rate (see :func:`picard_rate`); ``witness`` is the
    pair with the largest violation, if any.
    """
    if len(lambdas) != 5:
        raise ParameterError("expected five constants l1..l5")
    s = _as_s(space, s)
    lam = tuple(exact(v) if space.exact else float(v) for v in lambdas)
    if any(v < 0 for v in lam):
        raise ParameterError("constants l1..l5 must be nonnegative")
    if space.exact:
        worst, pair = _ck_exact(space, T, lam)
    else:
        worst, pair = _ck_sampled(space, T, lam)
    total = chatterjea_kannan_sum(lam, s)
    holds = worst is None
    details = {
        "lambdas": lam,
        "inequality_holds": holds,
        "parameter_sum": total,
        "sum_below_one": total < 1,
        "max_violation": worst,
    }
    if not space.exact:
        details["note"] = SAMPLED_NOTE
    return ContractionReport(CHATTERJEA_KANNAN, picard_rate(lam, s), pair,
                             holds and total < 1, 1, s,
                             "exact" if space.exact else "sampled", details)


def check_orbit_contraction(space, T: SelfMap) -> ContractionReport:
    """Least ``lam`` with ``p(Tx, T^2 x) <= lam * p(x, Tx)`` for every x.

    Points with ``p(x,Tx) = 0`` are skipped (then ``Tx = x``); if no point
    remains the constant is 0 by convention. Admissible iff ``lam < 1``.

    Raises:
        AxiomError: if ``p(x,Tx) = 0`` but ``p(Tx,T^2 x) > 0``, which the
            axioms rule out.
    """
    if space.exact:
        P, t, pts = _finite_setup(space, T)
        n = len(P)
        num = [P[t[i]][t[t[i]]] for i in range(n)]
        den = [P[i][t[i]] for i in range(n)]
        value, key = _scan_exact(num, den, list(range(n)))
        witness = None if key is None else pts[key]
        threshold, mode, details = Fraction(1), "exact", {}
    else:
        g = space.points
        Tg = np.asarray(T(g), dtype=float)
        num = space.p(Tg, np.asarray(T(Tg), dtype=float))
        den = space.p(g, Tg)
        value, key = _scan_sampled(num, den, space.tol)
        witness = None if key is None else float(g[key[0]])
        threshold, mode, details = 1.0, "sampled", {"note": SAMPLED_NOTE}
    if value is None:
        raise AxiomError(f"p(x,Tx) = 0 but p(Tx,T^2x) > 0 at x = {witness!r}")
    return ContractionReport(ORBIT, value, witness, value < threshold,
                             threshold, None, mode, details)
