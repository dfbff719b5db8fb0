"""Picard iteration, convergence-rate certificates and fixed-point sets."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ._num import exact
from .errors import ParameterError
from .maps import SelfMap

FIXED = "fixed-point-found"
MAX_ITER = "max-iterations"
DIVERGENT = "divergence-suspected"

GROWTH_STEPS = 10


@dataclass
class IterationTrace:
    """The orbit ``x_0, x_1 = T x_0, ...`` and ``b_n = p(x_n, x_{n+1})``.

    On a finite space a fixed point is declared only on exact equality
    ``x_{n+1} == x_n``. On a function-backed space the stop rule is
    ``p(x_n, x_{n+1}) < tol`` and the verdict is labelled ``"numerical"``.
    """

    orbit: list
    b: list
    verdict: str
    fixed_point: object = None
    self_distance: object = None
    mode: str = "exact"
    space: object = field(default=None, repr=False, compare=False)

    @property
    def iterations(self) -> int:
        return len(self.b)

    @property
    def converged(self) -> bool:
        return self.verdict == FIXED


def iterate(space, T: SelfMap, x0, max_iter: int = 1000, tol: float = 1e-12) -> IterationTrace:
    """Run Picard iteration from ``x0`` for at most ``max_iter`` steps.

    Iteration also stops, with verdict ``"divergence-suspected"``, once
    ``b_n`` has grown for ten consecutive steps. That is a heuristic only.
    """
    if space.exact:
        if x0 not in space.index:
            raise ValueError(f"{x0!r} is not a point of the space")
        T.check_total(space)
    elif not space.contains(x0):
        raise ValueError(f"{x0!r} lies outside [{space.lo}, {space.hi}]")
    p = space.p
    orbit, b = [x0], []
    x = x0
    growth = 0
    for _ in range(max_iter):
        y = T(x)
        d = p(x, y)
        if not space.exact:
            d = float(d)
        if b and d > b[-1]:
            growth += 1
        else:
            growth = 0
        b.append(d)
        orbit.append(y)
        done = (y == x) if space.exact else (d < tol)
        if done:
            mode = "exact" if space.exact else "numerical"
            return IterationTrace(orbit, b, FIXED, y, p(y, y), mode, space)
        if growth >= GROWTH_STEPS:
            return IterationTrace(orbit, b, DIVERGENT, mode=_mode(space), space=space)
        x = y
    return IterationTrace(orbit, b, MAX_ITER, mode=_mode(space), space=space)


def _mode(space):
    return "exact" if space.exact else "numerical"


def iterate_all(space, T: SelfMap, max_iter: Optional[int] = None) -> list:
    """Picard traces from every start point of a finite space."""
    max_iter = max_iter or (len(space) + 1)
    return [iterate(space, T, x, max_iter) for x in space.points]


@dataclass
class RateCertificate:
    """Checks of ``b_n <= mu^n b_0`` and, when ``s*mu < 1``, of the tail bound
    ``p(x_n, x_m) <= s mu^n / (1 - s mu) * p(x_0, x_1)`` on realised pairs."""

    mu: object
    s: object
    step_checks: list
    tail_checked: int = 0
    tail_failures: list = field(default_factory=list)

    @property
    def step_failures(self) -> list:
        return [c for c in self.step_checks if not c[3]]

    @property
    def all_pass(self) -> bool:
        return not self.step_failures and not self.tail_failures


def certify_rate(trace: IterationTrace, mu, s, tol: float = 0.0) -> RateCertificate:
    """Test a trace against the geometric rate ``mu`` and its tail bound.

    ``step_checks`` holds ``(n, b_n, mu^n b_0, ok)`` per step. The tail bound
    is only checked on finite spaces, over every pair ``n < m`` of the trace;
    it is not a supremum over all ``m``.
    """
    space = trace.space
    if space is not None and space.exact:
        mu, s = exact(mu), exact(s)
    else:
        mu, s = float(mu), float(s)
        tol = tol or (space.tol if space is not None else 0.0)
    if not 0 <= mu < 1:
        raise ParameterError("rate mu must lie in [0, 1)")
    b = trace.b
    if not b:
        return RateCertificate(mu, s, [])
    b0 = b[0]
    steps = []
    power = mu ** 0
    for n, bn in enumerate(b):
        bound = power * b0
        steps.append((n, bn, bound, bn <= bound + tol))
        power *= mu
    cert = RateCertificate(mu, s, steps)
    if space is None or not space.exact or s * mu >= 1:
        return cert
    p = space.p
    orbit = trace.orbit
    factor = s / (1 - s * mu) * b0
    power = mu ** 0
    for n in range(len(orbit)):
        bound = factor * power
        for m in range(n + 1, len(orbit)):
            d = p(orbit[n], orbit[m])
            cert.tail_checked += 1
            if d > bound:
                cert.tail_failures.append((n, m, d, bound))
        power *= mu
    return cert


@dataclass
class FixedPointSet:
    """Fixed points ``{u : Tu = u}`` with their self-distances ``p(u,u)``."""

    points: list
    self_distances: dict

    def __len__(self):
        return len(self.points)

    def __contains__(self, x):
        return x in self.self_distances

    @property
    def unique(self):
        return self.points[0] if len(self.points) == 1 else None


def fixed_points(space, T: SelfMap) -> FixedPointSet:
    """Exhaustive, exact fixed-point scan of a finite space."""
    if not space.exact:
        raise TypeError("fixed-point enumeration needs a finite space; "
                        "use iterate() and a residual check instead")
    T.check_total(space)
    pts = [x for x in space.points if T(x) == x]
    return FixedPointSet(pts, {u: space.p(u, u) for u in pts})


def step_ratios(space, trace: IterationTrace, u, floor: float = 0.0) -> list:
    """``p(x_{n+1}, u) / p(x_n, u)`` along a trace.

    Steps with ``p(x_n, u) <= floor`` are skipped; on a function-backed
    space pass a floor above rounding noise.
    """
    out = []
    orbit = trace.orbit
    for x, y in zip(orbit, orbit[1:]):
        d = space.p(x, u)
        if d > floor:
            r = space.p(y, u) / d
            out.append(r if space.exact else float(r))
    return out

