"""T-stability of Picard iteration under perturbed orbits.

A perturbed orbit ``y_0, y_1, ...`` has drift ``p(y_{n+1}, T y_n)``. Picard
iteration is T-stable when every perturbed orbit whose drift vanishes
converges to the fixed point ``q``. Finite runs cannot certify limits, so a
trial only ever says ``"converged"`` or ``"inconclusive"``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence, Union

import numpy as np

from ._num import exact
from .errors import ParameterError, PreconditionError
from .maps import SelfMap

CONVERGED = "converged"
INCONCLUSIVE = "inconclusive"

SAMPLED_STAB_TOL = 1e-8


@dataclass(frozen=True)
class StabilityParams:
    """Chatterjea-Kannan constants ``l1..l5`` and the coefficient ``s``."""

    lambdas: tuple
    s: object

    def __post_init__(self):
        if len(self.lambdas) != 5:
            raise ParameterError("expected five constants l1..l5")
        if any(v < 0 for v in self.lambdas) or self.s < 1:
            raise ParameterError("constants must be nonnegative and s >= 1")

    @classmethod
    def exact(cls, lambdas, s) -> "StabilityParams":
        return cls(tuple(exact(v) for v in lambdas), exact(s))

    @property
    def step_factor(self):
        """Bound on ``p(T y, q) / p(y, q)``: (2l1 + s l4 + s l5) / (2 - 2l3 - s l4 - s l5)."""
        l1, _, l3, l4, l5 = self.lambdas
        s = self.s
        den = 2 - 2 * l3 - s * l4 - s * l5
        if den <= 0:
            return None
        return (2 * l1 + s * l4 + s * l5) / den


@dataclass
class StabilityCondition:
    holds: bool
    lhs: object
    step_factor: object
    contraction: object

    def __bool__(self):
        return self.holds


def stability_condition(params: StabilityParams) -> StabilityCondition:
    """Evaluate ``2s l1 + 2 l3 + (s + s^2)(l4 + l5) < 2``.

    Also reports ``contraction = s * step_factor``, the factor ``h`` in
    ``a_{n+1} <= h a_n + c_n``; it is below 1 exactly when the condition
    holds.
    """
    l1, _, l3, l4, l5 = params.lambdas
    s = params.s
    lhs = 2 * s * l1 + 2 * l3 + (s + s * s) * (l4 + l5)
    factor = params.step_factor
    h = None if factor is None else s * factor
    return StabilityCondition(lhs < 2, lhs, factor, h)


@dataclass
class StabilityTrial:
    """One perturbed orbit and its bookkeeping, aligned index by index.

    ``raw_drift[n] = p(y_{n+1}, T y_n)``, ``drift[n] = s * raw_drift[n]``
    and ``a[n] = p(y_n, q)``.
    """

    y: list
    raw_drift: list
    drift: list
    a: list
    q: object
    verdict: str
    drift_vanished: bool
    a_vanished: bool
    recurrence_ok: Optional[bool] = None
    recurrence_failure: Optional[int] = None
    tol: float = 0.0

    @property
    def falsifies(self) -> bool:
        """Drift vanished but the orbit did not approach ``q``."""
        return self.drift_vanished and not self.a_vanished


Schedule = Union[Sequence, Callable]


def scaled_fixed_point(space, T, q, n_steps):
    """``y_n = n/(n+1) * q`` on a function-backed space."""
    if space.exact:
        raise TypeError("the scaled schedule needs a numeric (function-backed) space")
    return [n / (n + 1) * q for n in range(n_steps + 1)]


def picard_orbit(start=None):
    def schedule(space, T, q, n_steps):
        y = [space.points[0] if start is None else start]
        for _ in range(n_steps):
            y.append(T(y[-1]))
        return y
    return schedule


def constant_offset(offset=0.1, start=None):
    """``y_{n+1} = T y_n + offset`` (clipped to the interval)."""
    def schedule(space, T, q, n_steps):
        if space.exact:
            raise TypeError("constant offsets need a function-backed space")
        y = [space.lo if start is None else start]
        for _ in range(n_steps):
            y.append(float(np.clip(T(y[-1]) + offset, space.lo, space.hi)))
        return y
    return schedule


def geometric_noise(r=1.0, seed=0, start=None):
    """Perturb ``T y_n`` by a random amount of size at most ``r * 2**-n``.

    On a function-backed space the offset is added with a random sign and
    clipped to the interval. On a finite space the next point is the one
    whose excess ``p(w, z) - p(w, w)`` over ``w = T y_n`` is nearest the drawn
    offset; ties go to ``w`` itself when it is among them, otherwise are
    broken at random.
    """
    def schedule(space, T, q, n_steps):
        rng = random.Random(seed)
        if space.exact:
            pts = space.points
            y = [rng.choice(pts) if start is None else start]
            r_ = exact(r)
            for n in range(n_steps):
                w = T(y[-1])
                delta = r_ * Fraction(rng.randint(0, 8), 8) / 2 ** n
                pww = space.p(w, w)
                gaps = [abs(space.p(w, z) - pww - delta) for z in pts]
                best = min(gaps)
                ties = [z for z, g in zip(pts, gaps) if g == best]
                y.append(w if w in ties else rng.choice(ties))
            return y
        y = [rng.uniform(space.lo, space.hi) if start is None else start]
        for n in range(n_steps):
            step = r * 2.0 ** -n * rng.random() * rng.choice((-1, 1))
            y.append(float(np.clip(T(y[-1]) + step, space.lo, space.hi)))
        return y
    return schedule


SCHEDULES = {
    "scaled-fixed-point": lambda **kw: scaled_fixed_point,
    "geometric-noise": geometric_noise,
    "picard": picard_orbit,
    "constant-offset": constant_offset,
}


def make_schedule(name: str, **kwargs) -> Callable:
    try:
        return SCHEDULES[name](**kwargs)
    except KeyError:
        raise ValueError(f"unknown schedule {name!r}; choose from {sorted(SCHEDULES)}") from None


def _vanished(values, tol, exact_mode):
    tail = values[len(values) - max(1, len(values) // 4):]
    if exact_mode:
        return all(v == 0 for v in tail)
    return all(v < tol for v in tail)


def run_perturbed(space, T: SelfMap, q, schedule: Schedule, n_steps: int,
                  tol: Optional[float] = None, s=None,
                  params: Optional[StabilityParams] = None) -> StabilityTrial:
    """Follow a perturbed orbit toward the fixed point ``q``.

    The verdict is ``"converged"`` when both the drift and ``p(y_n, q)`` have
    vanished over the last quarter of the run (exactly 0 on finite spaces,
    below ``tol`` -- default 1e-8 -- otherwise) and ``"inconclusive"`` in
    every other case.

    With ``params``, each step is also checked against
    ``a_{n+1} <= s p(y_{n+1}, T y_n) + s p(T y_n, q)`` and
    ``p(T y_n, q) <= step_factor * a_n``.

    Raises:
        PreconditionError: if ``q`` is not a fixed point with ``p(q,q) = 0``.
    """
    exact_mode = space.exact
    if tol is None:
        tol = 0.0 if exact_mode else SAMPLED_STAB_TOL
    if s is None:
        s = params.s if params is not None else space.declared_s
    s = exact(s) if exact_mode else float(s)
    p = space.p
    if exact_mode:
        if T(q) != q or p(q, q) != 0:
            raise PreconditionError(f"{q!r} is not a fixed point with zero self-distance")
    elif not (abs(float(p(q, T(q)))) <= space.tol and float(p(q, q)) == 0.0):
        raise PreconditionError(f"{q!r} is not a fixed point (residual {float(p(q, T(q)))!r})")

    if callable(schedule):
        y = list(schedule(space, T, q, n_steps))
    else:
        y = list(schedule)
    if len(y) < n_steps + 1:
        raise ParameterError(f"schedule supplies {len(y)} points, need {n_steps + 1}")
    y = y[: n_steps + 1]

    cast = (lambda v: v) if exact_mode else float
    Ty = [T(v) for v in y[:-1]]
    raw = [cast(p(y[n + 1], Ty[n])) for n in range(n_steps)]
    a = [cast(p(v, q)) for v in y]
    trial = StabilityTrial(
        y=y, raw_drift=raw, drift=[s * d for d in raw], a=a, q=q,
        verdict=INCONCLUSIVE,
        drift_vanished=_vanished(raw, tol, exact_mode) if raw else True,
        a_vanished=_vanished(a, tol, exact_mode),
        tol=tol,
    )
    if trial.drift_vanished and trial.a_vanished:
        trial.verdict = CONVERGED
    if params is not None:
        _check_recurrence(trial, space, Ty, s, params)
    return trial


def _check_recurrence(trial, space, Ty, s, params):
    factor = params.step_factor
    slack = 0 if space.exact else space.tol
    trial.recurrence_ok = True
    q, a = trial.q, trial.a
    for n, w in enumerate(Ty):
        pwq = space.p(w, q)
        if not space.exact:
            pwq = float(pwq)
        first = a[n + 1] <= s * trial.raw_drift[n] + s * pwq + slack
        second = factor is not None and pwq <= factor * a[n] + slack
        if not (first and second):
            trial.recurrence_ok = False
            trial.recurrence_failure = n
            return


@dataclass
class LemmaVerdict:
    """Outcome of checking ``a_{n+1} <= h a_n + c_n`` on a finite prefix."""

    premise_holds: bool
    witness: Optional[int] = None
    bound: object = None
    a_last: object = None
    c_vanishes: bool = False
    limit_zero: bool = False
    verdict: str = "premise-failed"
    bounds: list = field(default_factory=list, repr=False)


def check_lemma_sequences(a: Sequence, c: Sequence, h, tol=Fraction(1, 10**6)) -> LemmaVerdict:
    """Check the sequence lemma on finite prefixes in exact arithmetic.

    Verifies the premise at every index, then evaluates the bound
    ``B_N = h^N a_0 + sum_{i<N} h^(N-1-i) c_i`` (which dominates ``a_N``
    whenever the premise holds). The verdict is ``"converges"`` when the
    last quarter of ``c`` and the final bound are both below ``tol``, and
    ``"inconclusive"`` otherwise.
    """
    h = exact(h)
    if not 0 <= h < 1:
        raise ParameterError("h must lie in [0, 1)")
    a = [exact(v) for v in a]
    c = [exact(v) for v in c]
    tol = exact(tol)
    if any(v < 0 for v in a) or any(v < 0 for v in c):
        raise ParameterError("sequences must be nonnegative")
    n = min(len(a) - 1, len(c))
    if n < 1:
        raise ParameterError("need at least a_0, a_1 and c_0")
    for i in range(n):
        if a[i + 1] > h * a[i] + c[i]:
            return LemmaVerdict(False, i, a_last=a[n])
    bounds = [a[0]]
    for i in range(n):
        bounds.append(h * bounds[-1] + c[i])
    c_tail = c[n - max(1, n // 4): n]
    c_vanishes = all(v < tol for v in c_tail)
    limit_zero = c_vanishes and bounds[-1] < tol
    return LemmaVerdict(True, None, bounds[-1], a[n], c_vanishes, limit_zero,
                        "converges" if limit_zero else "inconclusive", bounds)
