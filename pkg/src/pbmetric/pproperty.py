"""The P property: ``F(T) = F(T^n)`` for every power ``n``."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .contraction import check_orbit_contraction
from .maps import SelfMap
from .picard import fixed_points


@dataclass
class PPropertyReport:
    """Fixed-point sets of ``T`` and its powers on a finite space.

    ``implication`` is ``"skipped"`` when ``F(T)`` is empty, ``"vacuous"``
    when the orbit contraction constant is not below 1, and otherwise
    ``"confirmed"`` or ``"falsified"`` depending on ``holds``.
    """

    fixed: list
    power_sets: dict
    holds: bool
    first_violation: Optional[tuple]
    orbit_lambda: object
    implication: str
    subset_ok: bool

    @property
    def falsified(self) -> bool:
        return self.implication == "falsified" or not self.subset_ok


def p_property(space, T: SelfMap, n_max: Optional[int] = None) -> PPropertyReport:
    """Compare ``F(T)`` with ``F(T^n)`` for ``n = 2..n_max``.

    ``n_max`` defaults to the number of points. When the orbit contraction
    ``p(Tx, T^2 x) <= lam p(x, Tx)`` holds with ``lam < 1`` and ``F(T)`` is
    nonempty the P property is guaranteed, so a mismatch is reported as a
    falsification.
    """
    if n_max is None:
        n_max = max(2, len(space))
    if n_max < 2:
        raise ValueError("n_max must be at least 2")
    base = fixed_points(space, T).points
    base_set = set(base)
    sets, violation, subset_ok = {}, None, True
    Tn = T
    for n in range(2, n_max + 1):
        Tn = T.compose(Tn)
        fn = [x for x in space.points if Tn(x) == x]
        sets[n] = fn
        fn_set = set(fn)
        if not base_set <= fn_set:
            subset_ok = False
        if violation is None and fn_set != base_set:
            extra = sorted(fn_set ^ base_set, key=space.index.__getitem__)
            violation = (n, extra[0])
    lam = check_orbit_contraction(space, T).constant
    holds = violation is None
    if not base:
        implication = "skipped"
    elif lam is None or lam >= 1:
        implication = "vacuous"
    else:
        implication = "confirmed" if holds else "falsified"
    return PPropertyReport(base, sets, holds, violation, lam, implication, subset_ok)
