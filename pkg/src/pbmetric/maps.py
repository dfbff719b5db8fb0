"""Self-maps of a space: explicit finite tables or named closed forms."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import StructuralError


def _exp_shift(shift):
    shift = float(shift)

    def f(x):
        return np.exp(np.asarray(x, dtype=float) - shift)

    return f


MAP_FORMULAS = {"exp_shift": (_exp_shift, ("shift",))}


@dataclass(frozen=True, eq=False)
class SelfMap:
    """A total map from the points of a space to itself.

    Finite maps carry ``table`` (a point -> point dict). Closed-form maps
    carry ``formula`` and ``params`` and act elementwise on floats/arrays;
    ``exp_shift`` is ``x -> exp(x - shift)``.
    """

    table: Optional[dict] = None
    formula: Optional[str] = None
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if (self.table is None) == (self.formula is None):
            raise StructuralError("a map needs exactly one of table or formula")
        if self.formula is not None and self.formula not in MAP_FORMULAS:
            raise StructuralError(f"unknown map formula {self.formula!r}")
        if self.table is not None:
            object.__setattr__(self, "table", dict(self.table))

    @classmethod
    def from_dict(cls, mapping) -> "SelfMap":
        return cls(table=dict(mapping))

    @classmethod
    def closed_form(cls, name: str, **params) -> "SelfMap":
        return cls(formula=name, params=params)

    @classmethod
    def identity(cls, points) -> "SelfMap":
        return cls(table={x: x for x in points})

    @classmethod
    def constant(cls, points, c) -> "SelfMap":
        return cls(table={x: c for x in points})

    @property
    def finite(self) -> bool:
        return self.table is not None

    def __call__(self, x):
        if self.table is not None:
            return self.table[x]
        if not hasattr(self, "_f"):
            build, _ = MAP_FORMULAS[self.formula]
            object.__setattr__(self, "_f", build(**self.params))
        out = self._f(x)
        return float(out) if np.ndim(out) == 0 else out

    def __repr__(self):
        if self.table is not None:
            return f"SelfMap({self.table!r})"
        return f"SelfMap({self.formula}, {self.params})"

    def compose(self, other: "SelfMap") -> "SelfMap":
        """``self o other`` (apply ``other`` first); finite maps only."""
        if not (self.finite and other.finite):
            raise TypeError("composition is only tabulated for finite maps")
        return SelfMap(table={x: self.table[y] for x, y in other.table.items()})

    def power(self, n: int) -> "SelfMap":
        """The n-fold composition; ``power(0)`` is the identity."""
        if n < 0:
            raise ValueError("negative power")
        if not self.finite:
            return self if n == 1 else _Iterated(self, n)
        out = {x: x for x in self.table}
        for _ in range(n):
            out = {x: self.table[y] for x, y in out.items()}
        return SelfMap(table=out)

    def indices(self, space) -> tuple:
        """Image of each point as an index into ``space.points``."""
        idx = space.index
        return tuple(idx[self.table[x]] for x in space.points)

    def check_total(self, space) -> None:
        """Raise unless the map is defined on every point and lands in the space."""
        if not self.finite:
            return
        pts = set(space.points)
        missing = pts - set(self.table)
        if missing:
            raise StructuralError(f"map undefined at {sorted(map(str, missing))}")
        outside = [y for y in self.table.values() if y not in pts]
        if outside:
            raise StructuralError(f"map image {outside[0]!r} is not a point of the space")

    def fixed_points(self) -> list:
        return [x for x, y in self.table.items() if x == y]


class _Iterated(SelfMap):
    """n-fold iterate of a closed-form map, evaluated by repeated application."""

    def __init__(self, base: SelfMap, n: int):
        object.__setattr__(self, "table", None)
        object.__setattr__(self, "formula", base.formula)
        object.__setattr__(self, "params", dict(base.params))
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "n", n)

    def __call__(self, x):
        for _ in range(self.n):
            x = self.base(x)
        return x

    def __repr__(self):
        return f"SelfMap({self.formula}, {self.params})^{self.n}"
