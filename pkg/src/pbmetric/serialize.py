"""JSON layouts for spaces, maps, transformed spaces and reports.

Finite space::

    {"points": [1, 2, 3], "p": [["0", "1/2", ...], ...], "declared_s": "4"}

Function-backed space::

    {"interval": [0, 1], "formula": "abs_diff_pow_k", "params": {"k": 2},
     "grid": 51, "declared_s": 4}

Map: ``{"map": {"x": Tx, ...}}`` with keys matched against the space's
points (a list of ``[x, Tx]`` pairs is also accepted), or
``{"formula": "exp_shift", "params": {"shift": 2}}`` (``"lambda"`` is
accepted for ``"shift"``).

Rationals are written as ``"a/b"`` strings so that nothing is lost.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import math
from fractions import Fraction
from pathlib import Path
from typing import Optional

import numpy as np

from ._num import exact, qstr
from .errors import FormatError, StructuralError
from .maps import MAP_FORMULAS, SelfMap
from .space import FunctionSpace, PartialBMetricSpace


def _rational(value, field):
    try:
        return exact(value)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise FormatError(f"{field}: not a rational number: {value!r}", field) from exc


def _require(data, key, where):
    if not isinstance(data, dict):
        raise FormatError(f"{where}: expected a JSON object", where)
    if key not in data:
        raise FormatError(f"{where}: missing field {key!r}", key)
    return data[key]


def space_to_dict(space) -> dict:
    if space.exact:
        return {
            "points": list(space.points),
            "p": [[qstr(v) for v in row] for row in space.table],
            "declared_s": qstr(space.declared_s),
        }
    return {
        "interval": [space.lo, space.hi],
        "formula": space.formula,
        "params": dict(space.params),
        "grid": space.grid,
        "declared_s": space.declared_s,
    }


def space_from_dict(data) -> "PartialBMetricSpace | FunctionSpace":
    """Build a space from its JSON layout.

    Raises:
        FormatError: naming the offending field.
    """
    if not isinstance(data, dict):
        raise FormatError("space: expected a JSON object", "space")
    if "interval" in data:
        interval = data["interval"]
        if not (isinstance(interval, list) and len(interval) == 2):
            raise FormatError("interval: expected [lo, hi]", "interval")
        try:
            lo, hi = (float(v) for v in interval)
        except (TypeError, ValueError) as exc:
            raise FormatError("interval: bounds must be numbers", "interval") from exc
        params = data.get("params", {"k": 2})
        if not isinstance(params, dict):
            raise FormatError("params: expected an object", "params")
        grid = data.get("grid", 51)
        if not isinstance(grid, int) or grid < 2:
            raise FormatError("grid: expected an integer >= 2", "grid")
        try:
            return FunctionSpace(lo, hi, data.get("formula", "abs_diff_pow_k"), params,
                                 grid, float(data.get("declared_s", 1)))
        except StructuralError as exc:
            raise FormatError(str(exc), "formula" if "formula" in str(exc) else "interval") from exc
        except (TypeError, ValueError) as exc:
            raise FormatError(f"declared_s: {exc}", "declared_s") from exc
    points = _require(data, "points", "space")
    rows = _require(data, "p", "space")
    if not isinstance(points, list):
        raise FormatError("points: expected a list", "points")
    if any(not isinstance(x, (int, str)) or isinstance(x, bool) for x in points):
        raise FormatError("points: identifiers must be integers or strings", "points")
    if not isinstance(rows, list) or any(not isinstance(r, list) for r in rows):
        raise FormatError("p: expected a list of rows", "p")
    table = [[_rational(v, f"p[{i}][{j}]") for j, v in enumerate(r)] for i, r in enumerate(rows)]
    s = _rational(data.get("declared_s", 1), "declared_s")
    try:
        return PartialBMetricSpace(points, table, s)
    except StructuralError as exc:
        field = "points" if "duplicate" in str(exc) else "p"
        raise FormatError(str(exc), field) from exc


def map_to_dict(T: SelfMap) -> dict:
    if T.finite:
        return {"map": {str(x): y for x, y in T.table.items()}}
    return {"formula": T.formula, "params": dict(T.params)}


def map_from_dict(data, space=None) -> SelfMap:
    """Build a map from its JSON layout; ``space`` resolves string keys."""
    if not isinstance(data, dict):
        raise FormatError("map: expected a JSON object", "map")
    if "formula" in data:
        params = data.get("params", {})
        if not isinstance(params, dict):
            raise FormatError("params: expected an object", "params")
        if "lambda" in params and "shift" not in params:
            params = {("shift" if k == "lambda" else k): v for k, v in params.items()}
        if data["formula"] not in MAP_FORMULAS:
            raise FormatError(f"formula: unknown map formula {data['formula']!r}", "formula")
        expected = set(MAP_FORMULAS[data["formula"]][1])
        if set(params) != expected:
            raise FormatError(f"params: expected {sorted(expected)}, got {sorted(params)}", "params")
        return SelfMap.closed_form(data["formula"], **params)
    entries = _require(data, "map", "map")
    if isinstance(entries, dict):
        lookup = {}
        if space is not None and space.exact:
            lookup = {str(x): x for x in space.points}
        table = {lookup.get(k, k): lookup.get(str(v), v) if isinstance(v, str) else v
                 for k, v in entries.items()}
    elif isinstance(entries, list):
        if any(not (isinstance(e, list) and len(e) == 2) for e in entries):
            raise FormatError("map: entries must be [x, Tx] pairs", "map")
        try:
            table = {x: y for x, y in entries}
        except TypeError as exc:
            raise FormatError("map: point identifiers must be integers or strings", "map") from exc
    else:
        raise FormatError("map: expected a list of pairs or an object", "map")
    T = SelfMap(table=table)
    if space is not None and space.exact:
        try:
            T.check_total(space)
        except StructuralError as exc:
            raise FormatError(str(exc), "map") from exc
    return T


def digest(data: dict) -> str:
    """sha256 of the canonical JSON encoding."""
    text = json.dumps(data, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()


def transformed_to_dict(t) -> dict:
    """Transformed space plus a provenance block tying it to its inputs."""
    out = space_to_dict(t.space)
    base, tmap = space_to_dict(t.base), map_to_dict(t.map)
    out["provenance"] = {
        "kind": t.mode,
        "power": t.n,
        "K": None if t.K is None else qstr(t.K),
        "lambda": qstr(t.lam),
        "base_sha256": digest(base),
        "map_sha256": digest(tmap),
        "base": base,
        "map": tmap,
    }
    return out


def check_provenance(data: dict) -> bool:
    """True iff the embedded base space and map match their recorded hashes."""
    prov = _require(data, "provenance", "transformed space")
    return (digest(_require(prov, "base", "provenance")) == prov.get("base_sha256")
            and digest(_require(prov, "map", "provenance")) == prov.get("map_sha256"))


def to_jsonable(obj):
    """Recursively convert reports to JSON-ready values (rationals as strings)."""
    if isinstance(obj, Fraction):
        return qstr(obj)
    if isinstance(obj, (bool, str)) or obj is None:
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else repr(v)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, PartialBMetricSpace) or isinstance(obj, FunctionSpace):
        return space_to_dict(obj)
    if isinstance(obj, SelfMap):
        return map_to_dict(obj)
    if dataclasses.is_dataclass(obj):
        out = {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)
               if f.repr}
        return out
    if isinstance(obj, dict):
        return {str(k) if not isinstance(k, str) else k: to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        return [to_jsonable(v) for v in obj]
    return repr(obj)


def read_json(path, field: str = "file") -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise FormatError(f"{field}: cannot read {path}: {exc.strerror}", field) from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{field}: invalid JSON ({exc.msg} at line {exc.lineno})", field) from exc


def load_space(path):
    return space_from_dict(read_json(path, "space"))


def load_map(path, space=None) -> SelfMap:
    return map_from_dict(read_json(path, "map"), space)


def dump(data, path: Optional[str] = None) -> str:
    text = json.dumps(to_jsonable(data), indent=2)
    if path is not None:
        Path(path).write_text(text + "\n")
    return text
