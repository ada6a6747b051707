"""JSON encoding of scheme points.

Complex numbers are ``[re, im]`` pairs.  A point is an object with

* ``"kind"``: surface name; ``"surface_chart"``: optional surface chart;
* ``"chart": "coeff"`` with arrays ``"Q"`` and ``"T"``, or
* ``"chart": "roots"`` with ``"pairs"``, a list of ``[z, t]``, or
* ``"chart": "ah"`` with ``"pu"`` (coefficients of p(u), lowest first) and ``"Q"``.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np

from .points import AHPoint, CoeffChartPoint, RootsChartPoint, SchemePoint
from .poly import MonicPoly, Poly
from .surfaces import CHARTS, SurfaceKind


class PointParseError(ValueError):
    pass


def encode_complex(z) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def encode_array(a) -> list[list[float]]:
    return [encode_complex(z) for z in np.asarray(a, dtype=complex).ravel()]


def point_to_dict(pt: SchemePoint) -> dict[str, Any]:
    if isinstance(pt, AHPoint):
        return {
            "kind": "ah",
            "chart": "ah",
            "pu": encode_array(pt.p_vector()),
            "Q": encode_array(pt.q.chart_coeffs),
        }
    base = {"kind": pt.kind.value, "surface_chart": pt.chart}
    if isinstance(pt, CoeffChartPoint):
        return base | {"chart": "coeff", "Q": encode_array(pt.Q), "T": encode_array(pt.T)}
    pairs = [[encode_complex(z), encode_complex(t)] for z, t in zip(pt.z, pt.t)]
    return base | {"chart": "roots", "pairs": pairs}


def dumps_point(pt: SchemePoint) -> str:
    return json.dumps(point_to_dict(pt), indent=2)


def _complex(value, where: str) -> complex:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    if (
        isinstance(value, list)
        and len(value) == 2
        and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)
    ):
        return complex(value[0], value[1])
    raise PointParseError(f"field {where}: expected a number or [re, im], got {value!r}")


def _array(obj: dict, key: str) -> np.ndarray:
    if key not in obj:
        raise PointParseError(f"field {key!r}: missing")
    value = obj[key]
    if not isinstance(value, list) or not value:
        raise PointParseError(f"field {key!r}: expected a non-empty list")
    return np.array([_complex(v, f"{key}[{i}]") for i, v in enumerate(value)], dtype=complex)


def point_from_dict(obj: Any) -> SchemePoint:
    if not isinstance(obj, dict):
        raise PointParseError("top level: expected an object")
    try:
        kind = SurfaceKind(obj.get("kind"))
    except ValueError:
        raise PointParseError(f"field 'kind': unknown surface {obj.get('kind')!r}") from None
    chart = obj.get("chart")
    surface_chart = obj.get("surface_chart", "")
    if surface_chart and surface_chart not in CHARTS[kind]:
        raise PointParseError(f"field 'surface_chart': {surface_chart!r} not a chart of {kind.value!r}")
    if kind is SurfaceKind.AH and chart != "ah":
        raise PointParseError("field 'chart': the ah surface uses chart 'ah'")
    if chart == "ah":
        if kind is not SurfaceKind.AH:
            raise PointParseError("field 'chart': 'ah' requires kind 'ah'")
        p = _array(obj, "pu")
        Qc = _array(obj, "Q")
        if p.size > 2 * Qc.size:
            raise PointParseError(f"field 'pu': at most {2 * Qc.size} coefficients")
        return AHPoint(Poly(p), MonicPoly.from_chart_coeffs(Qc))
    if chart == "coeff":
        Qc, T = _array(obj, "Q"), _array(obj, "T")
        if Qc.size != T.size:
            raise PointParseError("fields 'Q', 'T': lengths differ")
        return CoeffChartPoint(kind, Qc, T, surface_chart)
    if chart == "roots":
        pairs = obj.get("pairs")
        if not isinstance(pairs, list) or not pairs:
            raise PointParseError("field 'pairs': expected a non-empty list")
        z, t = [], []
        for i, pr in enumerate(pairs):
            if not isinstance(pr, list) or len(pr) != 2:
                raise PointParseError(f"field pairs[{i}]: expected [z, t]")
            z.append(_complex(pr[0], f"pairs[{i}][0]"))
            t.append(_complex(pr[1], f"pairs[{i}][1]"))
        return RootsChartPoint(kind, z, t, surface_chart)
    raise PointParseError(f"field 'chart': expected 'coeff', 'roots' or 'ah', got {chart!r}")


def loads_point(text: str) -> SchemePoint:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PointParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return point_from_dict(obj)


def load_point(path: str | Path) -> SchemePoint:
    return loads_point(Path(path).read_text(encoding="utf-8"))
