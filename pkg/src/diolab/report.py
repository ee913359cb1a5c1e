"""Serialization helpers shared by reports and the CLI."""

from __future__ import annotations

import json
from dataclasses import asdict, is_dataclass
from fractions import Fraction

import mpmath

from .scalars import Dec, Surd

SCHEMA_VERSION = 1


def scalar_json(x):
    """JSON-friendly representation of a scalar: exact values keep an exact
    text form next to a float approximation."""
    if isinstance(x, int):
        return {"exact": str(x), "float": float(x)}
    if isinstance(x, Fraction):
        return {"exact": f"{x.numerator}/{x.denominator}", "float": x.numerator / x.denominator}
    if isinstance(x, Surd):
        return {
            "exact": f"({x.a}{x.b:+d}*sqrt({x.D}))/{x.c}",
            "float": float(x),
        }
    if isinstance(x, Dec):
        return {
            "float": float(x.val),
            "err": float(x.err),
        }
    if isinstance(x, float):
        return {"float": x}
    raise TypeError(f"not a scalar: {x!r}")


def to_jsonable(obj):
    if is_dataclass(obj) and not isinstance(obj, type):
        return {k: to_jsonable(v) for k, v in asdict(obj).items()}
    if isinstance(obj, (Fraction, Surd, Dec)):
        return scalar_json(obj)
    if isinstance(obj, mpmath.mpf):
        return float(obj)
    if isinstance(obj, dict):
        return {k: to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    return obj


def json_line(record: dict) -> str:
    return json.dumps(to_jsonable(record), sort_keys=True)
