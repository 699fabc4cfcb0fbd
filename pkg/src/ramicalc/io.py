"""JSON schemas and (de)serialization for every file format the CLI reads or writes."""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any, List, Optional

import jsonschema

from .errors import MalformedInputError
from .galois import GaloisDecomposition
from .gl import EndoClassProfile, Level
from .herbrand import TwistSample
from .plf import as_rational, format_rational
from .ultrametric import UltrametricTable

_RATIONAL = {
    "oneOf": [
        {"type": "integer"},
        {"type": "string", "pattern": r"^\s*-?\d+(\s*/\s*\d+)?\s*$"},
    ]
}

PROFILE_SCHEMA = {
    "type": "object",
    "required": ["p", "deg", "e", "f", "m", "k0", "trivial", "tower"],
    "additionalProperties": False,
    "properties": {
        "p": {"type": "integer"},
        "deg": {"type": "integer"},
        "e": {"type": "integer"},
        "f": {"type": "integer"},
        "m": _RATIONAL,
        "k0": {"oneOf": [_RATIONAL, {"type": "null"}]},
        "trivial": {"type": "boolean"},
        "tower": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["jump", "d", "ex", "c"],
                "additionalProperties": False,
                "properties": {
                    "jump": _RATIONAL,
                    "d": {"type": "integer"},
                    "ex": {"type": "integer"},
                    "c": {"type": "integer"},
                },
            },
        },
    },
}

DECOMPOSITION_SCHEMA = {
    "type": "object",
    "required": ["dim", "components"],
    "additionalProperties": False,
    "properties": {
        "dim": {"type": "integer"},
        "components": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["dim", "swan"],
                "additionalProperties": False,
                "properties": {"dim": {"type": "integer"}, "swan": {"type": "integer"}},
            },
        },
    },
}

TABLE_SCHEMA = {
    "type": "object",
    "required": ["labels", "dist"],
    "additionalProperties": False,
    "properties": {
        "labels": {"type": "array", "items": {"type": ["string", "integer"]}},
        "dist": {"type": "array", "items": {"type": "array", "items": _RATIONAL}},
        "separating": {"type": "boolean"},
    },
}

SAMPLE_SCHEMA = {
    "type": "object",
    "required": ["e", "k", "value"],
    "additionalProperties": False,
    "properties": {"e": {"type": "integer"}, "k": {"type": "integer"}, "value": _RATIONAL},
}

SAMPLES_SCHEMA = {"type": "array", "items": SAMPLE_SCHEMA}


def parse_rational(v, max_denom: Optional[int] = None) -> Fraction:
    try:
        q = as_rational(v.replace(" ", "") if isinstance(v, str) else v)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise MalformedInputError(f"bad rational {v!r}: {exc}") from None
    if max_denom is not None and q.denominator > max_denom:
        raise MalformedInputError(f"denominator of {format_rational(q)} exceeds the limit {max_denom}")
    return q


def _check(obj, schema, what):
    try:
        jsonschema.validate(obj, schema)
    except jsonschema.ValidationError as exc:
        loc = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise MalformedInputError(f"{what}: {exc.message} at {loc}") from None


def profile_from_json(obj: Any, max_denom: Optional[int] = None) -> EndoClassProfile:
    _check(obj, PROFILE_SCHEMA, "profile")
    q = lambda v: parse_rational(v, max_denom)  # noqa: E731
    tower = obj["tower"]
    return EndoClassProfile(
        p=obj["p"],
        deg=obj["deg"],
        e=obj["e"],
        f=obj["f"],
        m=q(obj["m"]),
        k0=None if obj["k0"] is None else q(obj["k0"]),
        jumps=tuple(q(t["jump"]) for t in tower),
        levels=tuple(Level(t["d"], t["ex"], t["c"]) for t in tower),
        trivial=obj["trivial"],
    )


def profile_to_json(prof: EndoClassProfile) -> dict:
    return {
        "p": prof.p,
        "deg": prof.deg,
        "e": prof.e,
        "f": prof.f,
        "m": format_rational(prof.m),
        "k0": None if prof.k0 is None else format_rational(prof.k0),
        "trivial": prof.trivial,
        "tower": [
            {"jump": format_rational(y), "d": lev.d, "ex": lev.e_x, "c": lev.c}
            for y, lev in zip(prof.jumps, prof.levels)
        ],
    }


def decomposition_from_json(obj: Any) -> GaloisDecomposition:
    _check(obj, DECOMPOSITION_SCHEMA, "decomposition")
    return GaloisDecomposition(obj["dim"], tuple((c["dim"], c["swan"]) for c in obj["components"]))


def decomposition_to_json(d: GaloisDecomposition) -> dict:
    return {"dim": d.dim_sigma, "components": [{"dim": a, "swan": b} for a, b in d.components]}


def table_from_json(obj: Any, max_denom: Optional[int] = None) -> UltrametricTable:
    _check(obj, TABLE_SCHEMA, "ultrametric table")
    rows = tuple(tuple(parse_rational(v, max_denom) for v in row) for row in obj["dist"])
    return UltrametricTable(tuple(obj["labels"]), rows, obj.get("separating", True))


def table_to_json(t: UltrametricTable) -> dict:
    return {
        "labels": list(t.labels),
        "dist": [[format_rational(v) for v in row] for row in t.dist],
        "separating": t.separating,
    }


def samples_from_json(obj: Any, max_denom: Optional[int] = None) -> List[TwistSample]:
    _check(obj, SAMPLES_SCHEMA, "twist samples")
    return [TwistSample(s["e"], s["k"], parse_rational(s["value"], max_denom)) for s in obj]


def sample_to_json(s: TwistSample) -> dict:
    return {"e": s.e, "k": s.k, "value": format_rational(s.value)}


def read_json(path) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise MalformedInputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInputError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"
