"""JSON curve specifications.

Analytic specs name a catalog factory; sampled specs carry nodes and
values and are interpolated linearly::

    {"kind": "analytic", "name": "circle", "params": {"radius": 1}}
    {"kind": "sampled", "nodes": [0, 1, 2], "values": [[0, 0], [1, 0], [1, 1]]}
"""
from __future__ import annotations

import inspect
import json
import sys
from typing import Any

import jsonschema
import numpy as np

from .arclen import UnitSpeedCurve
from .curves import CATALOG, Curve, sampled
from .errors import SpecError

SCHEMA: dict[str, Any] = {
    "type": "object",
    "required": ["kind"],
    "properties": {
        "kind": {"enum": ["analytic", "sampled"]},
        "name": {"type": "string"},
        "params": {"type": "object"},
        "domain": {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
        "dim": {"type": "integer", "minimum": 1},
        "nodes": {"type": "array", "items": {"type": "number"}, "minItems": 2},
        "values": {
            "type": "array",
            "items": {"type": "array", "items": {"type": "number"}, "minItems": 1},
            "minItems": 2,
        },
    },
    "allOf": [
        {
            "if": {"properties": {"kind": {"const": "analytic"}}},
            "then": {"required": ["name"], "properties": {"name": {"enum": sorted(CATALOG)}}},
        },
        {
            "if": {"properties": {"kind": {"const": "sampled"}}},
            "then": {"required": ["nodes", "values"]},
        },
    ],
}


def validate(doc: Any) -> dict:
    """Schema check plus the array invariants the schema cannot express."""
    try:
        jsonschema.validate(doc, SCHEMA)
    except jsonschema.ValidationError as exc:
        raise SpecError(f"invalid curve spec: {exc.message}") from None
    if doc["kind"] == "sampled":
        nodes = np.asarray(doc["nodes"], dtype=float)
        values = doc["values"]
        if len(values) != nodes.size:
            raise SpecError(f"nodes ({nodes.size}) and values ({len(values)}) differ in length")
        if len({len(v) for v in values}) != 1:
            raise SpecError("values rows differ in dimension")
        if np.any(np.diff(nodes) <= 0):
            raise SpecError("nodes must be strictly increasing")
        if "dim" in doc and doc["dim"] != len(values[0]):
            raise SpecError(f"dim {doc['dim']} does not match values rows of length {len(values[0])}")
        if "domain" in doc and doc["domain"] != [nodes[0], nodes[-1]]:
            raise SpecError("domain of a sampled spec must equal [nodes[0], nodes[-1]]")
    return doc


def to_curve(doc: dict) -> Curve:
    doc = validate(doc)
    if doc["kind"] == "sampled":
        return sampled(np.asarray(doc["nodes"], float), np.asarray(doc["values"], float), doc.get("name", "sampled"))
    factory = CATALOG[doc["name"]]
    params = dict(doc.get("params", {}))
    domain = doc.get("domain")
    if domain is not None:
        try:
            accepts = "domain" in inspect.signature(factory).parameters
        except (TypeError, ValueError):
            accepts = False
        if accepts:
            params["domain"] = tuple(domain)
    try:
        curve = factory(**params)
    except TypeError as exc:
        raise SpecError(f"bad params for {doc['name']!r}: {exc}") from None
    if domain is not None and (curve.lo, curve.hi) != tuple(float(d) for d in domain):
        raise SpecError(f"{doc['name']!r} has fixed domain [{curve.lo}, {curve.hi}]")
    if "dim" in doc and doc["dim"] != curve.dim:
        raise SpecError(f"dim {doc['dim']} does not match {doc['name']!r} (dim {curve.dim})")
    return curve


def load(source: str) -> dict:
    """Read a spec from a path, or from stdin for ``"-"``."""
    try:
        text = sys.stdin.read() if source == "-" else open(source, encoding="utf-8").read()
    except OSError as exc:
        raise SpecError(f"cannot read {source!r}: {exc.strerror}") from None
    try:
        return validate(json.loads(text))
    except json.JSONDecodeError as exc:
        raise SpecError(f"{source}: not JSON ({exc.msg})") from None


def sampled_spec(curve: Curve | UnitSpeedCurve, name: str | None = None) -> dict:
    """A sampled spec for a tabulated curve or a unit-speed representation."""
    if isinstance(curve, UnitSpeedCurve):
        nodes, values, label = curve.s_grid, curve.samples, "unit_speed"
    elif curve.kind == "sampled":
        nodes, values, label = curve.nodes, curve.values, curve.name
    else:
        raise SpecError("only sampled curves and unit-speed representations serialize")
    return {
        "kind": "sampled",
        "name": name or label,
        "dim": int(values.shape[1]),
        "nodes": [float(v) for v in nodes],
        "values": [[float(v) for v in row] for row in values],
    }
