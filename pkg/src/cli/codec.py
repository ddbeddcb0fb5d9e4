"""
Canonical JSON for instances and results.

Every document carries "schema": 1 and a "kind". Points are 0/±n integer
lists, rationals are "num/den" strings, submodular tables are keyed by the
subset bitmask (bit i = element i+1), and graph / surjection indices are
1-indexed. Output is sorted (keys and point lists) so equal objects encode to
identical bytes.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import networkx as nx

from src.functions.mfunc import MFunc, MNatFunc
from src.lattice.core import GroundSet, as_point, format_rat, to_rat
from src.lattice.errors import UsageError
from src.linking.bipartite import bipartite_graph, edge_list, sides
from src.linking.linking_sets import LinkingSet
from src.msets.mconvex import MConvexSet, MNatSet, SetFunction, SubmodularFn

SCHEMA = 1

SET_KINDS = ("m-convex", "mnat")
FUNCTION_KINDS = ("m-func", "mnat-func")


def dumps(doc: Dict[str, Any]) -> str:
    return json.dumps(doc, sort_keys=True, ensure_ascii=False) + "\n"


def _require(doc: Dict[str, Any], keys: Sequence[str]) -> None:
    missing = [k for k in keys if k not in doc]
    if missing:
        raise UsageError(f"document missing required keys: {missing}")


# -----------------------------
# Scalars and ground sets
# -----------------------------

def encode_value(v) -> Union[int, str]:
    v = to_rat(v)
    return v.numerator if v.denominator == 1 else format_rat(v)


def encode_ground(ground: GroundSet) -> Dict[str, Any]:
    out: Dict[str, Any] = {"size": ground.size}
    if ground.labels is not None:
        out["labels"] = list(ground.labels)
    return out


def decode_ground(doc: Dict[str, Any]) -> GroundSet:
    _require(doc, ["size"])
    labels = doc.get("labels")
    return GroundSet(doc["size"], tuple(labels) if labels is not None else None)


def _edge(raw) -> tuple:
    if not isinstance(raw, list) or len(raw) not in (2, 3):
        raise UsageError(f"edge must be [left, right] or [left, right, weight], got {raw!r}")
    a, b = as_point(raw[:2])
    w = to_rat(raw[2]) if len(raw) == 3 else 0
    return a - 1, b - 1, w


def _points(raw) -> List[tuple]:
    if not isinstance(raw, list):
        raise UsageError("points must be a list of integer lists")
    return [as_point(x) for x in raw]


# -----------------------------
# Encoders
# -----------------------------

def encode(obj) -> Dict[str, Any]:
    """Any library object -> schema-1 document."""
    if isinstance(obj, LinkingSet):
        return {
            "schema": SCHEMA,
            "kind": "linking",
            "ground": encode_ground(obj.left.disjoint_union(obj.right)),
            "left_size": obj.left_size,
            "points": [list(x) for x in obj.points],
        }
    if isinstance(obj, (MConvexSet, MNatSet)):
        return {
            "schema": SCHEMA,
            "kind": "m-convex" if isinstance(obj, MConvexSet) else "mnat",
            "ground": encode_ground(obj.ground),
            "points": [list(x) for x in obj.points],
        }
    if isinstance(obj, SetFunction):
        return {
            "schema": SCHEMA,
            "kind": "submodular",
            "ground": encode_ground(obj.ground),
            "table": {str(A): encode_value(v) for A, v in enumerate(obj.table)},
        }
    if isinstance(obj, MFunc):
        return {
            "schema": SCHEMA,
            "kind": "mnat-func" if isinstance(obj, MNatFunc) else "m-func",
            "ground": encode_ground(obj.ground),
            "values": [[list(x), format_rat(v)] for x, v in obj.values],
        }
    if isinstance(obj, nx.Graph):
        v, u = sides(obj)
        return {
            "schema": SCHEMA,
            "kind": "bipartite",
            "left_size": v,
            "right_size": u,
            "edges": [[a + 1, b + 1, encode_value(w)] for a, b, w in edge_list(obj)],
        }
    raise UsageError(f"cannot encode {type(obj).__name__}")


def encode_sequence(kind: str, objs: Sequence) -> Dict[str, Any]:
    """Flags ("flag") and function chains ("chain"), lowest rank first."""
    return {"schema": SCHEMA, "kind": kind, "members": [encode(o) for o in objs]}


# -----------------------------
# Decoders
# -----------------------------

def decode(doc: Dict[str, Any], expect: Optional[Sequence[str]] = None, verify: bool = True):
    if not isinstance(doc, dict):
        raise UsageError("instance document must be a JSON object")
    _require(doc, ["schema", "kind"])
    if doc["schema"] != SCHEMA:
        raise UsageError(f"unsupported schema {doc['schema']!r}, expected {SCHEMA}")
    kind = doc["kind"]
    if expect is not None and kind not in expect:
        raise UsageError(f"expected a document of kind {list(expect)}, got {kind!r}")

    if kind in ("flag", "chain"):
        _require(doc, ["members"])
        return tuple(decode(m, verify=verify) for m in doc["members"])
    if kind == "bipartite":
        _require(doc, ["left_size", "right_size", "edges"])
        edges = [_edge(e) for e in doc["edges"]]
        return bipartite_graph(doc["left_size"], doc["right_size"], edges)
    if kind == "matrix":
        _require(doc, ["rows"])
        return [[to_rat(c) for c in row] for row in doc["rows"]]

    _require(doc, ["ground"])
    ground = decode_ground(doc["ground"])
    if kind == "linking":
        _require(doc, ["left_size", "points"])
        v = doc["left_size"]
        if not 0 < v < ground.size:
            raise UsageError(f"left_size {v} out of range for a ground set of size {ground.size}")
        return LinkingSet(ground.restrict((1 << v) - 1), ground.restrict(ground.full_mask ^ ((1 << v) - 1)),
                          _points(doc["points"]), verify=verify)
    if kind in SET_KINDS:
        _require(doc, ["points"])
        cls = MConvexSet if kind == "m-convex" else MNatSet
        return cls(ground, _points(doc["points"]), verify=verify)
    if kind == "submodular":
        _require(doc, ["table"])
        raw = doc["table"]
        try:
            table = {int(k): v for k, v in raw.items()}
        except (AttributeError, ValueError) as exc:
            raise UsageError("table must map integer bitmasks to values") from exc
        missing = [A for A in range(1 << ground.size) if A not in table]
        if missing:
            raise UsageError(f"table missing subsets: {missing}")
        values = [table[A] for A in range(1 << ground.size)]
        values = [v if isinstance(v, int) and not isinstance(v, bool) else to_rat(v) for v in values]
        return SubmodularFn(ground, values, verify=verify)
    if kind in FUNCTION_KINDS:
        _require(doc, ["values"])
        cls = MFunc if kind == "m-func" else MNatFunc
        try:
            values = [(as_point(x), to_rat(v)) for x, v in doc["values"]]
        except (TypeError, ValueError) as exc:
            raise UsageError("values must be [point, rational] pairs") from exc
        return cls(ground, values, verify=verify)
    raise UsageError(f"unknown document kind {kind!r}")


def load(path: Union[str, Path], expect: Optional[Sequence[str]] = None, verify: bool = True):
    p = Path(path)
    if not p.exists():
        raise UsageError(f"no such file: {p}")
    try:
        doc = json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise UsageError(f"{p} is not valid JSON: {exc.msg}") from exc
    return decode(doc, expect=expect, verify=verify)
