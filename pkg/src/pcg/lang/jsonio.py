"""JSON serialization of graphs.

Layout: {"params": [...], "nodes": [{"id", "kind", "args"}...], "output": id}
with stable field order. Argument encoding is type-directed:

  number / bool          -> literal scalar
  [x, y, z]              -> vec3; components are numbers or reference strings
  "name" / "name.port"   -> reference to a parameter or node output
  [ref, ref, ...]        -> multiple connections into a variadic port
  null                   -> the empty-geometry default (switch fallback)
"""

from __future__ import annotations

import json

from . import registry
from .model import (
    ArgList,
    EMPTY_GEOMETRY,
    Graph,
    Lit,
    Node,
    ParamSpec,
    Ref,
    ValueType,
    VecExpr,
)


class GraphJsonError(ValueError):
    pass


def _encode_scalar_expr(expr):
    if isinstance(expr, Lit):
        return expr.value
    if isinstance(expr, Ref):
        return expr.name if expr.port is None else f"{expr.name}.{expr.port}"
    raise GraphJsonError(f"cannot encode {expr!r} as a scalar")


def _encode_expr(expr):
    if isinstance(expr, Lit):
        if expr == EMPTY_GEOMETRY:
            return None
        if isinstance(expr.value, tuple):
            return list(expr.value)
        return expr.value
    if isinstance(expr, Ref):
        return expr.name if expr.port is None else f"{expr.name}.{expr.port}"
    if isinstance(expr, VecExpr):
        return [_encode_scalar_expr(c) for c in expr.components]
    if isinstance(expr, ArgList):
        return [_encode_expr(item) for item in expr.items]
    raise GraphJsonError(f"cannot encode {expr!r}")


def graph_to_dict(graph: Graph) -> dict:
    params = []
    for p in graph.params:
        entry = {"name": p.name, "type": p.type.value, "default": p.default}
        if p.range is not None:
            entry["range"] = list(p.range)
        params.append(entry)
    nodes = [
        {"id": n.id, "kind": n.kind,
         "args": {name: _encode_expr(e) for name, e in n.args}}
        for n in graph.nodes
    ]
    return {"params": params, "nodes": nodes, "output": graph.output}


def graph_to_json(graph: Graph, indent: int | None = 2) -> str:
    return json.dumps(graph_to_dict(graph), indent=indent) + "\n"


def _decode_ref(text: str) -> Ref:
    if "." in text:
        name, port = text.split(".", 1)
        return Ref(name, port)
    return Ref(text)


def _decode_scalar_expr(raw):
    if isinstance(raw, str):
        return _decode_ref(raw)
    if isinstance(raw, bool) or isinstance(raw, (int, float)):
        return Lit(raw)
    raise GraphJsonError(f"bad scalar argument: {raw!r}")


def _decode_expr(raw, port_type: ValueType | None, variadic: bool):
    if variadic:
        if not isinstance(raw, list):
            raw = [raw]
        return ArgList(tuple(_decode_expr(item, port_type, False) for item in raw))
    if raw is None:
        return EMPTY_GEOMETRY
    if isinstance(raw, str):
        return _decode_ref(raw)
    if isinstance(raw, bool) or isinstance(raw, (int, float)):
        return Lit(raw)
    if isinstance(raw, list):
        if len(raw) != 3:
            raise GraphJsonError(f"vec3 needs 3 components, got {len(raw)}")
        comps = [_decode_scalar_expr(c) for c in raw]
        if all(isinstance(c, Lit) for c in comps):
            return Lit(tuple(float(c.value) for c in comps))
        return VecExpr(tuple(comps))
    raise GraphJsonError(f"bad argument: {raw!r}")


def graph_from_dict(data: dict) -> Graph:
    try:
        params = []
        for p in data.get("params", []):
            rng = tuple(p["range"]) if "range" in p and p["range"] is not None else None
            params.append(ParamSpec(p["name"], ValueType(p["type"]), p["default"], rng))
        nodes = []
        for n in data.get("nodes", []):
            kind = registry.lookup(n["kind"])
            args = []
            for port_name, raw in n.get("args", {}).items():
                port = kind.input_port(port_name) if kind else None
                variadic = bool(kind and kind.variadic and port is not None)
                args.append((port_name,
                             _decode_expr(raw, port.type if port else None, variadic)))
            nodes.append(Node(n["id"], registry.canonical_name(n["kind"]), tuple(args)))
        return Graph(tuple(params), tuple(nodes), data.get("output", ""))
    except (KeyError, TypeError, ValueError) as e:
        raise GraphJsonError(f"malformed graph JSON: {e}") from e


def graph_from_json(text: str) -> Graph:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise GraphJsonError(f"invalid JSON: {e}") from e
    if not isinstance(data, dict):
        raise GraphJsonError("graph JSON must be an object")
    return graph_from_dict(data)
