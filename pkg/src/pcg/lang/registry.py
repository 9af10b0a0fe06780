"""Node kind registry.

Ships the working subset of node kinds; more can be added with
:func:`register` (the catalog is an extension point, not a closed set).
Lookup is case-insensitive; ``quadrilateral`` is an alias of ``rectangle``.
"""

from __future__ import annotations

from .model import EMPTY_GEOMETRY, Lit, NodeKind, PortSpec, ValueType as VT

_REGISTRY: dict[str, NodeKind] = {}
_ALIASES: dict[str, str] = {"quadrilateral": "rectangle"}


def register(kind: NodeKind) -> NodeKind:
    key = kind.name.lower()
    if key != kind.name:
        raise ValueError(f"kind name must be lowercase: {kind.name!r}")
    _REGISTRY[key] = kind
    return kind


def lookup(name: str) -> NodeKind | None:
    key = name.lower()
    key = _ALIASES.get(key, key)
    return _REGISTRY.get(key)


def canonical_name(name: str) -> str:
    key = name.lower()
    return _ALIASES.get(key, key)


def all_kinds() -> list[NodeKind]:
    return sorted(_REGISTRY.values(), key=lambda k: k.name)


def _port(name, type_, default=None):
    return PortSpec(name, type_, default)


def _f(v):
    return Lit(float(v))


def _i(v):
    return Lit(int(v))


def _v(x, y, z):
    return Lit((float(x), float(y), float(z)))


# --- working subset -------------------------------------------------------

# Pseudo-kinds: `input`/`output` appear as dedicated statement forms in the
# textual grammar, but are registered so tooling can enumerate them.
register(NodeKind("input", inputs=(), outputs=(("value", VT.FLOAT),)))
register(NodeKind("output", inputs=(_port("geometry", VT.GEOMETRY),), outputs=()))

register(NodeKind("cube", inputs=(_port("size", VT.VEC3, _v(1, 1, 1)),),
                  outputs=(("mesh", VT.GEOMETRY),)))
register(NodeKind("cylinder",
                  inputs=(_port("radius", VT.FLOAT, _f(1)),
                          _port("depth", VT.FLOAT, _f(2)),
                          _port("segments", VT.INT, _i(32))),
                  outputs=(("mesh", VT.GEOMETRY),)))
register(NodeKind("sphere",
                  inputs=(_port("radius", VT.FLOAT, _f(1)),
                          _port("rings", VT.INT, _i(16)),
                          _port("segments", VT.INT, _i(32))),
                  outputs=(("mesh", VT.GEOMETRY),)))
register(NodeKind("rectangle",
                  inputs=(_port("width", VT.FLOAT, _f(1)),
                          _port("height", VT.FLOAT, _f(1))),
                  outputs=(("curve", VT.CURVE),)))
register(NodeKind("fillet",
                  inputs=(_port("curve", VT.CURVE),
                          _port("radius", VT.FLOAT),
                          _port("count", VT.INT, _i(8))),
                  outputs=(("curve", VT.CURVE),)))
register(NodeKind("fill", inputs=(_port("curve", VT.CURVE),),
                  outputs=(("mesh", VT.GEOMETRY),)))
register(NodeKind("extrude",
                  inputs=(_port("mesh", VT.GEOMETRY),
                          _port("offset_scale", VT.FLOAT, _f(1))),
                  outputs=(("mesh", VT.GEOMETRY),)))
register(NodeKind("transform",
                  inputs=(_port("geometry", VT.GEOMETRY),
                          _port("translation", VT.VEC3, _v(0, 0, 0)),
                          _port("rotation", VT.VEC3, _v(0, 0, 0)),
                          _port("scale", VT.VEC3, _v(1, 1, 1))),
                  outputs=(("geometry", VT.GEOMETRY),)))
register(NodeKind("translate",
                  inputs=(_port("geometry", VT.GEOMETRY),
                          _port("t", VT.VEC3, _v(0, 0, 0))),
                  outputs=(("geometry", VT.GEOMETRY),)))
register(NodeKind("rotate",
                  inputs=(_port("geometry", VT.GEOMETRY),
                          _port("r", VT.VEC3, _v(0, 0, 0))),
                  outputs=(("geometry", VT.GEOMETRY),)))
register(NodeKind("scale",
                  inputs=(_port("geometry", VT.GEOMETRY),
                          _port("s", VT.VEC3, _v(1, 1, 1))),
                  outputs=(("geometry", VT.GEOMETRY),)))
register(NodeKind("join",
                  inputs=(_port("geometry", VT.GEOMETRY),),
                  outputs=(("geometry", VT.GEOMETRY),),
                  variadic=True))
register(NodeKind("switch",
                  inputs=(_port("flag", VT.BOOL),
                          _port("on_true", VT.GEOMETRY),
                          _port("on_false", VT.GEOMETRY, EMPTY_GEOMETRY)),
                  outputs=(("output", VT.GEOMETRY),)))
register(NodeKind("combine_xyz",
                  inputs=(_port("x", VT.FLOAT, _f(0)),
                          _port("y", VT.FLOAT, _f(0)),
                          _port("z", VT.FLOAT, _f(0))),
                  outputs=(("vector", VT.VEC3),)))
register(NodeKind("instance_on_points",
                  inputs=(_port("points", VT.CURVE),
                          _port("instance", VT.GEOMETRY)),
                  outputs=(("instances", VT.GEOMETRY),)))

for _op in ("add", "subtract", "multiply", "divide"):
    register(NodeKind(_op,
                      inputs=(_port("a", VT.FLOAT, _f(0)),
                              _port("b", VT.FLOAT, _f(0))),
                      outputs=(("value", VT.FLOAT),)))

#: Kinds whose geometry output keeps the (curve vs mesh) type of the input.
SAME_TYPE_KINDS = frozenset({"transform", "translate", "rotate", "scale"})
