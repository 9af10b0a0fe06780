"""Core data model for the PCG graph language.

A graph is a list of declared input parameters, a list of nodes (each one
line in the textual form), and a single output reference. Values flowing
between nodes are typed; see ValueType.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum


class ValueType(Enum):
    FLOAT = "float"
    INT = "int"
    BOOL = "bool"
    VEC3 = "vec3"
    CURVE = "curve"
    GEOMETRY = "geometry"

    def __str__(self) -> str:
        return self.value


#: Types a declared graph parameter may take (controls map to these).
PARAM_TYPES = (ValueType.FLOAT, ValueType.INT, ValueType.BOOL)

IDENT_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")

RESERVED_WORDS = frozenset(
    {"input", "output", "range", "true", "false", "empty"}
    | {t.value for t in ValueType}
)


def is_identifier(name: str) -> bool:
    return bool(IDENT_RE.match(name)) and name not in RESERVED_WORDS


# ---------------------------------------------------------------------------
# Argument expressions
#
# An argument on a node is one of:
#   Lit      - a literal scalar (float/int/bool) or a vec3 of plain floats
#   Ref      - a reference to a parameter, or to a node (optionally .port)
#   VecExpr  - a (x, y, z) vector whose components are scalar Lits or Refs
#   ArgList  - multiple connections into a variadic port (join)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Lit:
    value: float | int | bool | tuple

    def __post_init__(self):
        if isinstance(self.value, list):
            object.__setattr__(self, "value", tuple(self.value))


@dataclass(frozen=True)
class Ref:
    """Reference by name to a parameter or a node output.

    ``port`` is only meaningful for node references; None selects the
    referenced node's first output.
    """

    name: str
    port: str | None = None


@dataclass(frozen=True)
class VecExpr:
    components: tuple  # 3 of Lit | Ref

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))


@dataclass(frozen=True)
class ArgList:
    items: tuple  # of Lit | Ref | VecExpr

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))


Expr = Lit | Ref | VecExpr | ArgList


def normalize_expr(expr):
    """Collapse all-literal vector expressions into plain vec3 literals."""
    if isinstance(expr, VecExpr):
        if all(isinstance(c, Lit) for c in expr.components):
            return Lit(tuple(float(c.value) for c in expr.components))
        return expr
    if isinstance(expr, ArgList):
        return ArgList(tuple(normalize_expr(item) for item in expr.items))
    return expr


@dataclass(frozen=True)
class ParamSpec:
    name: str
    type: ValueType
    default: float | int | bool
    range: tuple | None = None  # (lo, hi), floats/ints only

    def __post_init__(self):
        if self.range is not None:
            object.__setattr__(self, "range", tuple(self.range))


@dataclass(frozen=True)
class PortSpec:
    name: str
    type: ValueType
    default: Expr | None = None  # None means the input is required


#: Sentinel default for geometry ports that fall back to an empty mesh.
EMPTY_GEOMETRY = Lit(value=("__empty__",))


@dataclass(frozen=True)
class NodeKind:
    """A registered operation type with typed input and output ports."""

    name: str
    inputs: tuple  # of PortSpec
    outputs: tuple  # of (port-name, ValueType)
    variadic: bool = False  # single input port collecting many connections

    def __post_init__(self):
        object.__setattr__(self, "inputs", tuple(self.inputs))
        object.__setattr__(self, "outputs", tuple(self.outputs))

    def input_port(self, name: str) -> PortSpec | None:
        for p in self.inputs:
            if p.name == name:
                return p
        return None

    def output_type(self, port: str | None) -> ValueType | None:
        if not self.outputs:
            return None
        if port is None:
            return self.outputs[0][1]
        for pname, ptype in self.outputs:
            if pname == port:
                return ptype
        return None


@dataclass(frozen=True)
class Node:
    id: str
    kind: str  # canonical (lowercase) kind name, resolved via the registry
    args: tuple  # of (port-name, Expr), ordered as written
    line: int = field(default=0, compare=False)

    def __post_init__(self):
        items = self.args.items() if isinstance(self.args, dict) else self.args
        object.__setattr__(
            self, "args",
            tuple((name, normalize_expr(expr)) for name, expr in items))

    def arg(self, port: str) -> Expr | None:
        for name, expr in self.args:
            if name == port:
                return expr
        return None

    def arg_ports(self) -> list[str]:
        return [name for name, _ in self.args]


@dataclass(frozen=True)
class Graph:
    params: tuple  # of ParamSpec, declaration order
    nodes: tuple  # of Node
    output: str  # node id whose value is the graph result
    output_line: int = field(default=0, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "params", tuple(self.params))
        object.__setattr__(self, "nodes", tuple(self.nodes))

    def param(self, name: str) -> ParamSpec | None:
        for p in self.params:
            if p.name == name:
                return p
        return None

    def node(self, node_id: str) -> Node | None:
        for n in self.nodes:
            if n.id == node_id:
                return n
        return None

    def node_index(self) -> dict:
        return {n.id: n for n in self.nodes}

    def param_index(self) -> dict:
        return {p.name: p for p in self.params}


class Severity(Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class Diagnostic:
    severity: Severity
    line: int  # 1-based into the source; 0 for programmatic graphs
    message: str
    code: str

    def __str__(self) -> str:
        return f"{self.line}: {self.severity.value}[{self.code}]: {self.message}"


def error(line: int, code: str, message: str) -> Diagnostic:
    return Diagnostic(Severity.ERROR, line, message, code)


def warning(line: int, code: str, message: str) -> Diagnostic:
    return Diagnostic(Severity.WARNING, line, message, code)


# Stable diagnostic codes; parse/validate only ever emit these.
class Codes:
    LEX = "LexError"
    SYNTAX = "SyntaxError"
    UNKNOWN_KIND = "UnknownNodeKind"
    DUPLICATE_ID = "DuplicateId"
    DUPLICATE_PARAM = "DuplicateParam"
    UNRESOLVED = "UnresolvedReference"
    CYCLE = "CycleDetected"
    TYPE_MISMATCH = "TypeMismatch"
    MISSING_OUTPUT = "MissingOutput"
    UNKNOWN_PORT = "UnknownPort"
    MISSING_INPUT = "MissingInput"
    BAD_PARAM = "BadParamSpec"
