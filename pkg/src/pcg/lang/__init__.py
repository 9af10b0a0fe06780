"""PCG language: model, parser, validator, printer, token accounting."""

from .model import (
    ArgList,
    Codes,
    Diagnostic,
    EMPTY_GEOMETRY,
    Graph,
    Lit,
    Node,
    NodeKind,
    ParamSpec,
    PortSpec,
    Ref,
    Severity,
    ValueType,
    VecExpr,
)
from .registry import all_kinds, canonical_name, lookup, register
from .parser import ParseResult, parse_pcg
from .printer import print_pcg
from .analysis import (
    CycleError,
    canonical,
    list_params,
    node_references,
    topo_order,
    validate,
)
from .tokens import count_tokens
from .jsonio import (
    GraphJsonError,
    graph_from_dict,
    graph_from_json,
    graph_to_dict,
    graph_to_json,
)

__all__ = [
    "ArgList", "Codes", "CycleError", "Diagnostic", "EMPTY_GEOMETRY", "Graph",
    "GraphJsonError", "Lit", "Node", "NodeKind", "ParamSpec", "ParseResult",
    "PortSpec", "Ref", "Severity", "ValueType", "VecExpr", "all_kinds",
    "canonical", "canonical_name", "count_tokens", "graph_from_dict",
    "graph_from_json", "graph_to_dict", "graph_to_json", "list_params",
    "lookup", "node_references", "parse_pcg", "print_pcg", "register",
    "topo_order", "validate",
]
