"""Canonical pretty-printer for graphs.

Emits params in declaration order, nodes in topological order (ties broken
by original order), then the output line. The printed text re-parses to a
structurally identical graph, and printing that parse is byte-stable.
"""

from __future__ import annotations

from . import registry
from .analysis import topo_order
from .model import ArgList, EMPTY_GEOMETRY, Graph, Lit, Node, Ref, ValueType, VecExpr


def format_scalar(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    return repr(float(value))


def format_expr(expr) -> str:
    if isinstance(expr, Lit):
        if expr == EMPTY_GEOMETRY:
            return "empty"
        if isinstance(expr.value, tuple):
            return "(" + ", ".join(format_scalar(c) for c in expr.value) + ")"
        return format_scalar(expr.value)
    if isinstance(expr, Ref):
        return expr.name if expr.port is None else f"{expr.name}.{expr.port}"
    if isinstance(expr, VecExpr):
        return "(" + ", ".join(format_expr(c) for c in expr.components) + ")"
    raise TypeError(f"cannot format {expr!r}")


def format_node(node: Node) -> str:
    kind = registry.lookup(node.kind)
    parts: list[str] = []
    if kind is not None and kind.variadic:
        arg = node.arg(kind.inputs[0].name)
        if isinstance(arg, ArgList):
            parts = [format_expr(item) for item in arg.items]
        elif arg is not None:
            parts = [format_expr(arg)]
    else:
        order = {p.name: i for i, p in enumerate(kind.inputs)} if kind else {}
        args = sorted(node.args, key=lambda a: order.get(a[0], 99))
        # args filling a gap-free prefix of the port list print positionally
        positional_upto = 0
        for i, (name, _) in enumerate(args):
            if order.get(name) == i:
                positional_upto = i + 1
            else:
                break
        for i, (name, expr) in enumerate(args):
            if i < positional_upto:
                parts.append(format_expr(expr))
            else:
                parts.append(f"{name}={format_expr(expr)}")
    return f"{node.id} = {node.kind}({', '.join(parts)})"


def print_pcg(graph: Graph) -> str:
    """Serialize a valid graph to canonical PCG text."""
    lines: list[str] = []
    for p in graph.params:
        line = f"input {p.name}: {p.type.value} = {format_scalar(p.default)}"
        if p.range is not None:
            line += f" range {format_scalar(p.range[0])}..{format_scalar(p.range[1])}"
        lines.append(line)
    by_id = graph.node_index()
    for nid in topo_order(graph):
        lines.append(format_node(by_id[nid]))
    lines.append(f"output = {graph.output}")
    return "\n".join(lines) + "\n"
