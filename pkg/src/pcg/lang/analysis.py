"""Graph validation, topological ordering, and static type checking.

validate() never raises and never stops early: every violation in the graph
turns into its own Diagnostic so callers see the full picture at once.
"""

from __future__ import annotations

import heapq

from . import registry
from .model import (
    ArgList,
    Codes,
    Diagnostic,
    EMPTY_GEOMETRY,
    Graph,
    Lit,
    Node,
    PARAM_TYPES,
    ParamSpec,
    Ref,
    ValueType as VT,
    VecExpr,
    error,
    is_identifier,
)


class CycleError(Exception):
    """Raised by topo_order when the reference structure is not a DAG."""

    def __init__(self, cycle: list[str]):
        super().__init__(" -> ".join(cycle))
        self.cycle = cycle


def _assignable(src: VT, dst: VT) -> bool:
    if src == dst:
        return True
    if src == VT.INT and dst == VT.FLOAT:
        return True
    # A curve is a geometry; the value passes through unconverted.
    if src == VT.CURVE and dst == VT.GEOMETRY:
        return True
    return False


def iter_arg_exprs(node: Node):
    """Yield (port, expr) pairs with ArgList items flattened."""
    for port, expr in node.args:
        if isinstance(expr, ArgList):
            for item in expr.items:
                yield port, item
        else:
            yield port, expr


def node_references(node: Node) -> list[Ref]:
    refs = []
    for _, expr in iter_arg_exprs(node):
        if isinstance(expr, Ref):
            refs.append(expr)
        elif isinstance(expr, VecExpr):
            refs.extend(c for c in expr.components if isinstance(c, Ref))
    return refs


def list_params(graph: Graph) -> list[ParamSpec]:
    """Declared parameters in declaration order (the UI control list)."""
    return list(graph.params)


def topo_order(graph: Graph) -> list[str]:
    """Node ids ordered so references precede uses.

    Ties break on original declaration order, so the result is deterministic
    for a fixed graph. Raises CycleError if the graph is not a DAG.
    """
    index = {n.id: i for i, n in enumerate(graph.nodes)}
    dependents: dict[str, list[str]] = {n.id: [] for n in graph.nodes}
    indegree = {n.id: 0 for n in graph.nodes}
    for n in graph.nodes:
        for ref in node_references(n):
            if ref.name in index and ref.name != n.id:
                dependents[ref.name].append(n.id)
                indegree[n.id] += 1
            elif ref.name == n.id:
                raise CycleError([n.id, n.id])
    ready = [(index[nid], nid) for nid, deg in indegree.items() if deg == 0]
    heapq.heapify(ready)
    order: list[str] = []
    while ready:
        _, nid = heapq.heappop(ready)
        order.append(nid)
        for dep in dependents[nid]:
            indegree[dep] -= 1
            if indegree[dep] == 0:
                heapq.heappush(ready, (index[dep], dep))
    if len(order) != len(graph.nodes):
        raise CycleError(_find_cycles(graph)[0])
    return order


def canonical(graph: Graph) -> Graph:
    """The graph with nodes reordered into canonical (topological) order."""
    order = topo_order(graph)
    by_id = graph.node_index()
    return Graph(graph.params, tuple(by_id[i] for i in order), graph.output)


def _find_cycles(graph: Graph) -> list[list[str]]:
    """Reference cycles, one representative path per strongly connected set."""
    ids = {n.id for n in graph.nodes}
    adj = {
        n.id: sorted({r.name for r in node_references(n) if r.name in ids})
        for n in graph.nodes
    }
    # Tarjan SCC, iterative.
    counter = [0]
    idx: dict[str, int] = {}
    low: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    cycles: list[list[str]] = []

    for root in (n.id for n in graph.nodes):
        if root in idx:
            continue
        work = [(root, 0)]
        while work:
            v, pi = work[-1]
            if pi == 0:
                idx[v] = low[v] = counter[0]
                counter[0] += 1
                stack.append(v)
                on_stack.add(v)
            advanced = False
            for j in range(pi, len(adj[v])):
                w = adj[v][j]
                if w not in idx:
                    work[-1] = (v, j + 1)
                    work.append((w, 0))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], idx[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == idx[v]:
                scc = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    scc.append(w)
                    if w == v:
                        break
                if len(scc) > 1 or v in adj[v]:
                    cycles.append(list(reversed(scc)))
    return cycles


def _check_params(graph: Graph, diags: list) -> dict[str, VT]:
    types: dict[str, VT] = {}
    seen: set[str] = set()
    for p in graph.params:
        line = 0
        if not is_identifier(p.name):
            diags.append(error(line, Codes.BAD_PARAM,
                               f"parameter name {p.name!r} is not a valid identifier"))
            continue
        if p.name in seen:
            diags.append(error(line, Codes.DUPLICATE_PARAM,
                               f"duplicate parameter {p.name!r}"))
            continue
        seen.add(p.name)
        if p.type not in PARAM_TYPES:
            diags.append(error(line, Codes.BAD_PARAM,
                               f"parameter {p.name!r} must be float, int or bool"))
            continue
        types[p.name] = p.type
        if p.type == VT.BOOL:
            if not isinstance(p.default, bool):
                diags.append(error(line, Codes.BAD_PARAM,
                                   f"default of bool parameter {p.name!r} must be true/false"))
            if p.range is not None:
                diags.append(error(line, Codes.BAD_PARAM,
                                   f"bool parameter {p.name!r} cannot declare a range"))
            continue
        if isinstance(p.default, bool) or not isinstance(p.default, (int, float)):
            diags.append(error(line, Codes.BAD_PARAM,
                               f"default of {p.name!r} must be numeric"))
            continue
        if p.type == VT.INT and not isinstance(p.default, int):
            diags.append(error(line, Codes.BAD_PARAM,
                               f"default of int parameter {p.name!r} must be an integer"))
        if p.range is not None:
            lo, hi = p.range
            if lo > hi:
                diags.append(error(line, Codes.BAD_PARAM,
                                   f"range of {p.name!r} is empty ({lo}..{hi})"))
            elif not (lo <= p.default <= hi):
                diags.append(error(line, Codes.BAD_PARAM,
                                   f"default {p.default} of {p.name!r} outside range {lo}..{hi}"))
    return types


def _expr_type(expr, param_types, node_types, graph, diags, line) -> VT | None:
    if isinstance(expr, Lit):
        if expr == EMPTY_GEOMETRY:
            return VT.GEOMETRY
        v = expr.value
        if isinstance(v, bool):
            return VT.BOOL
        if isinstance(v, int):
            return VT.INT
        if isinstance(v, float):
            return VT.FLOAT
        if isinstance(v, tuple):
            return VT.VEC3
        return None
    if isinstance(expr, Ref):
        if expr.name in param_types:
            if expr.port is not None:
                diags.append(error(line, Codes.UNRESOLVED,
                                   f"parameter {expr.name!r} has no port {expr.port!r}"))
                return None
            return param_types[expr.name]
        node = graph.node(expr.name)
        if node is None:
            diags.append(error(line, Codes.UNRESOLVED,
                               f"reference to unknown name {expr.name!r}"))
            return None
        kind = registry.lookup(node.kind)
        if kind is None:
            return None  # reported on the node itself
        out = kind.output_type(expr.port)
        if out is None:
            diags.append(error(line, Codes.UNRESOLVED,
                               f"node {expr.name!r} has no output port {expr.port!r}"))
            return None
        if expr.port is None or expr.port == kind.outputs[0][0]:
            return node_types.get(expr.name, out)
        return out
    if isinstance(expr, VecExpr):
        for comp in expr.components:
            ctype = _expr_type(comp, param_types, node_types, graph, diags, line)
            if ctype is not None and ctype not in (VT.FLOAT, VT.INT):
                diags.append(error(line, Codes.TYPE_MISMATCH,
                                   f"vector component must be float or int, got {ctype}"))
        return VT.VEC3
    return None


def _narrowed_output(node: Node, kind, arg_types: dict) -> VT:
    declared = kind.outputs[0][1] if kind.outputs else VT.GEOMETRY
    if kind.name in registry.SAME_TYPE_KINDS:
        if arg_types.get("geometry") == VT.CURVE:
            return VT.CURVE
    elif kind.name == "switch":
        if arg_types.get("on_true") == VT.CURVE and arg_types.get("on_false") == VT.CURVE:
            return VT.CURVE
    return declared


def validate(graph: Graph) -> list[Diagnostic]:
    """All invariant violations in the graph, empty when it is well formed."""
    diags: list[Diagnostic] = []
    param_types = _check_params(graph, diags)

    seen_ids: set[str] = set()
    valid_ids: set[str] = set()
    by_id: dict[str, Node] = {}
    for n in graph.nodes:
        if not is_identifier(n.id):
            diags.append(error(n.line, Codes.BAD_PARAM,
                               f"node id {n.id!r} is not a valid identifier"))
            continue
        if n.id in seen_ids or n.id in param_types:
            diags.append(error(n.line, Codes.DUPLICATE_ID,
                               f"duplicate name {n.id!r}"))
            continue
        seen_ids.add(n.id)
        valid_ids.add(n.id)
        by_id[n.id] = n

    # Narrowed output types, resolved in dependency order where possible.
    node_types: dict[str, VT] = {}
    try:
        order = topo_order(graph)
    except CycleError:
        order = [n.id for n in graph.nodes if n.id in valid_ids]
        for cyc in _find_cycles(graph):
            first = graph.node(cyc[0])
            diags.append(error(first.line if first else 0, Codes.CYCLE,
                               "cycle through " + " -> ".join(cyc + [cyc[0]])))

    for nid in order:
        if nid not in valid_ids:
            continue
        n = by_id[nid]
        kind = registry.lookup(n.kind)
        if kind is None:
            diags.append(error(n.line, Codes.UNKNOWN_KIND,
                               f"unknown node kind {n.kind!r}"))
            continue

        arg_types: dict[str, VT | None] = {}
        seen_ports: set[str] = set()
        for port_name, expr in n.args:
            port = kind.input_port(port_name)
            if port is None:
                diags.append(error(n.line, Codes.UNKNOWN_PORT,
                                   f"kind {kind.name!r} has no input port {port_name!r}"))
                continue
            if port_name in seen_ports:
                diags.append(error(n.line, Codes.DUPLICATE_ID,
                                   f"port {port_name!r} set twice on {n.id!r}"))
                continue
            seen_ports.add(port_name)
            if isinstance(expr, ArgList):
                if not kind.variadic:
                    diags.append(error(n.line, Codes.TYPE_MISMATCH,
                                       f"port {port_name!r} does not accept multiple connections"))
                    continue
                for item in expr.items:
                    t = _expr_type(item, param_types, node_types, graph, diags, n.line)
                    if t is not None and not _assignable(t, port.type):
                        diags.append(error(
                            n.line, Codes.TYPE_MISMATCH,
                            f"{n.id}.{port_name} expects {port.type}, got {t}"))
                continue
            t = _expr_type(expr, param_types, node_types, graph, diags, n.line)
            arg_types[port_name] = t
            if t is not None and not _assignable(t, port.type):
                diags.append(error(n.line, Codes.TYPE_MISMATCH,
                                   f"{n.id}.{port_name} expects {port.type}, got {t}"))

        for port in kind.inputs:
            if port.name not in seen_ports and port.default is None:
                diags.append(error(n.line, Codes.MISSING_INPUT,
                                   f"{n.id} is missing required input {port.name!r}"))
        node_types[n.id] = _narrowed_output(n, kind, arg_types)

    # Output declaration.
    if not graph.output:
        diags.append(error(graph.output_line, Codes.MISSING_OUTPUT,
                           "graph has no output"))
    else:
        target = graph.node(graph.output)
        if target is None:
            diags.append(error(graph.output_line, Codes.UNRESOLVED,
                               f"output references unknown node {graph.output!r}"))
        else:
            out_type = node_types.get(graph.output)
            if out_type is not None and not _assignable(out_type, VT.GEOMETRY):
                diags.append(error(graph.output_line, Codes.TYPE_MISMATCH,
                                   f"output must be geometry, got {out_type}"))
    return diags
