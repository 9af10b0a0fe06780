"""Graph evaluation: full, and incremental on parameter change.

Evaluation is demand-driven from the output node, so the unselected branch
of a switch is never computed. EvalSession keeps a per-node value cache and
invalidates exactly the nodes downstream of changed parameters; reevaluate
therefore returns bit-identical results to a fresh evaluate while doing a
fraction of the work.
"""

from __future__ import annotations

import numpy as np

from ..lang.analysis import node_references, validate
from ..lang.model import (
    ArgList,
    EMPTY_GEOMETRY,
    Graph,
    Lit,
    Node,
    Ref,
    ValueType as VT,
    VecExpr,
)
from ..lang import registry
from .errors import BindingTypeError, EvalError, GeometryError, RangeError
from .mesh import Curve, EMPTY_MESH, Mesh, curve_to_mesh, concat_meshes
from .ops import extrude_mesh, fill_curve, fillet_curve, instance_on_points
from .primitives import make_cube, make_cylinder, make_rectangle, make_sphere
from .transforms import euler_to_matrix

_MATH_KINDS = {"add", "subtract", "multiply", "divide"}
_TAGGING_KINDS = {"cube", "cylinder", "sphere", "fill", "extrude"}


def resolve_bindings(graph: Graph, bindings: dict | None) -> dict:
    """Merge user bindings over parameter defaults, checking types and ranges."""
    values: dict = {}
    for p in graph.params:
        values[p.name] = float(p.default) if p.type == VT.FLOAT else p.default
    if not bindings:
        return values
    params = graph.param_index()
    for name, value in bindings.items():
        spec = params.get(name)
        if spec is None:
            raise BindingTypeError(f"graph has no parameter {name!r}")
        values[name] = check_binding(spec, value)
    return values


def check_binding(spec, value):
    if spec.type == VT.BOOL:
        if not isinstance(value, bool):
            raise BindingTypeError(f"{spec.name!r} expects a bool, got {value!r}")
        return value
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise BindingTypeError(f"{spec.name!r} expects a number, got {value!r}")
    if spec.type == VT.INT:
        if int(value) != value:
            raise BindingTypeError(f"{spec.name!r} expects an integer, got {value!r}")
        value = int(value)
    else:
        value = float(value)
    if spec.range is not None:
        lo, hi = spec.range
        if not (lo <= value <= hi):
            raise RangeError(f"{spec.name!r}={value} outside range {lo}..{hi}")
    return value


def _as_geometry(value):
    if isinstance(value, (Mesh, Curve)):
        return value
    raise GeometryError("NumericError", f"expected geometry, got {type(value).__name__}")


def _as_mesh(value) -> Mesh:
    value = _as_geometry(value)
    return curve_to_mesh(value) if isinstance(value, Curve) else value


class _Evaluator:
    """Demand-driven evaluator over a shared value cache."""

    def __init__(self, graph: Graph, values: dict, cache: dict):
        self.graph = graph
        self.values = values
        self.cache = cache
        self.by_id = graph.node_index()
        self.tag_of = {n.id: i for i, n in enumerate(graph.nodes)}
        self.computed = 0

    def output_value(self):
        node = self.by_id.get(self.graph.output)
        if node is None:
            raise EvalError("UnresolvedReference",
                            f"output node {self.graph.output!r} not found")
        return self.node_value(node.id)

    def output_mesh(self) -> Mesh:
        value = self.output_value()
        return _as_mesh(value)

    def node_value(self, node_id: str):
        if node_id in self.cache:
            return self.cache[node_id]
        node = self.by_id[node_id]
        value = self._compute(node)
        if node.kind in _TAGGING_KINDS and isinstance(value, Mesh):
            value = value.with_tag(self.tag_of[node.id], node.id)
        self.cache[node_id] = value
        self.computed += 1
        return value

    # -- argument resolution -------------------------------------------

    def _expr_value(self, expr, node: Node):
        if isinstance(expr, Lit):
            if expr == EMPTY_GEOMETRY:
                return EMPTY_MESH
            if isinstance(expr.value, tuple):
                return np.asarray(expr.value, dtype=np.float64)
            return expr.value
        if isinstance(expr, Ref):
            if expr.name in self.values:
                return self.values[expr.name]
            return self.node_value(expr.name)
        if isinstance(expr, VecExpr):
            comps = []
            for c in expr.components:
                v = self._expr_value(c, node)
                comps.append(float(v))
            return np.asarray(comps, dtype=np.float64)
        if isinstance(expr, ArgList):
            return [self._expr_value(item, node) for item in expr.items]
        raise EvalError("NumericError", f"unhandled expression {expr!r}", node.id)

    def _args(self, node: Node, kind) -> dict:
        out: dict = {}
        for port in kind.inputs:
            expr = node.arg(port.name)
            if expr is None:
                expr = port.default
                if expr is None:
                    raise EvalError("MissingInput",
                                    f"no value for required input {port.name!r}", node.id)
            out[port.name] = self._expr_value(expr, node)
        return out

    # -- node semantics --------------------------------------------------

    def _compute(self, node: Node):
        kind = registry.lookup(node.kind)
        if kind is None:
            raise EvalError("UnknownNodeKind", f"unknown kind {node.kind!r}", node.id)
        try:
            if node.kind == "switch":
                return self._compute_switch(node, kind)
            if node.kind == "join":
                arg = node.arg(kind.inputs[0].name)
                if arg is None:
                    return EMPTY_MESH
                items = self._expr_value(arg, node)
                if not isinstance(items, list):
                    items = [items]
                return concat_meshes([_as_mesh(i) for i in items])
            args = self._args(node, kind)
            return self._dispatch(node, args)
        except GeometryError as e:
            raise EvalError(e.code, e.message, node.id) from e

    def _compute_switch(self, node: Node, kind):
        flag_expr = node.arg("flag")
        if flag_expr is None:
            raise EvalError("MissingInput", "switch needs a flag", node.id)
        flag = self._expr_value(flag_expr, node)
        if not isinstance(flag, bool):
            raise EvalError("NumericError",
                            f"switch flag must be bool, got {flag!r}", node.id)
        port = "on_true" if flag else "on_false"
        expr = node.arg(port) or kind.input_port(port).default
        if expr is None:
            raise EvalError("MissingInput", f"switch needs {port!r}", node.id)
        value = self._expr_value(expr, node)
        return _as_geometry(value) if not isinstance(value, Mesh) else value

    def _dispatch(self, node: Node, a: dict):
        k = node.kind
        if k == "cube":
            return make_cube(a["size"])
        if k == "cylinder":
            return make_cylinder(float(a["radius"]), float(a["depth"]), int(a["segments"]))
        if k == "sphere":
            return make_sphere(float(a["radius"]), int(a["rings"]), int(a["segments"]))
        if k == "rectangle":
            return make_rectangle(float(a["width"]), float(a["height"]))
        if k == "fillet":
            curve = a["curve"]
            if not isinstance(curve, Curve):
                raise GeometryError("OpenCurve", "fillet expects a curve")
            return fillet_curve(curve, float(a["radius"]), int(a["count"]))
        if k == "fill":
            curve = a["curve"]
            if not isinstance(curve, Curve):
                raise GeometryError("OpenCurve", "fill expects a curve")
            return fill_curve(curve)
        if k == "extrude":
            return extrude_mesh(_as_mesh(a["mesh"]), float(a["offset_scale"]))
        if k == "transform":
            geo = _as_geometry(a["geometry"])
            linear = euler_to_matrix(*a["rotation"]) @ np.diag(a["scale"])
            return geo.transformed(linear, a["translation"])
        if k == "translate":
            geo = _as_geometry(a["geometry"])
            return geo.transformed(np.eye(3), a["t"])
        if k == "rotate":
            geo = _as_geometry(a["geometry"])
            return geo.transformed(euler_to_matrix(*a["r"]), np.zeros(3))
        if k == "scale":
            geo = _as_geometry(a["geometry"])
            return geo.transformed(np.diag(a["s"]), np.zeros(3))
        if k == "instance_on_points":
            points = a["points"]
            if not isinstance(points, Curve):
                raise GeometryError("OpenCurve", "instance_on_points expects a curve")
            return instance_on_points(points, _as_mesh(a["instance"]))
        if k == "combine_xyz":
            return np.array([float(a["x"]), float(a["y"]), float(a["z"])])
        if k in _MATH_KINDS:
            return self._math(node, k, float(a["a"]), float(a["b"]))
        raise EvalError("UnknownNodeKind", f"no semantics for kind {k!r}", node.id)

    def _math(self, node: Node, op: str, a: float, b: float) -> float:
        if op == "add":
            r = a + b
        elif op == "subtract":
            r = a - b
        elif op == "multiply":
            r = a * b
        else:
            if b == 0.0:
                raise EvalError("NumericError", "division by zero", node.id)
            r = a / b
        if not np.isfinite(r):
            raise EvalError("NumericError", f"non-finite result {r!r}", node.id)
        return r


def evaluate(graph: Graph, bindings: dict | None = None) -> Mesh:
    """Evaluate a validated graph to its output mesh. Pure and deterministic."""
    values = resolve_bindings(graph, bindings)
    ev = _Evaluator(graph, values, {})
    return ev.output_mesh()


class EvalSession:
    """One evaluation stream over a fixed graph with a reusable node cache.

    Not thread-safe; a session has a single owner (the service serializes
    deltas per session).
    """

    def __init__(self, graph: Graph, bindings: dict | None = None,
                 check: bool = True):
        if check:
            problems = validate(graph)
            if problems:
                raise EvalError("InvalidGraph",
                                "; ".join(str(d) for d in problems[:5]))
        self.graph = graph
        self.values = resolve_bindings(graph, bindings)
        self._cache: dict = {}
        self._param_deps = self._compute_param_deps()
        self.last_recompute_count = 0
        self._mesh: Mesh | None = None

    def _compute_param_deps(self) -> dict:
        """param name -> ids of nodes whose value can depend on it."""
        by_id = self.graph.node_index()
        params = set(p.name for p in self.graph.params)
        node_params: dict[str, set] = {}

        def params_of(nid: str, stack: tuple = ()) -> set:
            if nid in node_params:
                return node_params[nid]
            if nid in stack:
                return set()  # cycle; validation already rejected it
            node = by_id.get(nid)
            if node is None:
                return set()
            used: set = set()
            for _, expr in node.args:
                used |= self._expr_params(expr, params, by_id, stack + (nid,),
                                          params_of)
            node_params[nid] = used
            return used

        for n in self.graph.nodes:
            params_of(n.id)
        deps: dict[str, set] = {p: set() for p in params}
        for nid, used in node_params.items():
            for p in used:
                deps[p].add(nid)
        return deps

    @staticmethod
    def _expr_params(expr, params, by_id, stack, params_of) -> set:
        used: set = set()
        items = expr.items if isinstance(expr, ArgList) else (expr,)
        for item in items:
            if isinstance(item, Ref):
                if item.name in params:
                    used.add(item.name)
                elif item.name in by_id:
                    used |= params_of(item.name, stack)
            elif isinstance(item, VecExpr):
                for c in item.components:
                    used |= EvalSession._expr_params(c, params, by_id, stack,
                                                     params_of)
        return used

    def evaluate(self) -> Mesh:
        """Full evaluation; primes the cache."""
        self._cache.clear()
        ev = _Evaluator(self.graph, self.values, self._cache)
        self._mesh = ev.output_mesh()
        self.last_recompute_count = ev.computed
        return self._mesh

    def reevaluate(self, delta: dict | None) -> Mesh:
        """Re-evaluate after a parameter delta, recomputing only downstream nodes."""
        if self._mesh is None:
            return self.evaluate()
        if not delta:
            self.last_recompute_count = 0
            return self._mesh
        params = self.graph.param_index()
        checked = {}
        for name, value in delta.items():
            spec = params.get(name)
            if spec is None:
                raise BindingTypeError(f"graph has no parameter {name!r}")
            checked[name] = check_binding(spec, value)
        dirty: set = set()
        for name in checked:
            dirty |= self._param_deps.get(name, set())
        self.values.update(checked)
        for nid in dirty:
            self._cache.pop(nid, None)
        ev = _Evaluator(self.graph, self.values, self._cache)
        self._mesh = ev.output_mesh()
        self.last_recompute_count = ev.computed
        return self._mesh

    @property
    def bindings(self) -> dict:
        return dict(self.values)
