"""Blender-Python emission in the node-wrangler style.

Produces a self-contained script: a GroupInput exposing every graph
parameter as a socket, one nw.new_node call per graph node in topological
order, and a GroupOutput. Emission only - the script is never executed
here; tests check it against the Python grammar and a golden structure.
"""

from __future__ import annotations

import keyword

from ..lang import registry
from ..lang.analysis import topo_order
from ..lang.model import ArgList, EMPTY_GEOMETRY, Graph, Lit, Node, Ref, ValueType as VT, VecExpr


class UnsupportedKind(ValueError):
    def __init__(self, kind: str, backend: str, node_id: str):
        super().__init__(f"kind {kind!r} (node {node_id!r}) has no {backend} mapping")
        self.kind = kind
        self.backend = backend
        self.node_id = node_id


_PRELUDE = """\
import bpy
import mathutils
from numpy.random import uniform, normal, randint
from infinigen.core.nodes.node_wrangler import Nodes, NodeWrangler
from infinigen.core.nodes import node_utils
from infinigen.core.util.color import color_category
from infinigen.core import surface
"""

_EPILOGUE = """\
def apply(obj, selection=None, **kwargs):
    surface.add_geomod(obj, geometry_nodes, selection=selection, attributes=[])
"""

_SOCKET_TYPES = {VT.FLOAT: "NodeSocketFloat", VT.INT: "NodeSocketInt",
                 VT.BOOL: "NodeSocketBool"}

_MATH_OPS = {"add": "ADD", "subtract": "SUBTRACT",
             "multiply": "MULTIPLY", "divide": "DIVIDE"}

# kind -> (Nodes constant, {pcg port: blender socket}, attrs, output socket)
_NODE_MAP = {
    "cube": ("Nodes.MeshCube", {"size": "'Size'"}, None, "Mesh"),
    "cylinder": ("Nodes.Cylinder",
                 {"radius": "'Radius'", "depth": "'Depth'",
                  "segments": "'Vertices'"}, None, "Mesh"),
    "sphere": ("Nodes.MeshUVSphere",
               {"radius": "'Radius'", "rings": "'Rings'",
                "segments": "'Segments'"}, None, "Mesh"),
    "rectangle": ("Nodes.Quadrilateral",
                  {"width": "'Width'", "height": "'Height'"}, None, None),
    "fillet": ("Nodes.FilletCurve",
               {"curve": "'Curve'", "radius": "'Radius'", "count": "'Count'"},
               None, None),
    "fill": ("Nodes.FillCurve", {"curve": "'Curve'"}, "{'mode': 'NGONS'}", None),
    "extrude": ("Nodes.ExtrudeMesh",
                {"mesh": "'Mesh'", "offset_scale": "'Offset Scale'"}, None, "Mesh"),
    "transform": ("Nodes.Transform",
                  {"geometry": "'Geometry'", "translation": "'Translation'",
                   "rotation": "'Rotation'", "scale": "'Scale'"}, None, None),
    "translate": ("Nodes.Transform",
                  {"geometry": "'Geometry'", "t": "'Translation'"}, None, None),
    "rotate": ("Nodes.Transform",
               {"geometry": "'Geometry'", "r": "'Rotation'"}, None, None),
    "scale": ("Nodes.Transform",
              {"geometry": "'Geometry'", "s": "'Scale'"}, None, None),
    "join": ("Nodes.JoinGeometry", {"geometry": "'Geometry'"}, None, None),
    "switch": ("Nodes.Switch",
               {"flag": "'Switch'", "on_true": "'True'", "on_false": "'False'"},
               "{'input_type': 'GEOMETRY'}", None),
    "combine_xyz": ("Nodes.CombineXYZ",
                    {"x": "'X'", "y": "'Y'", "z": "'Z'"}, None, None),
    "instance_on_points": ("Nodes.InstanceOnPoints",
                           {"points": "'Points'", "instance": "'Instance'"},
                           None, None),
}
for _op, _blop in _MATH_OPS.items():
    _NODE_MAP[_op] = ("Nodes.Math", {"a": "0", "b": "1"},
                      f"{{'operation': '{_blop}'}}", None)


def _camel(name: str) -> str:
    return "".join(p.capitalize() or "_" for p in name.split("_"))


def _fmt_value(value) -> str:
    if isinstance(value, bool):
        return "True" if value else "False"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return f"{value:.4f}"
    if isinstance(value, tuple):
        return "(" + ", ".join(f"{float(c):.4f}" for c in value) + ")"
    raise TypeError(f"cannot format {value!r}")


class _Emitter:
    def __init__(self, graph: Graph):
        self.graph = graph
        self.lines: list[str] = []
        self.var_of: dict[str, str] = {}
        self.socket_of: dict[str, str] = {}
        self.used = {"nw", "group_input", "group_output", "apply", "obj",
                     "surface", "bpy", "mathutils"}

    def _var(self, base: str) -> str:
        name = base
        if keyword.iskeyword(name):
            name = name + "_node"
        k = 1
        while name in self.used:
            k += 1
            name = f"{base}_{k}"
        self.used.add(name)
        return name

    def _node_ref(self, node_id: str) -> str:
        var = self.var_of[node_id]
        out_socket = _NODE_MAP[self.graph.node(node_id).kind][3]
        if out_socket:
            return f'{var}.outputs["{out_socket}"]'
        return var

    def _expr(self, expr, owner: Node, port: str) -> str:
        if isinstance(expr, Lit):
            if expr == EMPTY_GEOMETRY:
                return "None"
            return _fmt_value(expr.value)
        if isinstance(expr, Ref):
            if expr.name in self.socket_of:
                return f'group_input.outputs["{self.socket_of[expr.name]}"]'
            return self._node_ref(expr.name)
        if isinstance(expr, VecExpr):
            if all(isinstance(c, Lit) for c in expr.components):
                return "(" + ", ".join(_fmt_value(float(c.value))
                                       for c in expr.components) + ")"
            # component-wise wiring needs an explicit CombineXYZ node
            parts = []
            for axis, comp in zip(("X", "Y", "Z"), expr.components):
                parts.append(f"'{axis}': {self._expr(comp, owner, port)}")
            var = self._var(f"{owner.id}_{port}")
            self.lines.append(
                f"    {var} = nw.new_node(Nodes.CombineXYZ, "
                f"input_kwargs={{{', '.join(parts)}}})\n")
            return var
        raise TypeError(f"cannot emit {expr!r}")

    def emit_group_input(self) -> None:
        entries = ["('NodeSocketGeometry', 'Geometry', None)"]
        bounds: list[str] = []
        for p in self.graph.params:
            socket = _camel(p.name)
            self.socket_of[p.name] = socket
            entries.append(
                f"('{_SOCKET_TYPES[p.type]}', '{socket}', {_fmt_value(p.default)})")
            if p.range is not None:
                lo, hi = (float(v) for v in p.range)
                bounds.append(
                    f"    nw.node_group.inputs['{socket}'].min_value = {lo:.4f}\n")
                bounds.append(
                    f"    nw.node_group.inputs['{socket}'].max_value = {hi:.4f}\n")
        inner = ",\n            ".join(entries)
        self.lines.append(
            "    group_input = nw.new_node(Nodes.GroupInput,\n"
            f"        expose_input=[{inner}])\n")
        if bounds:
            self.lines.append("\n")
            self.lines.extend(bounds)

    def emit_node(self, node: Node) -> None:
        if node.kind not in _NODE_MAP:
            raise UnsupportedKind(node.kind, "blender_python", node.id)
        nodes_const, socket_map, attrs, _ = _NODE_MAP[node.kind]
        kwargs: list[str] = []
        for port, expr in node.args:
            socket = socket_map.get(port)
            if socket is None:
                raise UnsupportedKind(node.kind, "blender_python", node.id)
            if isinstance(expr, ArgList):
                refs = [self._expr(item, node, port) for item in expr.items]
                kwargs.append(f"{socket}: [{', '.join(refs)}]")
            else:
                kwargs.append(f"{socket}: {self._expr(expr, node, port)}")
        var = self._var(node.id)
        call = f"    {var} = nw.new_node({nodes_const}"
        if kwargs:
            call += f", input_kwargs={{{', '.join(kwargs)}}}"
        if attrs:
            call += f", attrs={attrs}"
        call += ")\n"
        self.lines.append(call)
        self.var_of[node.id] = var

    def emit(self) -> str:
        by_id = self.graph.node_index()
        self.lines.append("def geometry_nodes(nw: NodeWrangler):\n")
        self.emit_group_input()
        for nid in topo_order(self.graph):
            self.lines.append("\n")
            self.emit_node(by_id[nid])
        self.lines.append(
            "\n    group_output = nw.new_node(Nodes.GroupOutput, "
            f"input_kwargs={{'Geometry': {self._node_ref(self.graph.output)}}}, "
            "attrs={'is_active_output': True})\n")
        return _PRELUDE + "\n" + "".join(self.lines) + "\n" + _EPILOGUE


def to_blender_python(graph: Graph) -> str:
    """Emit the graph as an Infinigen-style geometry-nodes script."""
    return _Emitter(graph).emit()
