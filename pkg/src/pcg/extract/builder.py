"""Hierarchy-to-graph construction.

Walks a part hierarchy root to leaves; every leaf becomes a unit cube
wrapped in a transform whose translation/rotation/scale components are
exposed as parameters defaulting to the recovered values. Same-label
siblings merge into one joined group. Each top-level semantic group (a
depth-1 child of the root) is wrapped in a group transform with its own
parameters and gated by a has_<group> switch, so one checkbox toggles the
whole labeled subtree.
"""

from __future__ import annotations

import json
import os
import re
import tempfile
from dataclasses import dataclass, field

import numpy as np

from ..lang.model import ArgList, Graph, Lit, Node, ParamSpec, Ref, ValueType as VT, VecExpr
from ..lang.printer import print_pcg
from .fitting import FittedTransform, extract_transform_from_box
from .hierarchy import PartHierarchy, PartNode

#: Extents below this are padded so flat panels stay renderable and editable.
MIN_EXTENT = 1e-4

_AXES = ("x", "y", "z")


@dataclass(frozen=True)
class ExtractionConfig:
    coord_rotation: np.ndarray = field(default_factory=lambda: np.eye(3))
    merge_same_label: bool = True
    expose_global_rotation: bool = True

    def __post_init__(self):
        rot = np.asarray(self.coord_rotation, dtype=np.float64).reshape(3, 3)
        if not np.allclose(rot @ rot.T, np.eye(3), atol=1e-9) or \
                not np.isclose(np.linalg.det(rot), 1.0, atol=1e-9):
            raise ValueError("coord_rotation must be a proper rotation matrix")
        object.__setattr__(self, "coord_rotation", rot)


def rotation_from_axes(spec: str) -> np.ndarray:
    """Rotation from an axis-permutation string like "xyz", "x-zy", "-yxz".

    Token i (optionally negated) names which source axis feeds output axis i.
    The result must be a proper rotation (determinant +1).
    """
    tokens = re.findall(r"-?[xyz]", spec)
    if "".join(tokens) != spec or len(tokens) != 3:
        raise ValueError(f"bad axis spec {spec!r}")
    rot = np.zeros((3, 3))
    for i, tok in enumerate(tokens):
        sign = -1.0 if tok.startswith("-") else 1.0
        rot[i, "xyz".index(tok[-1])] = sign
    if not np.isclose(np.linalg.det(rot), 1.0):
        raise ValueError(f"axis spec {spec!r} is not a proper rotation")
    return rot


@dataclass
class ExtractionOutcome:
    graph: Graph
    meta: dict  # per-part QA flags and group wiring


def _slug(text: str) -> str:
    s = re.sub(r"[^A-Za-z0-9]+", "_", text).strip("_").lower()
    if not s:
        s = "part"
    if s[0].isdigit():
        s = "p" + s
    return s


class GraphBuilder:
    """Accumulates params and nodes with automatic name deduplication."""

    def __init__(self):
        self.params: list[ParamSpec] = []
        self.nodes: list[Node] = []
        self._names: set[str] = set()
        self._stems: set[str] = set()

    def unique(self, base: str) -> str:
        name = base
        k = 1
        while name in self._names:
            k += 1
            name = f"{base}_{k}"
        self._names.add(name)
        return name

    def unique_stem(self, base: str) -> str:
        """Distinct prefix per part instance, so its params stay grouped."""
        stem = base
        k = 1
        while stem in self._stems:
            k += 1
            stem = f"{base}_{k}"
        self._stems.add(stem)
        return stem

    def add_param(self, base: str, type_: VT, default, range_=None) -> str:
        name = self.unique(base)
        self.params.append(ParamSpec(name, type_, default, range_))
        return name

    def add_node(self, base: str, kind: str, args) -> str:
        node_id = self.unique(base)
        self.nodes.append(Node(node_id, kind, tuple(args)))
        return node_id

    def build(self, output: str) -> Graph:
        return Graph(tuple(self.params), tuple(self.nodes), output)


def _float_param_range(default: float, component: str) -> tuple:
    if component == "rotation":
        return (-np.pi, np.pi)
    if component == "scale":
        lo = min(0.01, default / 2.0)
        hi = max(4.0 * default, default)
        return (lo, hi)
    span = 1.0 + abs(default)
    return (default - span, default + span)


def _vec_of_params(builder: GraphBuilder, base: str, component: str,
                   values) -> VecExpr:
    refs = []
    for axis, value in zip(_AXES, values):
        name = builder.add_param(f"{base}_{component}_{axis}", VT.FLOAT,
                                 float(value),
                                 _float_param_range(float(value), component))
        refs.append(Ref(name))
    return VecExpr(tuple(refs))


def attach_part(builder: GraphBuilder, label: str,
                fitted: FittedTransform) -> tuple[str, dict]:
    """Emit cube + transform for one leaf; every T/R/S component is a parameter.

    Returns the subtree root id and the part's QA record.
    """
    tr = fitted.transform
    size = np.asarray(tr.scale, dtype=np.float64)
    padded = [a for a, s in zip(_AXES, size) if s < MIN_EXTENT]
    size = np.maximum(size, MIN_EXTENT)

    base = builder.unique_stem(_slug(label))
    cube_id = builder.add_node(f"{base}_box", "cube", [])
    args = [
        ("geometry", Ref(cube_id)),
        ("translation", _vec_of_params(builder, base, "translation", tr.translation)),
        ("rotation", _vec_of_params(builder, base, "rotation", tr.rotation)),
        ("scale", _vec_of_params(builder, base, "scale", size)),
    ]
    part_id = builder.add_node(f"{base}_part", "transform", args)
    record = {
        "label": label,
        "node": part_id,
        "box_node": cube_id,
        "degenerate_pca": fitted.degenerate,
        "padded_axes": padded,
    }
    return part_id, record


def _group_children(children: list, merge: bool) -> list[tuple[str, list]]:
    if not merge:
        return [(c.label, [c]) for c in children]
    order: list[str] = []
    buckets: dict[str, list] = {}
    for c in children:
        if c.label not in buckets:
            buckets[c.label] = []
            order.append(c.label)
        buckets[c.label].append(c)
    return [(label, buckets[label]) for label in order]


class _Extractor:
    def __init__(self, config: ExtractionConfig):
        self.config = config
        self.builder = GraphBuilder()
        self.parts: list[dict] = []
        self.groups: dict[str, dict] = {}

    def leaf(self, node: PartNode) -> str:
        fitted = extract_transform_from_box(node.box)
        label = "_".join(_slug(p) for p in node.full_label[1:]) or _slug(node.label)
        part_id, record = attach_part(self.builder, label, fitted)
        record["path"] = "/".join(node.full_label)
        self.parts.append(record)
        return part_id

    def subtree(self, node: PartNode) -> str:
        """Root node id of the subtree; interior nodes become structural joins."""
        if node.is_leaf:
            return self.leaf(node)
        roots = []
        for label, members in _group_children(node.children, self.config.merge_same_label):
            ids = [self.subtree(m) for m in members]
            if len(ids) > 1:
                jid = self.builder.add_node(
                    f"{_slug(label)}_join", "join",
                    [("geometry", ArgList(tuple(Ref(i) for i in ids)))])
                roots.append(jid)
            else:
                roots.append(ids[0])
        if len(roots) == 1:
            return roots[0]
        return self.builder.add_node(
            f"{_slug(node.label)}_join", "join",
            [("geometry", ArgList(tuple(Ref(i) for i in roots)))])

    def top_group(self, label: str, members: list) -> str:
        """Join + group transform + switch for one top-level semantic group."""
        ids = [self.subtree(m) for m in members]
        slug = _slug(label)
        if len(ids) > 1:
            inner = self.builder.add_node(
                f"{slug}_join", "join",
                [("geometry", ArgList(tuple(Ref(i) for i in ids)))])
        else:
            inner = ids[0]
        args = [
            ("geometry", Ref(inner)),
            ("translation", _vec_of_params(self.builder, slug, "translation", (0, 0, 0))),
            ("rotation", _vec_of_params(self.builder, slug, "rotation", (0, 0, 0))),
            ("scale", _vec_of_params(self.builder, slug, "scale", (1, 1, 1))),
        ]
        group_id = self.builder.add_node(f"{slug}_group", "transform", args)
        flag = self.builder.add_param(f"has_{slug}", VT.BOOL, True)
        switch_id = self.builder.add_node(
            f"{slug}_switch", "switch",
            [("flag", Ref(flag)), ("on_true", Ref(group_id))])
        self.groups[slug] = {
            "label": label,
            "switch_param": flag,
            "switch_node": switch_id,
            "group_node": group_id,
        }
        return switch_id

    def run(self, hierarchy: PartHierarchy) -> ExtractionOutcome:
        root = hierarchy.root
        if root.is_leaf:
            out = self.leaf(root)
        else:
            tops = [
                self.top_group(label, members)
                for label, members in _group_children(
                    root.children, self.config.merge_same_label)
            ]
            if len(tops) == 1:
                out = tops[0]
            else:
                out = self.builder.add_node(
                    "model", "join",
                    [("geometry", ArgList(tuple(Ref(t) for t in tops)))])
        if self.config.expose_global_rotation and not root.is_leaf:
            rot = _vec_of_params(self.builder, _slug(root.label), "rotation",
                                 (0, 0, 0))
            out = self.builder.add_node("oriented", "rotate",
                                        [("geometry", Ref(out)), ("r", rot)])
        graph = self.builder.build(out)
        # Map each group to the box nodes underneath it for QA / tag checks.
        for part in self.parts:
            top = part["path"].split("/")[1] if "/" in part["path"] else part["path"]
            slug = _slug(top)
            if slug in self.groups:
                self.groups[slug].setdefault("box_nodes", []).append(part["box_node"])
        meta = {"parts": self.parts, "groups": self.groups}
        return ExtractionOutcome(graph, meta)


def extract_hierarchy(hierarchy: PartHierarchy,
                      config: ExtractionConfig | None = None) -> ExtractionOutcome:
    config = config or ExtractionConfig()
    rot = config.coord_rotation
    if not np.allclose(rot, np.eye(3)):
        hierarchy = hierarchy.rotated(rot)
    return _Extractor(config).run(hierarchy)


def build_pcg(hierarchy: PartHierarchy,
              config: ExtractionConfig | None = None) -> Graph:
    return extract_hierarchy(hierarchy, config).graph


def save_graph(graph: Graph, path) -> None:
    """Write canonical text with atomic replacement."""
    text = print_pcg(graph)
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def extract_file(in_path, out_dir, config: ExtractionConfig | None = None) -> tuple[str, str]:
    """Extract one document; writes <name>.pcg plus a <name>.meta.json sidecar."""
    from .hierarchy import load_hierarchy

    with open(in_path, "r") as f:
        hierarchy = load_hierarchy(f.read())
    outcome = extract_hierarchy(hierarchy, config)
    stem = os.path.splitext(os.path.basename(in_path))[0]
    os.makedirs(out_dir, exist_ok=True)
    pcg_path = os.path.join(out_dir, stem + ".pcg")
    meta_path = os.path.join(out_dir, stem + ".meta.json")
    save_graph(outcome.graph, pcg_path)
    with open(meta_path, "w") as f:
        json.dump(outcome.meta, f, indent=2)
        f.write("\n")
    return pcg_path, meta_path
