"""Part-hierarchy ingestion.

Documents are JSON trees of {"label", "children": [...]} where each leaf
(and only leaves) carries "box": 12 floats laid out as
[cx, cy, cz, sx, sy, sz, d1x, d1y, d1z, d2x, d2y, d2z] - center, full
extents, and the first two axis directions of an oriented bounding box.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np


class SchemaError(ValueError):
    """Document does not match the hierarchy schema; path is a JSON pointer."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path or '/'}: {message}")
        self.path = path or "/"
        self.message = message


class InvalidFrame(ValueError):
    """An OBB axis frame violates the orthonormality invariants."""


_UNIT_TOL = 1e-6


@dataclass(frozen=True)
class OBB:
    center: np.ndarray  # (3,)
    size: np.ndarray  # full extents along dir1, dir2, dir3
    dir1: np.ndarray
    dir2: np.ndarray

    def __post_init__(self):
        for name in ("center", "size", "dir1", "dir2"):
            v = np.asarray(getattr(self, name), dtype=np.float64).reshape(3)
            object.__setattr__(self, name, v)

    @classmethod
    def from_floats(cls, values) -> "OBB":
        v = np.asarray(values, dtype=np.float64).reshape(12)
        return cls(v[:3], v[3:6], v[6:9], v[9:12])

    def to_floats(self) -> list[float]:
        return [*self.center, *self.size, *self.dir1, *self.dir2]

    def check(self) -> None:
        if abs(np.linalg.norm(self.dir1) - 1.0) > _UNIT_TOL:
            raise InvalidFrame(f"dir1 is not unit length: {self.dir1}")
        if abs(np.linalg.norm(self.dir2) - 1.0) > _UNIT_TOL:
            raise InvalidFrame(f"dir2 is not unit length: {self.dir2}")
        if abs(float(np.dot(self.dir1, self.dir2))) > _UNIT_TOL:
            raise InvalidFrame("dir1 and dir2 are not orthogonal")
        if np.any(self.size < 0):
            raise InvalidFrame(f"negative extent: {self.size}")

    @property
    def dir3(self) -> np.ndarray:
        return np.cross(self.dir1, self.dir2)

    def axes(self) -> np.ndarray:
        """3x3 matrix with dir1, dir2, dir3 as columns."""
        return np.column_stack([self.dir1, self.dir2, self.dir3])

    def corners(self) -> np.ndarray:
        """The 8 box corners (half-extent offsets in the box frame)."""
        signs = np.array([[sx, sy, sz]
                          for sx in (-0.5, 0.5)
                          for sy in (-0.5, 0.5)
                          for sz in (-0.5, 0.5)])
        local = signs * self.size
        return self.center + local @ self.axes().T

    def rotated(self, rotation: np.ndarray) -> "OBB":
        """The box under a global rotation (used for coordinate conventions)."""
        return OBB(rotation @ self.center, self.size,
                   rotation @ self.dir1, rotation @ self.dir2)


@dataclass
class PartNode:
    label: str
    children: list = field(default_factory=list)
    box: OBB | None = None
    full_label: tuple = ()

    @property
    def is_leaf(self) -> bool:
        return not self.children


@dataclass
class PartHierarchy:
    root: PartNode

    def leaves(self) -> list[PartNode]:
        out: list[PartNode] = []

        def walk(node: PartNode):
            if node.is_leaf:
                out.append(node)
            for c in node.children:
                walk(c)

        walk(self.root)
        return out

    def rotated(self, rotation: np.ndarray) -> "PartHierarchy":
        def walk(node: PartNode) -> PartNode:
            return PartNode(
                node.label,
                [walk(c) for c in node.children],
                node.box.rotated(rotation) if node.box is not None else None,
                node.full_label,
            )

        return PartHierarchy(walk(self.root))


def _parse_node(data, path: str, parents: tuple) -> PartNode:
    if not isinstance(data, dict):
        raise SchemaError(path, f"expected an object, got {type(data).__name__}")
    label = data.get("label")
    if not isinstance(label, str) or not label:
        raise SchemaError(path + "/label", "label must be a non-empty string")
    full = parents + (label,)
    raw_children = data.get("children", [])
    if raw_children is None:
        raw_children = []
    if not isinstance(raw_children, list):
        raise SchemaError(path + "/children", "children must be a list")
    children = [
        _parse_node(c, f"{path}/children/{i}", full)
        for i, c in enumerate(raw_children)
    ]
    box = None
    if children:
        if "box" in data:
            raise SchemaError(path + "/box", "only leaf nodes may carry a box")
    else:
        if "box" not in data:
            raise SchemaError(path + "/box", "leaf node is missing its box")
        raw = data["box"]
        if not isinstance(raw, list) or len(raw) != 12 or \
                not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in raw):
            raise SchemaError(path + "/box", "box must be a list of 12 numbers")
        box = OBB.from_floats(raw)
        try:
            box.check()
        except InvalidFrame as e:
            raise SchemaError(path + "/box", str(e)) from e
    return PartNode(label, children, box, full)


def load_hierarchy(document) -> PartHierarchy:
    """Parse a hierarchy from a JSON string, file-like dict, or parsed dict."""
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as e:
            raise SchemaError("", f"invalid JSON: {e}") from e
    return PartHierarchy(_parse_node(document, "", ()))
