"""Mesh and curve value types plus interchange helpers (OBJ, binary frames).

Meshes are immutable: arrays are locked after construction so cached
evaluation results can be shared safely. part_tags carries one integer per
triangle identifying the node that produced it; tag_names maps those
integers back to node ids.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

import numpy as np

UNTAGGED = -1


def _locked(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class Mesh:
    vertices: np.ndarray  # (n, 3) float64
    triangles: np.ndarray  # (m, 3) int64
    part_tags: np.ndarray | None = None  # (m,) int64
    tag_names: dict = field(default_factory=dict)  # tag int -> node id

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=np.float64).reshape(-1, 3)
        t = np.asarray(self.triangles, dtype=np.int64).reshape(-1, 3)
        object.__setattr__(self, "vertices", _locked(v))
        object.__setattr__(self, "triangles", _locked(t))
        if self.part_tags is not None:
            tags = np.asarray(self.part_tags, dtype=np.int64).reshape(-1)
            if tags.shape[0] != t.shape[0]:
                raise ValueError("part_tags length must match triangle count")
            object.__setattr__(self, "part_tags", _locked(tags))

    @property
    def num_vertices(self) -> int:
        return self.vertices.shape[0]

    @property
    def num_triangles(self) -> int:
        return self.triangles.shape[0]

    def is_empty(self) -> bool:
        return self.num_vertices == 0 and self.num_triangles == 0

    def tags_or_untagged(self) -> np.ndarray:
        if self.part_tags is not None:
            return self.part_tags
        return np.full(self.num_triangles, UNTAGGED, dtype=np.int64)

    def with_tag(self, tag: int, name: str) -> "Mesh":
        """All triangles relabeled as produced by one node."""
        tags = np.full(self.num_triangles, tag, dtype=np.int64)
        return Mesh(self.vertices, self.triangles, tags, {tag: name})

    def transformed(self, matrix: np.ndarray, offset: np.ndarray) -> "Mesh":
        v = self.vertices @ matrix.T + offset
        return Mesh(v, self.triangles, self.part_tags, self.tag_names)

    def translated(self, offset) -> "Mesh":
        return Mesh(self.vertices + np.asarray(offset, dtype=np.float64),
                    self.triangles, self.part_tags, self.tag_names)


@dataclass(frozen=True, eq=False)
class Curve:
    points: np.ndarray  # (n, 3) float64
    closed: bool

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64).reshape(-1, 3)
        if pts.shape[0] < 2:
            raise ValueError("a curve needs at least 2 points")
        object.__setattr__(self, "points", _locked(pts))

    @property
    def num_points(self) -> int:
        return self.points.shape[0]

    def transformed(self, matrix: np.ndarray, offset: np.ndarray) -> "Curve":
        return Curve(self.points @ matrix.T + offset, self.closed)


EMPTY_MESH = Mesh(np.zeros((0, 3)), np.zeros((0, 3), dtype=np.int64),
                  np.zeros(0, dtype=np.int64), {})


def meshes_equal(a: Mesh, b: Mesh) -> bool:
    """Bitwise equality of geometry and provenance tags."""
    return (
        np.array_equal(a.vertices, b.vertices)
        and np.array_equal(a.triangles, b.triangles)
        and np.array_equal(a.tags_or_untagged(), b.tags_or_untagged())
    )


def curve_to_mesh(curve: Curve) -> Mesh:
    """Points-only mesh; lets curves ride through geometry combinators."""
    return Mesh(curve.points, np.zeros((0, 3), dtype=np.int64),
                np.zeros(0, dtype=np.int64), {})


def concat_meshes(meshes: list) -> Mesh:
    """Index-offsetting concatenation; no welding, no boolean union."""
    meshes = [m for m in meshes]
    if not meshes:
        return EMPTY_MESH
    verts = []
    tris = []
    tags = []
    names: dict = {}
    offset = 0
    for m in meshes:
        verts.append(m.vertices)
        if m.num_triangles:
            tris.append(m.triangles + offset)
            tags.append(m.tags_or_untagged())
        names.update(m.tag_names)
        offset += m.num_vertices
    vertices = np.concatenate(verts) if verts else np.zeros((0, 3))
    triangles = (np.concatenate(tris) if tris
                 else np.zeros((0, 3), dtype=np.int64))
    part_tags = (np.concatenate(tags) if tags
                 else np.zeros(0, dtype=np.int64))
    return Mesh(vertices, triangles, part_tags, names)


# --- measurements ----------------------------------------------------------


def signed_volume(mesh: Mesh) -> float:
    """Divergence-theorem volume; positive for outward-wound closed meshes."""
    if mesh.num_triangles == 0:
        return 0.0
    v = mesh.vertices
    t = mesh.triangles
    a, b, c = v[t[:, 0]], v[t[:, 1]], v[t[:, 2]]
    return float(np.einsum("ij,ij->i", a, np.cross(b, c)).sum() / 6.0)


def surface_area(mesh: Mesh) -> float:
    if mesh.num_triangles == 0:
        return 0.0
    v = mesh.vertices
    t = mesh.triangles
    a, b, c = v[t[:, 0]], v[t[:, 1]], v[t[:, 2]]
    cross = np.cross(b - a, c - a)
    return float(0.5 * np.linalg.norm(cross, axis=1).sum())


def bounds(mesh: Mesh) -> tuple[np.ndarray, np.ndarray]:
    if mesh.num_vertices == 0:
        z = np.zeros(3)
        return z, z
    return mesh.vertices.min(axis=0), mesh.vertices.max(axis=0)


# --- Wavefront OBJ ---------------------------------------------------------


def export_obj(mesh: Mesh) -> str:
    """Wavefront OBJ text: v records then 1-based f records, 9 significant digits."""
    lines = [f"# {mesh.num_vertices} vertices, {mesh.num_triangles} triangles"]
    for x, y, z in mesh.vertices:
        lines.append(f"v {x:.9g} {y:.9g} {z:.9g}")
    for a, b, c in mesh.triangles:
        lines.append(f"f {a + 1} {b + 1} {c + 1}")
    return "\n".join(lines) + "\n"


def import_obj(text: str) -> Mesh:
    verts = []
    tris = []
    for raw in text.splitlines():
        parts = raw.split()
        if not parts:
            continue
        if parts[0] == "v":
            verts.append([float(x) for x in parts[1:4]])
        elif parts[0] == "f":
            idx = [int(p.split("/")[0]) - 1 for p in parts[1:]]
            for k in range(1, len(idx) - 1):  # fan-triangulate n-gon faces
                tris.append([idx[0], idx[k], idx[k + 1]])
    return Mesh(np.array(verts, dtype=np.float64).reshape(-1, 3),
                np.array(tris, dtype=np.int64).reshape(-1, 3))


# --- binary stream frame ---------------------------------------------------
#
# little-endian: [u32 vertex-count][u32 tri-count][f32 xyz...][u32 idx...]


def encode_frame(mesh: Mesh) -> bytes:
    header = struct.pack("<II", mesh.num_vertices, mesh.num_triangles)
    verts = mesh.vertices.astype("<f4").tobytes()
    tris = mesh.triangles.astype("<u4").tobytes()
    return header + verts + tris


def decode_frame(data: bytes) -> Mesh:
    if len(data) < 8:
        raise ValueError("frame too short")
    nv, nt = struct.unpack_from("<II", data, 0)
    need = 8 + nv * 12 + nt * 12
    if len(data) != need:
        raise ValueError(f"frame size mismatch: got {len(data)}, need {need}")
    verts = np.frombuffer(data, dtype="<f4", count=nv * 3, offset=8)
    tris = np.frombuffer(data, dtype="<u4", count=nt * 3, offset=8 + nv * 12)
    return Mesh(verts.reshape(-1, 3).astype(np.float64),
                tris.reshape(-1, 3).astype(np.int64))
