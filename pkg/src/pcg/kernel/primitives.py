"""Primitive generators: cube, cylinder, sphere, rectangle.

All primitives are centered at the origin with outward-facing winding.
Cylinders and spheres are z-axis aligned; ring vertex k sits at angle
2*pi*k/segments. Caps are triangulated as fans from a center vertex.
"""

from __future__ import annotations

import numpy as np

from .errors import GeometryError
from .mesh import Curve, Mesh

_CUBE_CORNERS = np.array([
    [-1, -1, -1], [-1, -1, +1], [-1, +1, -1], [-1, +1, +1],
    [+1, -1, -1], [+1, -1, +1], [+1, +1, -1], [+1, +1, +1],
], dtype=np.float64) * 0.5

_CUBE_TRIANGLES = np.array([
    [0, 1, 3], [0, 3, 2],  # -x
    [4, 6, 7], [4, 7, 5],  # +x
    [0, 4, 5], [0, 5, 1],  # -y
    [2, 3, 7], [2, 7, 6],  # +y
    [0, 2, 6], [0, 6, 4],  # -z
    [1, 5, 7], [1, 7, 3],  # +z
], dtype=np.int64)


def make_cube(size=(1.0, 1.0, 1.0)) -> Mesh:
    size = np.asarray(size, dtype=np.float64)
    if size.shape != (3,) or np.any(size <= 0):
        raise GeometryError("NumericError", f"cube size must be positive, got {size}")
    return Mesh(_CUBE_CORNERS * size, _CUBE_TRIANGLES)


def unit_box_corners() -> np.ndarray:
    """The 8 corners of the canonical unit cube, in canonical order."""
    return _CUBE_CORNERS.copy()


def make_cylinder(radius: float = 1.0, depth: float = 2.0, segments: int = 32) -> Mesh:
    if radius <= 0 or depth <= 0:
        raise GeometryError("NumericError",
                            f"cylinder needs positive radius/depth, got {radius}, {depth}")
    if segments < 3:
        raise GeometryError("NumericError", f"cylinder needs >=3 segments, got {segments}")
    n = int(segments)
    angles = 2.0 * np.pi * np.arange(n) / n
    ring = np.column_stack([radius * np.cos(angles), radius * np.sin(angles)])
    h = depth / 2.0
    bottom = np.column_stack([ring, np.full(n, -h)])
    top = np.column_stack([ring, np.full(n, h)])
    centers = np.array([[0, 0, -h], [0, 0, h]], dtype=np.float64)
    verts = np.vstack([bottom, top, centers])
    c_bot, c_top = 2 * n, 2 * n + 1

    tris = []
    for k in range(n):
        k1 = (k + 1) % n
        tris.append([k, k1, n + k1])        # side lower
        tris.append([k, n + k1, n + k])     # side upper
        tris.append([c_bot, k1, k])         # bottom cap, faces -z
        tris.append([c_top, n + k, n + k1])  # top cap, faces +z
    return Mesh(verts, np.array(tris, dtype=np.int64))


def make_sphere(radius: float = 1.0, rings: int = 16, segments: int = 32) -> Mesh:
    if radius <= 0:
        raise GeometryError("NumericError", f"sphere needs positive radius, got {radius}")
    if rings < 2 or segments < 3:
        raise GeometryError("NumericError",
                            f"sphere needs >=2 rings and >=3 segments, got {rings}, {segments}")
    rings, segments = int(rings), int(segments)
    verts = [np.array([0.0, 0.0, radius])]
    for i in range(1, rings):
        theta = np.pi * i / rings
        st, ct = np.sin(theta), np.cos(theta)
        phi = 2.0 * np.pi * np.arange(segments) / segments
        verts.append(np.column_stack([
            radius * st * np.cos(phi),
            radius * st * np.sin(phi),
            np.full(segments, radius * ct),
        ]))
    verts.append(np.array([0.0, 0.0, -radius]))
    vertices = np.vstack([v.reshape(-1, 3) for v in verts])

    north, south = 0, vertices.shape[0] - 1
    def ring_start(i):  # latitude circle i (1-based) start index
        return 1 + (i - 1) * segments

    tris = []
    r0 = ring_start(1)
    for k in range(segments):
        tris.append([north, r0 + k, r0 + (k + 1) % segments])
    for i in range(1, rings - 1):
        a, b = ring_start(i), ring_start(i + 1)
        for k in range(segments):
            k1 = (k + 1) % segments
            tris.append([a + k, b + k, b + k1])
            tris.append([a + k, b + k1, a + k1])
    rl = ring_start(rings - 1)
    for k in range(segments):
        tris.append([south, rl + (k + 1) % segments, rl + k])
    return Mesh(vertices, np.array(tris, dtype=np.int64))


def make_rectangle(width: float = 1.0, height: float = 1.0) -> Curve:
    """Closed 4-corner curve in z=0, counterclockwise from (+w/2, +h/2)."""
    if width <= 0 or height <= 0:
        raise GeometryError("NumericError",
                            f"rectangle needs positive sides, got {width}, {height}")
    w, h = width / 2.0, height / 2.0
    pts = np.array([[w, h, 0.0], [-w, h, 0.0], [-w, -h, 0.0], [w, -h, 0.0]])
    return Curve(pts, closed=True)
