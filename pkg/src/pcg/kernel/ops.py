"""Curve and mesh operations: fillet, fill, extrude, instancing.

fillet replaces polygon corners by tangent circular arcs; fill ear-clips a
closed planar polygon into triangles; extrude turns a planar cap into a
watertight prism along the cap normal.
"""

from __future__ import annotations

import numpy as np

from .errors import GeometryError
from .mesh import Curve, Mesh, concat_meshes


def fillet_curve(curve: Curve, radius: float, count: int) -> Curve:
    """Round every corner of a closed polyline with an arc of `count` samples.

    The tangent length is clamped to half of each adjacent segment so
    neighboring arcs never overlap; radius <= 0 returns the input unchanged.
    """
    if not curve.closed:
        raise GeometryError("OpenCurve", "fillet requires a closed curve")
    if radius <= 0:
        return curve
    count = max(1, int(count))
    pts = curve.points
    n = pts.shape[0]
    out: list[np.ndarray] = []
    for i in range(n):
        prev_pt = pts[(i - 1) % n]
        cur = pts[i]
        next_pt = pts[(i + 1) % n]
        u1 = prev_pt - cur
        u2 = next_pt - cur
        len1 = np.linalg.norm(u1)
        len2 = np.linalg.norm(u2)
        if len1 < 1e-12 or len2 < 1e-12:
            out.append(cur[None, :])
            continue
        u1 = u1 / len1
        u2 = u2 / len2
        cos_a = float(np.clip(np.dot(u1, u2), -1.0, 1.0))
        alpha = np.arccos(cos_a)  # interior angle at the corner
        if alpha > np.pi - 1e-9 or alpha < 1e-9:
            out.append(cur[None, :])  # straight or degenerate corner
            continue
        tan_half = np.tan(alpha / 2.0)
        t = min(radius / tan_half, min(len1, len2) / 2.0)
        r_eff = t * tan_half
        bis = u1 + u2
        bis = bis / np.linalg.norm(bis)
        center = cur + bis * (r_eff / np.sin(alpha / 2.0))
        p1 = cur + u1 * t
        p2 = cur + u2 * t
        a = (p1 - center) / r_eff
        b = (p2 - center) / r_eff
        gamma = np.arccos(float(np.clip(np.dot(a, b), -1.0, 1.0)))
        if count == 1:
            taus = np.array([0.5])
        else:
            taus = np.linspace(0.0, 1.0, count)
        # slerp between the unit radius vectors keeps samples exactly on the arc
        sin_g = np.sin(gamma)
        arc = (np.sin((1.0 - taus)[:, None] * gamma) * a[None, :]
               + np.sin(taus[:, None] * gamma) * b[None, :]) / sin_g
        out.append(center[None, :] + r_eff * arc)
    return Curve(np.vstack(out), closed=True)


def _polygon_frame(pts: np.ndarray):
    """Newell normal plus an orthonormal in-plane (u, v) basis."""
    nxt = np.roll(pts, -1, axis=0)
    normal = np.array([
        np.sum((pts[:, 1] - nxt[:, 1]) * (pts[:, 2] + nxt[:, 2])),
        np.sum((pts[:, 2] - nxt[:, 2]) * (pts[:, 0] + nxt[:, 0])),
        np.sum((pts[:, 0] - nxt[:, 0]) * (pts[:, 1] + nxt[:, 1])),
    ])
    norm = np.linalg.norm(normal)
    if norm < 1e-14:
        # Zero signed area (e.g. a symmetric bowtie): fall back to a frame
        # from the first non-collinear triple so the crossing check can run.
        normal = None
        for k in range(2, pts.shape[0]):
            cand = np.cross(pts[1] - pts[0], pts[k] - pts[0])
            if np.linalg.norm(cand) > 1e-14:
                normal = cand / np.linalg.norm(cand)
                break
        if normal is None:
            raise GeometryError("NonPlanarCurve", "degenerate polygon (zero area)")
    else:
        normal = normal / norm
    pick = np.argmin(np.abs(normal))
    helper = np.zeros(3)
    helper[pick] = 1.0
    u = np.cross(normal, helper)
    u = u / np.linalg.norm(u)
    v = np.cross(normal, u)
    return normal, u, v


def _check_simple(pts2: np.ndarray, eps: float = 1e-12) -> None:
    """All-pairs proper-crossing test between non-adjacent edges, vectorized."""
    n = pts2.shape[0]
    if n < 4:
        return
    starts = pts2
    ends = np.roll(pts2, -1, axis=0)
    d = ends - starts  # (n, 2) edge vectors

    rp = starts[None, :, :] - starts[:, None, :]  # start_j - start_i
    sp = ends[None, :, :] - starts[:, None, :]    # end_j   - start_i
    d1 = d[:, None, 0] * rp[..., 1] - d[:, None, 1] * rp[..., 0]
    d2 = d[:, None, 0] * sp[..., 1] - d[:, None, 1] * sp[..., 0]
    straddles = (d1 * d2 < -eps) & (d1.T * d2.T < -eps)

    idx = np.arange(n)
    gap = (idx[None, :] - idx[:, None]) % n
    nonadjacent = (gap > 1) & (gap < n - 1)
    bad = straddles & nonadjacent
    if bad.any():
        i, j = np.argwhere(bad)[0]
        raise GeometryError("SelfIntersecting",
                            f"polygon edges {i} and {j} cross")


def _points_in_triangle(pts: np.ndarray, a, b, c, eps: float = 1e-12) -> bool:
    """True if any point lies inside or on triangle (a, b, c).

    The closed test matters: a vertex exactly on the candidate diagonal must
    block the ear, or the triangulation would cut through it.
    """
    if pts.shape[0] == 0:
        return False
    d1 = (b[0] - a[0]) * (pts[:, 1] - a[1]) - (b[1] - a[1]) * (pts[:, 0] - a[0])
    d2 = (c[0] - b[0]) * (pts[:, 1] - b[1]) - (c[1] - b[1]) * (pts[:, 0] - b[0])
    d3 = (a[0] - c[0]) * (pts[:, 1] - c[1]) - (a[1] - c[1]) * (pts[:, 0] - c[0])
    return bool(((d1 >= -eps) & (d2 >= -eps) & (d3 >= -eps)).any())


def fill_curve(curve: Curve) -> Mesh:
    """Ear-clip triangulation of a closed planar simple polygon.

    Output triangles are wound with the curve: a counterclockwise curve in
    the z=0 plane fills with +z normals. Triangle areas sum to the polygon
    area exactly (up to float error).
    """
    if not curve.closed:
        raise GeometryError("OpenCurve", "fill requires a closed curve")
    pts = curve.points
    n = pts.shape[0]
    if n < 3:
        raise GeometryError("NonPlanarCurve", "need at least 3 points to fill")
    normal, u, v = _polygon_frame(pts)
    centroid = pts.mean(axis=0)
    off = (pts - centroid) @ normal
    scale = max(1.0, float(np.abs(pts - centroid).max()))
    if np.abs(off).max() > 1e-8 * scale:
        raise GeometryError("NonPlanarCurve",
                            f"points deviate from plane by {np.abs(off).max():.3e}")
    pts2 = np.column_stack([(pts - centroid) @ u, (pts - centroid) @ v])
    _check_simple(pts2)

    # Newell normal orientation makes the projected polygon counterclockwise.
    nxt2 = np.roll(pts2, -1, axis=0)
    prv2 = np.roll(pts2, 1, axis=0)
    corner_cross = ((pts2[:, 0] - prv2[:, 0]) * (nxt2[:, 1] - pts2[:, 1])
                    - (pts2[:, 1] - prv2[:, 1]) * (nxt2[:, 0] - pts2[:, 0]))
    if np.all(corner_cross > 1e-14):
        # strictly convex: fan triangulation, no ear search needed
        tris = [[0, k, k + 1] for k in range(1, n - 1)]
        return Mesh(pts, np.array(tris, dtype=np.int64))

    remaining = list(range(n))
    tris: list[list[int]] = []
    while len(remaining) > 3:
        m = len(remaining)
        clipped = False
        for pos in range(m):
            i0 = remaining[(pos - 1) % m]
            i1 = remaining[pos]
            i2 = remaining[(pos + 1) % m]
            a, b, c = pts2[i0], pts2[i1], pts2[i2]
            cross = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
            if cross <= 1e-14:
                continue  # reflex or collinear corner
            others = pts2[[j for j in remaining if j not in (i0, i1, i2)]]
            if _points_in_triangle(others, a, b, c):
                continue
            tris.append([i0, i1, i2])
            remaining.pop(pos)
            clipped = True
            break
        if not clipped:
            # Only collinear corners left: drop one and keep going.
            degenerate = False
            for pos in range(len(remaining)):
                i0 = remaining[(pos - 1) % len(remaining)]
                i1 = remaining[pos]
                i2 = remaining[(pos + 1) % len(remaining)]
                a, b, c = pts2[i0], pts2[i1], pts2[i2]
                cross = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
                if abs(cross) <= 1e-14:
                    remaining.pop(pos)
                    degenerate = True
                    break
            if not degenerate:
                raise GeometryError("SelfIntersecting", "no ear found; polygon is invalid")
    if len(remaining) == 3:
        tris.append(list(remaining))
    return Mesh(pts, np.array(tris, dtype=np.int64))


def _boundary_loop(mesh: Mesh) -> list[int]:
    """The single boundary loop of an open mesh, directed with the winding."""
    edge_count: dict = {}
    directed: dict = {}
    for tri in mesh.triangles:
        for k in range(3):
            a, b = int(tri[k]), int(tri[(k + 1) % 3])
            edge_count[(min(a, b), max(a, b))] = edge_count.get((min(a, b), max(a, b)), 0) + 1
    for tri in mesh.triangles:
        for k in range(3):
            a, b = int(tri[k]), int(tri[(k + 1) % 3])
            if edge_count[(min(a, b), max(a, b))] == 1:
                if a in directed:
                    raise GeometryError("OpenBoundaryAmbiguous",
                                        "boundary is not a simple loop")
                directed[a] = b
    if not directed:
        raise GeometryError("OpenBoundaryAmbiguous", "mesh has no boundary to extrude")
    start = min(directed)
    loop = [start]
    cur = directed[start]
    while cur != start:
        loop.append(cur)
        if cur not in directed or len(loop) > len(directed):
            raise GeometryError("OpenBoundaryAmbiguous", "boundary does not close")
        cur = directed[cur]
    if len(loop) != len(directed):
        raise GeometryError("OpenBoundaryAmbiguous",
                            f"found {len(directed) - len(loop) + 1} boundary loops, need 1")
    return loop


def extrude_mesh(mesh: Mesh, offset_scale: float) -> Mesh:
    """Prism from a planar cap: cap copy offset along its normal plus side walls.

    The result is watertight with outward winding regardless of the sign of
    offset_scale; enclosed volume equals cap area times |offset_scale|.
    """
    if mesh.num_triangles == 0:
        raise GeometryError("OpenBoundaryAmbiguous", "cannot extrude an empty mesh")
    loop = _boundary_loop(mesh)
    v = mesh.vertices
    t = mesh.triangles
    a, b, c = v[t[:, 0]], v[t[:, 1]], v[t[:, 2]]
    weighted = np.cross(b - a, c - a).sum(axis=0)
    norm = np.linalg.norm(weighted)
    if norm < 1e-14:
        raise GeometryError("NonPlanarCurve", "cap has no well-defined normal")
    normal = weighted / norm

    nv = mesh.num_vertices
    offset = normal * offset_scale
    verts = np.vstack([v, v + offset])
    bottom = t[:, ::-1]  # original cap flipped to face away from the offset
    top = t + nv
    sides = []
    for k in range(len(loop)):
        i, j = loop[k], loop[(k + 1) % len(loop)]
        sides.append([i, j, j + nv])
        sides.append([i, j + nv, i + nv])
    tris = np.vstack([bottom, top, np.array(sides, dtype=np.int64)])
    if offset_scale < 0:
        tris = tris[:, ::-1]
    tags = None
    if mesh.part_tags is not None:
        # bottom + top + sides inherit nothing; caller retags the prism anyway
        tags = np.full(tris.shape[0], -1, dtype=np.int64)
    return Mesh(verts, tris, tags, {})


def instance_on_points(points: Curve, instance: Mesh) -> Mesh:
    """One translated copy of the instance mesh at every curve point."""
    copies = [instance.translated(p) for p in points.points]
    return concat_meshes(copies)
