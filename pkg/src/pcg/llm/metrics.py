"""Evaluation metrics: compile rate and geometric similarity.

compile_rate counts responses whose extracted graph parses, validates, and
evaluates at defaults. similarity_measure is exp(-chamfer) over unit-
normalized surface samples - a bounded stand-in for the paper-style score;
absolute published values are not comparable.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from ..kernel.errors import EvalError
from ..kernel.evaluator import evaluate
from ..kernel.mesh import Mesh, bounds, export_obj
from .prompts import extract_graph


class EmptyReferenceSet(ValueError):
    pass


@dataclass(frozen=True)
class MetricsRecord:
    compile_rate: float
    similarity: float
    latency_seconds: float

    def __post_init__(self):
        if not (0.0 <= self.compile_rate <= 1.0):
            raise ValueError(f"compile_rate must be in [0,1], got {self.compile_rate}")


def response_compiles(response: str) -> bool:
    result = extract_graph(response)
    if not result.ok:
        return False
    try:
        evaluate(result.graph)
    except EvalError:
        return False
    return True


def compile_rate(responses: list) -> float:
    """Fraction of responses that yield a parseable, evaluable graph."""
    if not responses:
        return 0.0
    good = sum(1 for r in responses if response_compiles(r))
    return good / len(responses)


def normalize_mesh(mesh: Mesh) -> Mesh:
    """Center on the bounding box and scale the longest axis to 1."""
    lo, hi = bounds(mesh)
    center = (lo + hi) / 2.0
    extent = float((hi - lo).max())
    if extent <= 0:
        extent = 1.0
    return Mesh((mesh.vertices - center) / extent, mesh.triangles,
                mesh.part_tags, mesh.tag_names)


def sample_surface(mesh: Mesh, count: int, seed: int) -> np.ndarray:
    """Area-weighted uniform surface samples with a fixed generator seed."""
    if mesh.num_triangles == 0:
        return np.zeros((0, 3))
    rng = np.random.default_rng(seed)
    v = mesh.vertices
    t = mesh.triangles
    a, b, c = v[t[:, 0]], v[t[:, 1]], v[t[:, 2]]
    areas = 0.5 * np.linalg.norm(np.cross(b - a, c - a), axis=1)
    total = areas.sum()
    if total <= 0:
        return np.zeros((0, 3))
    chosen = rng.choice(len(areas), size=count, p=areas / total)
    r1 = np.sqrt(rng.random(count))[:, None]
    r2 = rng.random(count)[:, None]
    return (a[chosen] * (1 - r1)
            + b[chosen] * (r1 * (1 - r2))
            + c[chosen] * (r1 * r2))


def chamfer_distance(pts_a: np.ndarray, pts_b: np.ndarray) -> float:
    """Symmetric average nearest-neighbor distance."""
    if len(pts_a) == 0 or len(pts_b) == 0:
        return float("inf")
    d_ab = cKDTree(pts_b).query(pts_a)[0].mean()
    d_ba = cKDTree(pts_a).query(pts_b)[0].mean()
    return float(0.5 * (d_ab + d_ba))


def similarity_measure(mesh: Mesh, reference_meshes: list,
                       samples: int = 2048, seed: int = 7) -> float:
    """exp(-chamfer) against the closest reference, both unit-normalized.

    The same generator seed samples every mesh, so a mesh compared with
    itself scores exactly 1.
    """
    if not reference_meshes:
        raise EmptyReferenceSet("need at least one reference mesh")
    pts = sample_surface(normalize_mesh(mesh), samples, seed)
    best = 0.0
    for ref in reference_meshes:
        ref_pts = sample_surface(normalize_mesh(ref), samples, seed)
        d = chamfer_distance(pts, ref_pts)
        score = 0.0 if np.isinf(d) else float(np.exp(-d))
        best = max(best, score)
    return best


def export_ulip_pairs(items: list, out_dir) -> list[str]:
    """Write (prompt, OBJ) pairs for an external perceptual scorer.

    items: iterable of (prompt text, Mesh). Returns the written paths.
    """
    os.makedirs(out_dir, exist_ok=True)
    written = []
    for i, (prompt, mesh) in enumerate(items):
        stem = os.path.join(out_dir, f"{i:04d}")
        with open(stem + "_prompt.txt", "w") as f:
            f.write(prompt.rstrip() + "\n")
        with open(stem + "_model.obj", "w") as f:
            f.write(export_obj(mesh))
        written += [stem + "_prompt.txt", stem + "_model.obj"]
    return written
