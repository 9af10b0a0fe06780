"""Transform recovery: centroid + PCA rotation + principal-axis extents.

The recovered triple, applied to the canonical unit cube, reproduces the
input's oriented bounding box. Eigenvectors are canonicalized (extents
sorted descending, signs fixed, right-handed) so recovery is deterministic;
nearly repeated eigenvalues trip the degenerate fallback to the identity
frame instead of returning arbitrary PCA axes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..kernel.transforms import TransformTriple, matrix_to_euler
from .hierarchy import OBB

#: Eigenvalue-gap threshold below which the principal frame is ambiguous.
DEGENERATE_EIG_TOL = 1e-9


@dataclass(frozen=True)
class FittedTransform:
    transform: TransformTriple
    degenerate: bool = False  # PCA fell back to the axis-aligned frame


def _canonicalize(axes: np.ndarray) -> np.ndarray:
    """Fix axis signs (largest component positive) and handedness (det +1)."""
    out = axes.copy()
    for i in range(3):
        col = out[:, i]
        if col[np.argmax(np.abs(col))] < 0:
            out[:, i] = -col
    if np.linalg.det(out) < 0:
        out[:, 2] = -out[:, 2]
    return out


def _extents(centered: np.ndarray, axes: np.ndarray) -> np.ndarray:
    proj = centered @ axes
    return proj.max(axis=0) - proj.min(axis=0)


def extract_transform_from_vertices(vertices) -> FittedTransform:
    """Recover (T, R, S) from a point cloud.

    T is the centroid, R comes from the eigenvectors of the covariance
    (1/N) sum(v' v'^T), and S is the extent of the points along each
    principal axis. Recovery is exact for box corners up to the box's
    symmetry group: compare corner sets, not raw Euler angles.
    """
    pts = np.asarray(vertices, dtype=np.float64).reshape(-1, 3)
    if pts.shape[0] < 4:
        raise ValueError(f"need at least 4 points, got {pts.shape[0]}")
    centroid = pts.mean(axis=0)
    centered = pts - centroid
    cov = centered.T @ centered / pts.shape[0]
    eigvals, eigvecs = np.linalg.eigh(cov)  # ascending
    order = np.argsort(-eigvals, kind="stable")
    eigvals = eigvals[order]
    eigvecs = eigvecs[:, order]

    gaps = np.abs(np.diff(eigvals))
    if np.any(gaps < DEGENERATE_EIG_TOL):
        axes = np.eye(3)
        size = _extents(centered, axes)
        return FittedTransform(
            TransformTriple(tuple(centroid), (0.0, 0.0, 0.0), tuple(size)),
            degenerate=True)

    axes = _canonicalize(eigvecs)
    size = _extents(centered, axes)
    rotation = matrix_to_euler(axes)
    return FittedTransform(
        TransformTriple(tuple(centroid), rotation, tuple(size)))


def extract_transform_from_box(box: OBB) -> FittedTransform:
    """Recover (T, R, S) directly from an oriented bounding box.

    Canonicalized exactly like the vertex path, so the two agree on the
    box's 8 corners to ~1e-9.
    """
    box.check()
    axes = np.column_stack([box.dir1, box.dir2, box.dir3])
    size = box.size.copy()

    # Box-corner covariance eigenvalues are size^2/4 along each axis; apply
    # the same ordering and degeneracy rule as the vertex path.
    eigvals = size ** 2 / 4.0
    order = np.argsort(-eigvals, kind="stable")
    eigvals = eigvals[order]
    gaps = np.abs(np.diff(eigvals))
    if np.any(gaps < DEGENERATE_EIG_TOL):
        corners = box.corners()
        centered = corners - box.center
        ident = np.eye(3)
        return FittedTransform(
            TransformTriple(tuple(box.center), (0.0, 0.0, 0.0),
                            tuple(_extents(centered, ident))),
            degenerate=True)

    axes = _canonicalize(axes[:, order])
    size = size[order]
    rotation = matrix_to_euler(axes)
    return FittedTransform(
        TransformTriple(tuple(box.center), rotation, tuple(size)))
