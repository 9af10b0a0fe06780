"""Rotation and transform math.

Euler convention used across the whole toolkit: extrinsic XYZ in radians,
i.e. the combined rotation matrix is Rz(rz) @ Ry(ry) @ Rx(rx). Transforms
apply scale first, then rotation, then translation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def rotation_x(a: float) -> np.ndarray:
    c, s = np.cos(a), np.sin(a)
    return np.array([[1, 0, 0], [0, c, -s], [0, s, c]], dtype=np.float64)


def rotation_y(a: float) -> np.ndarray:
    c, s = np.cos(a), np.sin(a)
    return np.array([[c, 0, s], [0, 1, 0], [-s, 0, c]], dtype=np.float64)


def rotation_z(a: float) -> np.ndarray:
    c, s = np.cos(a), np.sin(a)
    return np.array([[c, -s, 0], [s, c, 0], [0, 0, 1]], dtype=np.float64)


def euler_to_matrix(rx: float, ry: float, rz: float) -> np.ndarray:
    return rotation_z(rz) @ rotation_y(ry) @ rotation_x(rx)


def matrix_to_euler(rot: np.ndarray) -> tuple[float, float, float]:
    """Inverse of euler_to_matrix; picks ry in [-pi/2, pi/2].

    At the gimbal singularity (|cos ry| ~ 0) rz is fixed to 0 and the
    remaining freedom folds into rx, keeping the output deterministic.
    """
    ry = float(np.arcsin(np.clip(-rot[2, 0], -1.0, 1.0)))
    if abs(np.cos(ry)) > 1e-9:
        rx = float(np.arctan2(rot[2, 1], rot[2, 2]))
        rz = float(np.arctan2(rot[1, 0], rot[0, 0]))
    else:
        rx = float(np.arctan2(-rot[1, 2], rot[1, 1]))
        rz = 0.0
    return rx, ry, rz


@dataclass(frozen=True)
class TransformTriple:
    """(translation, Euler rotation, per-axis scale) applied as S then R then T."""

    translation: tuple
    rotation: tuple  # (rx, ry, rz) radians
    scale: tuple

    def __post_init__(self):
        object.__setattr__(self, "translation", tuple(float(v) for v in self.translation))
        object.__setattr__(self, "rotation", tuple(float(v) for v in self.rotation))
        object.__setattr__(self, "scale", tuple(float(v) for v in self.scale))

    @classmethod
    def identity(cls) -> "TransformTriple":
        return cls((0.0, 0.0, 0.0), (0.0, 0.0, 0.0), (1.0, 1.0, 1.0))

    def rotation_matrix(self) -> np.ndarray:
        return euler_to_matrix(*self.rotation)

    def matrix(self) -> np.ndarray:
        """Homogeneous 4x4 for v' = T + R @ (S * v)."""
        m = np.eye(4)
        m[:3, :3] = self.rotation_matrix() @ np.diag(self.scale)
        m[:3, 3] = self.translation
        return m

    def apply(self, points: np.ndarray) -> np.ndarray:
        pts = np.asarray(points, dtype=np.float64)
        linear = self.rotation_matrix() @ np.diag(self.scale)
        return pts @ linear.T + np.asarray(self.translation)


def apply_trs(points: np.ndarray, translation, rotation, scale) -> np.ndarray:
    """v' = T + Rz Ry Rx @ (S * v), vectorized over rows of points."""
    rot = euler_to_matrix(*rotation)
    linear = rot @ np.diag(np.asarray(scale, dtype=np.float64))
    return np.asarray(points, dtype=np.float64) @ linear.T + np.asarray(
        translation, dtype=np.float64)
