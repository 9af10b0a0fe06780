"""Geometry kernel: node semantics, evaluation, and mesh interchange."""

from .errors import BindingTypeError, EvalError, GeometryError, RangeError
from .mesh import (
    Curve,
    EMPTY_MESH,
    Mesh,
    bounds,
    concat_meshes,
    curve_to_mesh,
    decode_frame,
    encode_frame,
    export_obj,
    import_obj,
    meshes_equal,
    signed_volume,
    surface_area,
)
from .transforms import (
    TransformTriple,
    apply_trs,
    euler_to_matrix,
    matrix_to_euler,
    rotation_x,
    rotation_y,
    rotation_z,
)
from .primitives import (
    make_cube,
    make_cylinder,
    make_rectangle,
    make_sphere,
    unit_box_corners,
)
from .ops import extrude_mesh, fill_curve, fillet_curve, instance_on_points
from .evaluator import EvalSession, check_binding, evaluate, resolve_bindings

__all__ = [
    "BindingTypeError", "Curve", "EMPTY_MESH", "EvalError", "EvalSession",
    "GeometryError", "Mesh", "RangeError", "TransformTriple", "apply_trs",
    "bounds", "check_binding", "concat_meshes", "curve_to_mesh",
    "decode_frame", "encode_frame", "euler_to_matrix", "evaluate",
    "export_obj", "extrude_mesh", "fill_curve", "fillet_curve", "import_obj",
    "instance_on_points", "make_cube", "make_cylinder", "make_rectangle",
    "make_sphere", "matrix_to_euler", "meshes_equal", "resolve_bindings",
    "rotation_x", "rotation_y", "rotation_z", "signed_volume",
    "surface_area", "unit_box_corners",
]
