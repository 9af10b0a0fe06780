"""Part-hierarchy to graph extraction."""

from .hierarchy import InvalidFrame, OBB, PartHierarchy, PartNode, SchemaError, load_hierarchy
from .fitting import (
    DEGENERATE_EIG_TOL,
    FittedTransform,
    extract_transform_from_box,
    extract_transform_from_vertices,
)
from .builder import (
    ExtractionConfig,
    ExtractionOutcome,
    GraphBuilder,
    attach_part,
    build_pcg,
    extract_file,
    extract_hierarchy,
    rotation_from_axes,
    save_graph,
)

__all__ = [
    "DEGENERATE_EIG_TOL", "ExtractionConfig", "ExtractionOutcome",
    "FittedTransform", "GraphBuilder", "InvalidFrame", "OBB",
    "PartHierarchy", "PartNode", "SchemaError", "attach_part", "build_pcg",
    "extract_file", "extract_hierarchy", "extract_transform_from_box",
    "extract_transform_from_vertices", "load_hierarchy",
    "rotation_from_axes", "save_graph",
]
