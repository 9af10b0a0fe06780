"""Transpilers from graphs to external representations, plus reports."""

from .blender import UnsupportedKind, to_blender_python
from .backends import BACKENDS, emit, from_json, register_backend, to_json
from .report import (
    CompactnessReport,
    compactness_report,
    reports_to_csv,
    write_report,
)

__all__ = [
    "BACKENDS", "CompactnessReport", "UnsupportedKind", "compactness_report",
    "emit", "from_json", "register_backend", "reports_to_csv",
    "to_blender_python", "to_json", "write_report",
]
