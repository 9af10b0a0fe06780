"""Evaluation-time error types.

GeometryError is raised by raw geometry routines with a stable code;
EvalError is the evaluator-facing wrapper that adds the offending node id.
"""

from __future__ import annotations


class GeometryError(Exception):
    """A geometry routine rejected its inputs (code identifies the rule)."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code
        self.message = message


class EvalError(Exception):
    """Evaluation failed at a specific node (or binding)."""

    def __init__(self, code: str, message: str, node_id: str | None = None):
        where = f" at node {node_id!r}" if node_id else ""
        super().__init__(f"{code}{where}: {message}")
        self.code = code
        self.message = message
        self.node_id = node_id


class BindingTypeError(EvalError):
    def __init__(self, message: str):
        super().__init__("BindingTypeError", message)


class RangeError(EvalError):
    def __init__(self, message: str):
        super().__init__("RangeError", message)
