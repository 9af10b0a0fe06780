"""Backend registry: named emitters from Graph to engine-specific text.

Additional engines (Unity, etc.) plug in through register_backend; each
emitter must be deterministic for a fixed graph.
"""

from __future__ import annotations

from typing import Callable

from ..lang.jsonio import graph_from_json, graph_to_json
from ..lang.model import Graph
from .blender import to_blender_python


def to_json(graph: Graph) -> str:
    """Canonical JSON interchange; from_json inverts it exactly."""
    return graph_to_json(graph)


def from_json(text: str) -> Graph:
    return graph_from_json(text)


BACKENDS: dict[str, Callable[[Graph], str]] = {
    "blender_python": to_blender_python,
    "json": to_json,
}


def register_backend(name: str, emit: Callable[[Graph], str]) -> None:
    BACKENDS[name] = emit


def emit(graph: Graph, backend: str) -> str:
    try:
        fn = BACKENDS[backend]
    except KeyError:
        raise ValueError(
            f"unknown backend {backend!r}; available: {sorted(BACKENDS)}") from None
    return fn(graph)
