"""Prompt assembly for generation and editing, and response parsing.

Prompts are plain deterministic templates: a grammar primer, retrieved
(instruction -> graph) demonstrations, then the target request. Responses
are mined for the first fenced or statement-shaped graph block.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..lang.model import Codes, Severity, error
from ..lang.parser import ParseResult, parse_pcg
from ..lang.printer import print_pcg
from ..lang.tokens import count_tokens

DEFAULT_GRAMMAR_PRIMER = """\
You write procedural 3D models in the PCG graph language. One statement per line:
  input name: float|int|bool = default [range lo..hi]   declares a parameter
  id = kind(arg, ..., port=arg, ...)                     creates a node
  output = id                                            names the final geometry
Arguments are numbers, true/false, (x, y, z) vectors, parameter names, or ids
of earlier nodes. Angles are radians. Available kinds: cube(size),
cylinder(radius, depth, segments), sphere(radius, rings, segments),
rectangle(width, height), fillet(curve, radius, count), fill(curve),
extrude(mesh, offset_scale), transform(geometry, translation, rotation, scale),
translate(geometry, t), rotate(geometry, r), scale(geometry, s), join(g, ...),
switch(flag, on_true, on_false), combine_xyz(x, y, z),
instance_on_points(points, instance), add(a, b), subtract(a, b),
multiply(a, b), divide(a, b).
Respond with only a PCG program in a fenced code block.
"""

NO_GRAPH_FOUND = Codes.SYNTAX  # kept distinct below via its own code string
NO_GRAPH_CODE = "NoGraphFound"


@dataclass(frozen=True)
class GenerationPrompt:
    text: str
    token_estimate: int


def build_generation_prompt(instruction: str, examples: list,
                            grammar_primer: str = DEFAULT_GRAMMAR_PRIMER) -> GenerationPrompt:
    """Primer + k demonstrations + the target instruction.

    The token estimate is assembled from per-part counts (primer, each
    demonstration, the request) and lands within a few percent of a direct
    recount of the final text.
    """
    if not instruction or not instruction.strip():
        raise ValueError("instruction must not be empty")
    parts = [grammar_primer.rstrip() + "\n"]
    estimate = count_tokens(grammar_primer)
    for pair in examples:
        demo = (f"### Instruction:\n{pair.instruction.strip()}\n"
                f"### PCG:\n```\n{pair.pcg.strip()}\n```\n")
        parts.append(demo)
        estimate += count_tokens(demo)
    request = f"### Instruction:\n{instruction.strip()}\n### PCG:\n"
    parts.append(request)
    estimate += count_tokens(request)
    return GenerationPrompt("\n".join(parts), estimate)


def build_edit_prompt(current, instruction: str) -> str:
    """Embed the current program and ask for a complete revised one."""
    if not instruction or not instruction.strip():
        raise ValueError("edit instruction must not be empty")
    pcg_text = print_pcg(current)
    return (
        "Here is the current PCG program:\n"
        f"```\n{pcg_text}```\n\n"
        f"Apply this edit: {instruction.strip()}\n"
        "Respond with the complete revised PCG program in a fenced code block. "
        "Keep unrelated parameters and nodes unchanged.\n"
    )


_FENCE_RE = re.compile(r"```[^\n`]*\n(.*?)```", re.DOTALL)
_STMT_RE = re.compile(
    r"^\s*(#.*|input\s+\w+\s*:.*|output\s*=.*|[A-Za-z_]\w*\s*=\s*[A-Za-z_]\w*\s*\(.*)$"
)


def _statement_block(response: str) -> str | None:
    """Longest run of statement-shaped lines; must include an output line."""
    lines = response.splitlines()
    best: tuple[int, int] | None = None
    start = None
    for i, line in enumerate(lines + [""]):
        if line.strip() and _STMT_RE.match(line):
            if start is None:
                start = i
        else:
            if start is not None:
                if best is None or (i - start) > (best[1] - best[0]):
                    best = (start, i)
                start = None
    if best is None:
        return None
    block = "\n".join(lines[best[0]:best[1]])
    if "output" not in block:
        return None
    return block


def extract_graph(response: str) -> ParseResult:
    """Locate the graph block in a model response and parse it.

    Returns a failed ParseResult with a NoGraphFound diagnostic when the
    response contains nothing graph-shaped; parse/validation diagnostics
    pass through otherwise.
    """
    for m in _FENCE_RE.finditer(response):
        body = m.group(1)
        if body.strip():
            return parse_pcg(body)
    block = _statement_block(response)
    if block is not None:
        return parse_pcg(block)
    return ParseResult(None, [error(1, NO_GRAPH_CODE,
                                    "response contains no PCG block")])
