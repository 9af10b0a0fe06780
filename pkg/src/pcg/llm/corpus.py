"""Instruction-graph corpus records and JSON-Lines IO.

Each record pairs a natural-language instruction (at one of three detail
levels) with a graph text; the graph must parse and validate at ingest so
retrieval never serves broken demonstrations.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from ..lang.parser import parse_pcg

DETAIL_LEVELS = ("short", "medium", "long")


class CorpusError(ValueError):
    pass


@dataclass(frozen=True)
class InstructionGraphPair:
    id: str
    instruction: str
    detail_level: str
    pcg: str

    def __post_init__(self):
        if self.detail_level not in DETAIL_LEVELS:
            raise CorpusError(
                f"detail_level must be one of {DETAIL_LEVELS}, got {self.detail_level!r}")


def validate_pair(pair: InstructionGraphPair) -> None:
    result = parse_pcg(pair.pcg)
    if not result.ok:
        first = result.diagnostics[0] if result.diagnostics else "unknown error"
        raise CorpusError(f"pair {pair.id!r} has an invalid graph: {first}")


def load_corpus(text: str, check: bool = True) -> list[InstructionGraphPair]:
    """Parse JSONL, one pair per line; raises CorpusError with the line number."""
    pairs: list[InstructionGraphPair] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        try:
            raw = json.loads(line)
            pair = InstructionGraphPair(
                id=str(raw["id"]),
                instruction=raw["instruction"],
                detail_level=raw.get("detail_level", "short"),
                pcg=raw["pcg"],
            )
        except (json.JSONDecodeError, KeyError, TypeError) as e:
            raise CorpusError(f"line {lineno}: {e}") from e
        if check:
            try:
                validate_pair(pair)
            except CorpusError as e:
                raise CorpusError(f"line {lineno}: {e}") from e
        pairs.append(pair)
    return pairs


def load_corpus_file(path, check: bool = True) -> list[InstructionGraphPair]:
    with open(path, "r") as f:
        return load_corpus(f.read(), check=check)


def dump_corpus(pairs: list) -> str:
    lines = []
    for p in pairs:
        lines.append(json.dumps({
            "id": p.id,
            "instruction": p.instruction,
            "detail_level": p.detail_level,
            "pcg": p.pcg,
        }))
    return "\n".join(lines) + "\n"
