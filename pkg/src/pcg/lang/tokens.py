"""Token accounting for compactness comparisons.

The counting rule is deliberately tokenizer-agnostic so results are
reproducible without an external vocabulary: a maximal run of identifier
characters ([A-Za-z0-9_]) is one token, and every other non-whitespace
character is one token on its own.
"""

from __future__ import annotations

import re

_TOKEN_RE = re.compile(r"[A-Za-z0-9_]+|\S")


def count_tokens(text: str) -> int:
    return len(_TOKEN_RE.findall(text))
