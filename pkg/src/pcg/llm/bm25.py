"""Okapi BM25 retrieval over instruction text.

Inverted-index scoring accumulates query terms in order, so per-document
float addition sequences match a naive per-document scorer exactly; tests
compare against such a brute-force oracle for identical scores and order.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass, field


class EmptyCorpus(ValueError):
    pass


_WORD_RE = re.compile(r"[a-z0-9]+")


def tokenize(text: str) -> list[str]:
    """Lowercased, punctuation-stripped word tokens."""
    return _WORD_RE.findall(text.lower())


def idf(num_docs: int, doc_freq: int) -> float:
    # Smoothed (+1) Okapi idf: non-negative even for very common terms.
    return math.log(1.0 + (num_docs - doc_freq + 0.5) / (doc_freq + 0.5))


@dataclass
class Bm25Index:
    pairs: list
    k1: float
    b: float
    postings: dict = field(default_factory=dict)  # term -> [(doc, tf), ...]
    doc_lens: list = field(default_factory=list)
    avgdl: float = 0.0
    idf_of: dict = field(default_factory=dict)

    def scores(self, query: str) -> list[float]:
        out = [0.0] * len(self.pairs)
        for term in tokenize(query):
            posting = self.postings.get(term)
            if not posting:
                continue
            w = self.idf_of[term]
            for doc, tf in posting:
                norm = self.k1 * (1.0 - self.b + self.b * self.doc_lens[doc] / self.avgdl)
                out[doc] += w * tf * (self.k1 + 1.0) / (tf + norm)
        return out


def build_index(corpus: list, k1: float = 1.2, b: float = 0.75) -> Bm25Index:
    if not corpus:
        raise EmptyCorpus("cannot index an empty corpus")
    index = Bm25Index(list(corpus), k1, b)
    doc_freq: Counter = Counter()
    for doc, pair in enumerate(index.pairs):
        terms = tokenize(pair.instruction)
        index.doc_lens.append(len(terms))
        counts = Counter(terms)
        for term, tf in counts.items():
            index.postings.setdefault(term, []).append((doc, tf))
            doc_freq[term] += 1
    index.avgdl = sum(index.doc_lens) / len(index.doc_lens)
    n = len(index.pairs)
    index.idf_of = {term: idf(n, df) for term, df in doc_freq.items()}
    return index


def retrieve(index: Bm25Index, query: str, k: int = 20) -> list:
    """Top-k pairs by BM25 score, ties broken by corpus order."""
    scores = index.scores(query)
    order = sorted(range(len(scores)), key=lambda i: (-scores[i], i))
    return [index.pairs[i] for i in order[:k]]
