"""Compactness accounting across representations.

For a graph, counts tokens of the canonical text and of each backend
emission and reports other/pcg ratios. The directory report writes a CSV
plus comparison figures next to it.
"""

from __future__ import annotations

import csv
import io
import os
from dataclasses import dataclass, field

from ..lang.model import Graph
from ..lang.printer import print_pcg
from ..lang.tokens import count_tokens
from .backends import BACKENDS


@dataclass
class CompactnessReport:
    name: str
    tokens: dict  # representation -> token count
    ratios: dict = field(init=False)  # backend -> tokens / pcg tokens

    def __post_init__(self):
        pcg = self.tokens["pcg"]
        self.ratios = {
            rep: (count / pcg if pcg else float("inf"))
            for rep, count in self.tokens.items() if rep != "pcg"
        }


def compactness_report(graph: Graph, name: str = "graph") -> CompactnessReport:
    tokens = {"pcg": count_tokens(print_pcg(graph))}
    for backend, emit in BACKENDS.items():
        tokens[backend] = count_tokens(emit(graph))
    return CompactnessReport(name, tokens)


def _columns(reports: list) -> list[str]:
    backends = sorted({rep for r in reports for rep in r.ratios})
    cols = ["name", "pcg_tokens"]
    cols += [f"{b}_tokens" for b in backends]
    cols += [f"{b}_ratio" for b in backends]
    return cols


def reports_to_csv(reports: list) -> str:
    out = io.StringIO()
    writer = csv.writer(out)
    backends = sorted({rep for r in reports for rep in r.ratios})
    writer.writerow(_columns(reports))
    for r in reports:
        row = [r.name, r.tokens["pcg"]]
        row += [r.tokens.get(b, "") for b in backends]
        row += [f"{r.ratios[b]:.4f}" if b in r.ratios else "" for b in backends]
        writer.writerow(row)
    return out.getvalue()


def write_report(reports: list, csv_path: str, figures: bool = True) -> list[str]:
    """Write the CSV and, alongside it, comparison figures. Returns paths."""
    paths = [csv_path]
    os.makedirs(os.path.dirname(os.path.abspath(csv_path)), exist_ok=True)
    with open(csv_path, "w", newline="") as f:
        f.write(reports_to_csv(reports))
    if figures and reports:
        paths += _write_figures(reports, os.path.splitext(csv_path)[0])
    return paths


def _write_figures(reports: list, stem: str) -> list[str]:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    import numpy as np

    backends = sorted({rep for r in reports for rep in r.ratios})
    reps = ["pcg"] + backends

    counts_path = stem + "_tokens.png"
    fig, ax = plt.subplots(figsize=(max(6, 0.8 * len(reports)), 4))
    x = np.arange(len(reports))
    width = 0.8 / len(reps)
    for i, rep in enumerate(reps):
        ax.bar(x + i * width, [r.tokens.get(rep, 0) for r in reports],
               width, label=rep)
    ax.set_xticks(x + 0.4 - width / 2)
    ax.set_xticklabels([r.name for r in reports], rotation=45, ha="right",
                       fontsize=7)
    ax.set_ylabel("tokens")
    ax.set_title("Token count by representation")
    ax.legend()
    fig.tight_layout()
    fig.savefig(counts_path, dpi=120)
    plt.close(fig)

    ratios_path = stem + "_ratios.png"
    fig, ax = plt.subplots(figsize=(6, 4))
    for b in backends:
        ax.hist([r.ratios[b] for r in reports if b in r.ratios],
                bins=12, alpha=0.6, label=b)
    ax.axvline(1.0, color="k", linewidth=0.8)
    ax.set_xlabel("tokens relative to pcg")
    ax.set_ylabel("graphs")
    ax.set_title("Verbosity ratio distribution")
    ax.legend()
    fig.tight_layout()
    fig.savefig(ratios_path, dpi=120)
    plt.close(fig)
    return [counts_path, ratios_path]
