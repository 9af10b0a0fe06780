"""Shared test machinery: random valid graphs, source mutators, oracles."""

from __future__ import annotations

import math
import random
from collections import Counter

import numpy as np

from pcg.lang.model import ArgList, Graph, Lit, Node, ParamSpec, Ref, ValueType as VT, VecExpr


def corner_set_hausdorff(a: np.ndarray, b: np.ndarray) -> float:
    """Symmetric Hausdorff distance between two point sets."""
    d = np.linalg.norm(a[:, None, :] - b[None, :, :], axis=2)
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


# ---------------------------------------------------------------------------
# Random valid-graph generator.
#
# Tracks value pools by static type so every generated graph validates and
# evaluates: positive floats for dimensions, any floats for offsets, curves
# and caps threaded through the right ports.
# ---------------------------------------------------------------------------


class GraphGen:
    def __init__(self, rng: random.Random):
        self.rng = rng
        self.params: list[ParamSpec] = []
        self.nodes: list[Node] = []
        self.pos_floats: list = []  # exprs guaranteed > 0
        self.any_floats: list = []
        self.bools: list = []
        self.vecs: list = []
        self.curves: list[str] = []
        self.caps: list[str] = []  # fill outputs (extrudable)
        self.geos: list[str] = []
        self.counter = 0

    def name(self, stem: str) -> str:
        self.counter += 1
        return f"{stem}{self.counter}"

    def add_node(self, stem: str, kind: str, args) -> str:
        nid = self.name(stem)
        self.nodes.append(Node(nid, kind, tuple(args)))
        return nid

    # -- leaf expressions ------------------------------------------------

    def pos_literal(self) -> Lit:
        return Lit(round(self.rng.uniform(0.3, 2.5), 3))

    def any_literal(self) -> Lit:
        return Lit(round(self.rng.uniform(-2.0, 2.0), 3))

    def pos_float(self):
        pool = self.pos_floats + [self.pos_literal()]
        return self.rng.choice(pool)

    def any_float(self):
        pool = self.any_floats + self.pos_floats + [self.any_literal()]
        return self.rng.choice(pool)

    def vec_literal(self) -> Lit:
        return Lit(tuple(round(self.rng.uniform(-1.5, 1.5), 3) for _ in range(3)))

    def pos_vec(self):
        return Lit(tuple(round(self.rng.uniform(0.4, 2.0), 3) for _ in range(3)))

    def any_vec(self):
        choices = [self.vec_literal()]
        choices += self.vecs
        if self.any_floats or self.pos_floats:
            comps = tuple(self.any_float() if self.rng.random() < 0.6
                          else Lit(round(self.rng.uniform(-1, 1), 3))
                          for _ in range(3))
            choices.append(VecExpr(comps))
        return self.rng.choice(choices)

    # -- structure steps ---------------------------------------------------

    def add_params(self):
        for _ in range(self.rng.randint(0, 3)):
            default = round(self.rng.uniform(0.6, 1.8), 3)
            name = self.name("p")
            self.params.append(ParamSpec(name, VT.FLOAT, default, (0.3, 2.5)))
            self.pos_floats.append(Ref(name))
        for _ in range(self.rng.randint(0, 2)):
            name = self.name("flag")
            self.params.append(ParamSpec(name, VT.BOOL, self.rng.random() < 0.7))
            self.bools.append(Ref(name))

    def step(self):
        moves = [self.mk_primitive, self.mk_primitive, self.mk_math,
                 self.mk_combine, self.mk_transform, self.mk_curve]
        if self.curves:
            moves += [self.mk_fill, self.mk_instance]
        if self.caps:
            moves.append(self.mk_extrude)
        if len(self.geos) >= 2:
            moves += [self.mk_join, self.mk_switch_node]
        self.rng.choice(moves)()

    def mk_primitive(self):
        kind = self.rng.choice(["cube", "cylinder", "sphere"])
        if kind == "cube":
            args = []
            if self.rng.random() < 0.7:
                args.append(("size", self.pos_vec()))
            nid = self.add_node("box", "cube", args)
        elif kind == "cylinder":
            args = [("radius", self.pos_float()), ("depth", self.pos_float())]
            if self.rng.random() < 0.3:
                args.append(("segments", Lit(self.rng.randint(3, 16))))
            nid = self.add_node("cyl", "cylinder", args)
        else:
            args = [("radius", self.pos_float()),
                    ("rings", Lit(self.rng.randint(2, 8))),
                    ("segments", Lit(self.rng.randint(3, 12)))]
            nid = self.add_node("ball", "sphere", args)
        self.geos.append(nid)

    def mk_curve(self):
        nid = self.add_node("rect", "rectangle",
                            [("width", self.pos_float()),
                             ("height", self.pos_float())])
        if self.rng.random() < 0.5:
            nid = self.add_node("round", "fillet",
                                [("curve", Ref(nid)),
                                 ("radius", Lit(round(self.rng.uniform(0.02, 0.12), 3))),
                                 ("count", Lit(self.rng.randint(2, 8)))])
        self.curves.append(nid)

    def mk_fill(self):
        nid = self.add_node("cap", "fill",
                            [("curve", Ref(self.rng.choice(self.curves)))])
        self.caps.append(nid)
        self.geos.append(nid)

    def mk_extrude(self):
        args = [("mesh", Ref(self.rng.choice(self.caps)))]
        if self.rng.random() < 0.8:
            args.append(("offset_scale", self.pos_float()))
        self.geos.append(self.add_node("solid", "extrude", args))

    def mk_math(self):
        op = self.rng.choice(["add", "subtract", "multiply", "divide"])
        a = self.pos_float()
        b = self.pos_float()
        nid = self.add_node("num", op, [("a", a), ("b", b)])
        if op in ("add", "multiply", "divide"):
            self.pos_floats.append(Ref(nid))
        else:
            self.any_floats.append(Ref(nid))

    def mk_combine(self):
        args = []
        for port in ("x", "y", "z"):
            if self.rng.random() < 0.7:
                args.append((port, self.any_float()))
        nid = self.add_node("xyz", "combine_xyz", args)
        self.vecs.append(Ref(nid))

    def mk_transform(self):
        if not self.geos:
            self.mk_primitive()
        target = Ref(self.rng.choice(self.geos))
        kind = self.rng.choice(["transform", "translate", "rotate", "scale"])
        if kind == "transform":
            args = [("geometry", target)]
            if self.rng.random() < 0.8:
                args.append(("translation", self.any_vec()))
            if self.rng.random() < 0.4:
                args.append(("rotation", self.vec_literal()))
            if self.rng.random() < 0.4:
                args.append(("scale", self.pos_vec()))
        elif kind == "translate":
            args = [("geometry", target), ("t", self.any_vec())]
        elif kind == "rotate":
            args = [("geometry", target), ("r", self.any_vec())]
        else:
            args = [("geometry", target), ("s", self.pos_vec())]
        self.geos.append(self.add_node("moved", kind, args))

    def mk_instance(self):
        nid = self.add_node("spread", "instance_on_points",
                            [("points", Ref(self.rng.choice(self.curves))),
                             ("instance", Ref(self.rng.choice(self.geos)))])
        self.geos.append(nid)

    def mk_join(self):
        picks = self.rng.sample(self.geos, k=min(len(self.geos),
                                                 self.rng.randint(2, 4)))
        nid = self.add_node("bundle", "join",
                            [("geometry", ArgList(tuple(Ref(p) for p in picks)))])
        self.geos.append(nid)

    def mk_switch_node(self):
        flag = self.rng.choice(self.bools) if self.bools and self.rng.random() < 0.7 \
            else Lit(self.rng.random() < 0.8)
        args = [("flag", flag), ("on_true", Ref(self.rng.choice(self.geos)))]
        if self.rng.random() < 0.6:
            args.append(("on_false", Ref(self.rng.choice(self.geos))))
        self.geos.append(self.add_node("pick", "switch", args))

    def build(self, steps: int) -> Graph:
        self.add_params()
        self.mk_primitive()
        for _ in range(steps):
            self.step()
        tail = self.geos[-1]
        if len(self.geos) > 2 and self.rng.random() < 0.5:
            tail = self.add_node(
                "final", "join",
                [("geometry", ArgList(tuple(
                    Ref(p) for p in self.rng.sample(self.geos,
                                                    min(3, len(self.geos))))))])
        return Graph(tuple(self.params), tuple(self.nodes), tail)


def random_graph(seed: int, steps: int | None = None) -> Graph:
    rng = random.Random(seed)
    return GraphGen(rng).build(steps if steps is not None else rng.randint(2, 14))


def random_delta(graph: Graph, rng: random.Random) -> dict:
    """A legal single-parameter delta, or {} for parameter-free graphs."""
    if not graph.params:
        return {}
    p = rng.choice(graph.params)
    if p.type == VT.BOOL:
        return {p.name: rng.random() < 0.5}
    lo, hi = p.range if p.range else (0.3, 2.5)
    if p.type == VT.INT:
        return {p.name: rng.randint(int(lo), int(hi))}
    return {p.name: round(rng.uniform(lo, hi), 4)}


# ---------------------------------------------------------------------------
# Source mutators: each provably breaks a valid source in one known way.
# ---------------------------------------------------------------------------


def mutate_source(source: str, rng: random.Random) -> str:
    lines = source.rstrip("\n").split("\n")
    node_lines = [i for i, l in enumerate(lines)
                  if "=" in l and not l.startswith(("input", "output"))]
    mutators = [
        lambda: lines + ["@@ not a statement @@"],
        lambda: _swap_kind(lines, node_lines, rng),
        lambda: lines + [lines[rng.choice(node_lines)]] if node_lines else lines + ["dup = dup"],
        lambda: lines + ["dangling = translate(no_such_node_xyz)"],
        lambda: [l for l in lines if not l.startswith("output")],
        lambda: lines + ["loop_a = translate(loop_b)", "loop_b = translate(loop_a)"],
        lambda: lines + ["bad_type = scale(geometry=1.5)"],
        lambda: lines + ["broken = = ()"],
        lambda: lines + ["badvec = cube(size=(1, 2))"],
        lambda: lines + ["ghost = conjure_dragon()"],
    ]
    return "\n".join(rng.choice(mutators)()) + "\n"


def _swap_kind(lines, node_lines, rng):
    if not node_lines:
        return lines + ["x = zzz_unknown_kind()"]
    out = list(lines)
    i = rng.choice(node_lines)
    head, _, call = out[i].partition("=")
    kind = call.strip().split("(")[0]
    out[i] = f"{head}= zzz_unknown_kind(" + call.strip()[len(kind) + 1:]
    return out


# ---------------------------------------------------------------------------
# Independent BM25 oracle (naive per-document scoring).
# ---------------------------------------------------------------------------


def brute_force_bm25(pairs, query: str, k1: float = 1.2, b: float = 0.75):
    import re

    def words(text):
        return re.findall(r"[a-z0-9]+", text.lower())

    docs = [words(p.instruction) for p in pairs]
    n = len(docs)
    avgdl = sum(len(d) for d in docs) / n
    doc_freq = Counter()
    for d in docs:
        for term in set(d):
            doc_freq[term] += 1
    q_tokens = words(query)
    scores = []
    for d in docs:
        tf = Counter(d)
        score = 0.0
        for term in q_tokens:
            f = tf.get(term, 0)
            if f == 0:
                continue
            w = math.log(1.0 + (n - doc_freq[term] + 0.5) / (doc_freq[term] + 0.5))
            score += w * f * (k1 + 1.0) / (f + k1 * (1.0 - b + b * len(d) / avgdl))
        scores.append(score)
    return scores


def brute_force_top_k(pairs, query: str, k: int, k1: float = 1.2, b: float = 0.75):
    scores = brute_force_bm25(pairs, query, k1, b)
    order = sorted(range(len(scores)), key=lambda i: (-scores[i], i))
    return [pairs[i] for i in order[:k]]


# ---------------------------------------------------------------------------
# Synthetic hierarchies with known leaf boxes.
# ---------------------------------------------------------------------------


def _rotation_xyz(rx, ry, rz):
    from pcg.kernel.transforms import euler_to_matrix
    return euler_to_matrix(rx, ry, rz)


def random_obb_floats(rng: random.Random, rotated: bool) -> list[float]:
    center = [round(rng.uniform(-1, 1), 4) for _ in range(3)]
    # distinct extents keep PCA recovery out of the degenerate fallback
    size = sorted(round(rng.uniform(0.2, 1.6), 4) + 0.12 * k for k in range(3))
    rng.shuffle(size)
    if rotated:
        rot = _rotation_xyz(rng.uniform(-1.2, 1.2), rng.uniform(-1.2, 1.2),
                            rng.uniform(-1.2, 1.2))
    else:
        rot = np.eye(3)
    return [*center, *size, *rot[:, 0], *rot[:, 1]]


def random_hierarchy(seed: int, rotated: bool) -> dict:
    rng = random.Random(seed)
    groups = []
    for g in range(rng.randint(1, 4)):
        leaves = [
            {"label": f"piece_{g}", "box": random_obb_floats(rng, rotated)}
            for _ in range(rng.randint(1, 3))
        ]
        groups.append({"label": f"group_{g}", "children": leaves})
    return {"label": "model", "children": groups}
