"""Line-oriented parser for PCG source text.

Grammar summary (normative EBNF in docs/grammar.md):

    program   := line*
    line      := input-decl | node-stmt | output-decl | blank | comment
    input-decl:= "input" NAME ":" type "=" scalar ["range" num ".." num]
    node-stmt := NAME "=" KIND "(" [arg ("," arg)*] ")"
    output-decl:= "output" "=" NAME
    arg       := [NAME "="] expr
    expr      := num | bool | vec | NAME | NAME "." NAME
    vec       := "(" comp "," comp "," comp ")"     # comp: num | NAME | NAME.NAME

Positional args bind to the kind's input ports in declaration order; named
args may follow. ``#`` starts a comment. Angles are radians.

Parsing never raises for bad input: every problem becomes a Diagnostic and
all lines are processed.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from . import registry
from .analysis import validate
from .model import (
    ArgList,
    Codes,
    Diagnostic,
    EMPTY_GEOMETRY,
    Graph,
    Lit,
    Node,
    ParamSpec,
    Ref,
    RESERVED_WORDS,
    Severity,
    ValueType,
    VecExpr,
    error,
)

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>[+-]?(?:\d+\.\d+|\.\d+|\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<dotdot>\.\.)
  | (?P<sym>[=:(),.])
    """,
    re.VERBOSE,
)

_SCALAR_TYPES = {
    "float": ValueType.FLOAT,
    "int": ValueType.INT,
    "bool": ValueType.BOOL,
}


@dataclass
class _Tok:
    kind: str  # num | ident | dotdot | sym | end
    text: str
    col: int


class _LineError(Exception):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code
        self.message = message


def _lex_line(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    pos = 0
    while pos < len(text):
        if text[pos] == "#":
            break
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise _LineError(Codes.LEX, f"unexpected character {text[pos]!r}")
        pos = m.end()
        if m.lastgroup == "ws":
            continue
        toks.append(_Tok(m.lastgroup, m.group(), m.start() + 1))
    toks.append(_Tok("end", "", len(text) + 1))
    return toks


class _LineParser:
    def __init__(self, toks: list[_Tok]):
        self.toks = toks
        self.i = 0

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def next(self) -> _Tok:
        t = self.toks[self.i]
        if t.kind != "end":
            self.i += 1
        return t

    def expect_sym(self, sym: str) -> None:
        t = self.next()
        if t.kind != "sym" or t.text != sym:
            raise _LineError(Codes.SYNTAX, f"expected {sym!r}, got {t.text or 'end of line'!r}")

    def expect_ident(self, what: str = "identifier") -> str:
        t = self.next()
        if t.kind != "ident":
            raise _LineError(Codes.SYNTAX, f"expected {what}, got {t.text or 'end of line'!r}")
        return t.text

    def at_sym(self, sym: str) -> bool:
        t = self.peek()
        return t.kind == "sym" and t.text == sym

    def at_end(self) -> bool:
        return self.peek().kind == "end"

    def expect_end(self) -> None:
        if not self.at_end():
            raise _LineError(Codes.SYNTAX, f"unexpected trailing {self.peek().text!r}")

    # -- expressions --------------------------------------------------

    def parse_number(self) -> float | int:
        t = self.next()
        if t.kind != "num":
            raise _LineError(Codes.SYNTAX, f"expected number, got {t.text or 'end of line'!r}")
        if re.fullmatch(r"[+-]?\d+", t.text):
            return int(t.text)
        return float(t.text)

    def parse_scalar_component(self):
        """One vec3 component: number, param name, or node[.port] ref."""
        t = self.peek()
        if t.kind == "num":
            return Lit(self.parse_number())
        if t.kind == "ident":
            return self._parse_name_expr()
        raise _LineError(Codes.SYNTAX, f"expected number or name, got {t.text or 'end of line'!r}")

    def _parse_name_expr(self):
        name = self.next().text
        if name == "true":
            return Lit(True)
        if name == "false":
            return Lit(False)
        if name == "empty":
            return EMPTY_GEOMETRY
        port = None
        if self.at_sym("."):
            self.next()
            port = self.expect_ident("port name")
        return Ref(name, port)

    def parse_expr(self):
        t = self.peek()
        if t.kind == "num":
            return Lit(self.parse_number())
        if t.kind == "ident":
            return self._parse_name_expr()
        if self.at_sym("("):
            self.next()
            comps = [self.parse_scalar_component()]
            while self.at_sym(","):
                self.next()
                comps.append(self.parse_scalar_component())
            self.expect_sym(")")
            if len(comps) != 3:
                raise _LineError(Codes.SYNTAX, f"vector needs 3 components, got {len(comps)}")
            if all(isinstance(c, Lit) for c in comps):
                return Lit(tuple(float(c.value) for c in comps))
            return VecExpr(tuple(comps))
        raise _LineError(Codes.SYNTAX, f"expected expression, got {t.text or 'end of line'!r}")


def _parse_input_decl(p: _LineParser, line: int) -> ParamSpec:
    name = p.expect_ident("parameter name")
    if name in RESERVED_WORDS:
        raise _LineError(Codes.SYNTAX, f"{name!r} is a reserved word")
    p.expect_sym(":")
    type_name = p.expect_ident("type")
    if type_name not in _SCALAR_TYPES:
        raise _LineError(Codes.SYNTAX,
                         f"parameter type must be float, int or bool, got {type_name!r}")
    ptype = _SCALAR_TYPES[type_name]
    p.expect_sym("=")
    tok = p.peek()
    if tok.kind == "ident" and tok.text in ("true", "false"):
        p.next()
        default: float | int | bool = tok.text == "true"
    else:
        default = p.parse_number()
    rng = None
    tok = p.peek()
    if tok.kind == "ident" and tok.text == "range":
        p.next()
        lo = p.parse_number()
        t = p.next()
        if t.kind != "dotdot":
            raise _LineError(Codes.SYNTAX, f"expected '..', got {t.text or 'end of line'!r}")
        hi = p.parse_number()
        rng = (lo, hi)
    p.expect_end()
    return ParamSpec(name, ptype, default, rng)


def _parse_call(p: _LineParser, node_id: str, line: int) -> Node:
    kind_name = p.expect_ident("node kind")
    kind = registry.lookup(kind_name)
    if kind is None:
        raise _LineError(Codes.UNKNOWN_KIND, f"unknown node kind {kind_name!r}")
    p.expect_sym("(")
    positional: list = []
    named: list = []
    if not p.at_sym(")"):
        while True:
            tok = p.peek()
            is_named = (
                tok.kind == "ident"
                and p.toks[p.i + 1].kind == "sym"
                and p.toks[p.i + 1].text == "="
            )
            if is_named:
                pname = p.next().text
                p.next()  # '='
                expr = p.parse_expr()
                named.append((pname, expr))
            else:
                if named:
                    raise _LineError(Codes.SYNTAX,
                                     "positional argument after named argument")
                positional.append(p.parse_expr())
            if p.at_sym(","):
                p.next()
                continue
            break
    p.expect_sym(")")
    p.expect_end()

    args: list = []
    if kind.variadic:
        port = kind.inputs[0].name
        items = list(positional)
        for pname, expr in named:
            if pname != port:
                raise _LineError(Codes.UNKNOWN_PORT,
                                 f"kind {kind.name!r} has no input port {pname!r}")
            items.append(expr)
        if items:
            args.append((port, ArgList(tuple(items))))
    else:
        if len(positional) > len(kind.inputs):
            raise _LineError(
                Codes.SYNTAX,
                f"{kind.name!r} takes at most {len(kind.inputs)} arguments,"
                f" got {len(positional)} positional",
            )
        seen = set()
        for i, expr in enumerate(positional):
            args.append((kind.inputs[i].name, expr))
            seen.add(kind.inputs[i].name)
        for pname, expr in named:
            if kind.input_port(pname) is None:
                raise _LineError(Codes.UNKNOWN_PORT,
                                 f"kind {kind.name!r} has no input port {pname!r}")
            if pname in seen or any(n == pname for n, _ in args):
                raise _LineError(Codes.SYNTAX, f"duplicate argument {pname!r}")
            args.append((pname, expr))
    return Node(node_id, kind.name, tuple(args), line=line)


@dataclass
class ParseResult:
    """Outcome of :func:`parse_pcg`: a graph, or diagnostics explaining why not."""

    graph: Graph | None
    diagnostics: list

    @property
    def ok(self) -> bool:
        return self.graph is not None

    def errors(self) -> list:
        return [d for d in self.diagnostics if d.severity == Severity.ERROR]


def parse_pcg(source: str, validate_graph: bool = True) -> ParseResult:
    """Parse PCG text. Returns the validated graph or error diagnostics.

    All lines are consumed regardless of earlier failures so that one call
    reports every problem in the source.
    """
    params: list[ParamSpec] = []
    nodes: list[Node] = []
    output: str | None = None
    output_line = 0
    diags: list[Diagnostic] = []
    seen_params: set[str] = set()
    seen_nodes: set[str] = set()

    for lineno, raw in enumerate(source.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        try:
            toks = _lex_line(raw)
            p = _LineParser(toks)
            head = p.peek()
            if head.kind != "ident":
                raise _LineError(Codes.SYNTAX,
                                 f"expected statement, got {head.text!r}")
            if head.text == "input":
                p.next()
                spec = _parse_input_decl(p, lineno)
                if spec.name in seen_params or spec.name in seen_nodes:
                    diags.append(error(lineno, Codes.DUPLICATE_PARAM,
                                       f"duplicate name {spec.name!r}"))
                else:
                    seen_params.add(spec.name)
                    params.append(spec)
            elif head.text == "output":
                p.next()
                p.expect_sym("=")
                target = p.expect_ident("node id")
                p.expect_end()
                if output is not None:
                    diags.append(error(lineno, Codes.SYNTAX,
                                       "more than one output declaration"))
                else:
                    output, output_line = target, lineno
            else:
                node_id = p.next().text
                if node_id in RESERVED_WORDS:
                    raise _LineError(Codes.SYNTAX,
                                     f"{node_id!r} is a reserved word")
                p.expect_sym("=")
                node = _parse_call(p, node_id, lineno)
                if node.id in seen_nodes or node.id in seen_params:
                    diags.append(error(lineno, Codes.DUPLICATE_ID,
                                       f"duplicate name {node.id!r}"))
                else:
                    seen_nodes.add(node.id)
                    nodes.append(node)
        except _LineError as e:
            diags.append(error(lineno, e.code, e.message))

    if output is None:
        diags.append(error(len(source.splitlines()) or 1, Codes.MISSING_OUTPUT,
                           "no output declaration"))
        graph = None
    else:
        graph = Graph(tuple(params), tuple(nodes), output, output_line=output_line)

    if graph is not None and validate_graph:
        diags.extend(validate(graph))
    if any(d.severity == Severity.ERROR for d in diags):
        return ParseResult(None, diags)
    return ParseResult(graph, diags)
