"""Input file grammar and serializers.

Three one-document dialects share a tiny lexer, each announced by its
header line:

``gm-covering``  level 1 as circuit lengths, later levels as words::

    gm-covering
    level 1: lengths = (2, 3)
    level 2: words = ((1, 2, 1), (1, 2, 2))

``covering``  explicit vertices, edges and downward maps per level::

    covering
    level 1: vertices = (a, b); edges = ((a, b), (b, a)); map = ((a -> v0), (b -> v0))

``bratteli``  per level, vertices plus (source, range, rank) edges::

    bratteli
    level 1: vertices = (u); edges = ((v0, u, 1), (v0, u, 2))

``#`` starts a comment; whitespace is free; statements may span lines
inside parentheses.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .bratteli import OrderedBratteli
from .covering import Covering, GraphHom
from .digraph import DiGraph, singleton_graph
from .errors import ParseError
from .gm import GmCovering, build_gm_covering

_TOKEN_RE = re.compile(r"->|[(),:;=]|[A-Za-z0-9_.]+(?:-[A-Za-z0-9_.]+)*")


@dataclass(frozen=True)
class _Token:
    text: str
    line: int
    col: int


def _lex(text: str) -> list[_Token]:
    tokens = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        pos = 0
        while pos < len(line):
            if line[pos].isspace():
                pos += 1
                continue
            m = _TOKEN_RE.match(line, pos)
            if not m:
                raise ParseError(
                    f"unexpected character {line[pos]!r}", lineno, pos + 1
                )
            tokens.append(_Token(m.group(), lineno, pos + 1))
            pos = m.end()
    return tokens


class _Parser:
    def __init__(self, tokens: Sequence[_Token]):
        self.tokens = list(tokens)
        self.pos = 0

    def peek(self) -> _Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self, expected: str = "") -> _Token:
        tok = self.peek()
        if tok is None:
            last = self.tokens[-1] if self.tokens else _Token("", 1, 1)
            raise ParseError("unexpected end of input", last.line, last.col, expected)
        self.pos += 1
        return tok

    def expect(self, text: str) -> _Token:
        tok = self.next(expected=repr(text))
        if tok.text != text:
            raise ParseError(
                f"found {tok.text!r}", tok.line, tok.col, expected=repr(text)
            )
        return tok

    def parse_value(self):
        tok = self.next(expected="a name or '('")
        if tok.text == "(":
            items = []
            if self.peek() and self.peek().text == ")":
                self.next()
                return tuple(items)
            while True:
                items.append(self.parse_item())
                tok = self.next(expected="',' or ')'")
                if tok.text == ")":
                    return tuple(items)
                if tok.text != ",":
                    raise ParseError(
                        f"found {tok.text!r}", tok.line, tok.col, expected="',' or ')'"
                    )
        if tok.text in "(),:;=" or tok.text == "->":
            raise ParseError(
                f"found {tok.text!r}", tok.line, tok.col, expected="a name or '('"
            )
        return tok.text

    def parse_item(self):
        value = self.parse_value()
        if self.peek() and self.peek().text == "->":
            self.next()
            target = self.parse_value()
            return (value, "->", target)
        return value


@dataclass(frozen=True)
class _LevelStmt:
    level: int
    fields: dict
    line: int


def _parse_document(text: str) -> tuple[str, list[_LevelStmt]]:
    tokens = _lex(text)
    if not tokens:
        raise ParseError("empty input", 1, 1, expected="a header line")
    parser = _Parser(tokens)
    header = parser.next(expected="a header")
    if header.text not in ("gm-covering", "covering", "bratteli"):
        raise ParseError(
            f"unknown header {header.text!r}",
            header.line,
            header.col,
            expected="gm-covering, covering, or bratteli",
        )
    statements = []
    while parser.peek() is not None:
        kw = parser.expect("level")
        num = parser.next(expected="a level number")
        if not num.text.isdigit():
            raise ParseError(
                f"found {num.text!r}", num.line, num.col, expected="a level number"
            )
        parser.expect(":")
        fields = {}
        while True:
            key = parser.next(expected="a field name")
            parser.expect("=")
            fields[key.text] = parser.parse_value()
            nxt = parser.peek()
            if nxt is not None and nxt.text == ";":
                parser.next()
                continue
            break
        statements.append(_LevelStmt(int(num.text), fields, kw.line))
    return header.text, statements


def _require_contiguous(statements: list[_LevelStmt]) -> None:
    for k, stmt in enumerate(statements, start=1):
        if stmt.level != k:
            raise ParseError(
                f"expected level {k}, found level {stmt.level}", stmt.line, 1
            )


def _as_int(value, stmt: _LevelStmt, what: str) -> int:
    if not isinstance(value, str) or not value.isdigit():
        raise ParseError(f"{what} must be a number", stmt.line, 1)
    return int(value)


def _parse_gm(statements: list[_LevelStmt]) -> GmCovering:
    if not statements:
        raise ParseError("a gm-covering needs at least level 1", 1, 1)
    _require_contiguous(statements)
    first = statements[0]
    if "lengths" not in first.fields:
        raise ParseError("level 1 must declare lengths", first.line, 1)
    lengths = tuple(
        _as_int(v, first, "a circuit length") for v in first.fields["lengths"]
    )
    words_by_level = []
    for stmt in statements[1:]:
        if "words" not in stmt.fields:
            raise ParseError(
                f"level {stmt.level} must declare words", stmt.line, 1
            )
        words = []
        for w in stmt.fields["words"]:
            if isinstance(w, str):
                raise ParseError(
                    f"level {stmt.level}: words must be parenthesized lists",
                    stmt.line,
                    1,
                )
            words.append(tuple(_as_int(t, stmt, "a word letter") for t in w))
        words_by_level.append(tuple(words))
    return build_gm_covering(lengths, words_by_level)


def _parse_generic(statements: list[_LevelStmt]) -> Covering:
    _require_contiguous(statements)
    graphs = [singleton_graph()]
    homs = []
    for stmt in statements:
        missing = {"vertices", "edges", "map"} - set(stmt.fields)
        if missing:
            raise ParseError(
                f"level {stmt.level} is missing {sorted(missing)}", stmt.line, 1
            )
        vertices = tuple(stmt.fields["vertices"])
        edges = []
        for e in stmt.fields["edges"]:
            if not isinstance(e, tuple) or len(e) != 2:
                raise ParseError(
                    f"level {stmt.level}: each edge must be a pair", stmt.line, 1
                )
            edges.append((e[0], e[1]))
        mapping = {}
        for entry in stmt.fields["map"]:
            # `(a -> v0)` arrives as a singleton list around the arrow triple
            if isinstance(entry, tuple) and len(entry) == 1:
                entry = entry[0]
            if not (isinstance(entry, tuple) and len(entry) == 3 and entry[1] == "->"):
                raise ParseError(
                    f"level {stmt.level}: map entries look like (u -> u')",
                    stmt.line,
                    1,
                )
            mapping[entry[0]] = entry[2]
        graph = DiGraph(vertices, edges)
        homs.append(GraphHom(graph, graphs[-1], mapping))
        graphs.append(graph)
    return Covering(graphs, homs)


def _parse_bratteli(statements: list[_LevelStmt]) -> OrderedBratteli:
    _require_contiguous(statements)
    levels: list[tuple[str, ...]] = [("v0",)]
    fibers = []
    for stmt in statements:
        missing = {"vertices", "edges"} - set(stmt.fields)
        if missing:
            raise ParseError(
                f"level {stmt.level} is missing {sorted(missing)}", stmt.line, 1
            )
        vertices = tuple(stmt.fields["vertices"])
        ranked: dict[str, dict[int, str]] = {v: {} for v in vertices}
        for e in stmt.fields["edges"]:
            if not isinstance(e, tuple) or len(e) != 3:
                raise ParseError(
                    f"level {stmt.level}: each edge is (source, range, rank)",
                    stmt.line,
                    1,
                )
            src, rng, rank = e[0], e[1], _as_int(e[2], stmt, "an edge rank")
            if rng not in ranked:
                raise ParseError(
                    f"level {stmt.level}: edge into undeclared vertex {rng!r}",
                    stmt.line,
                    1,
                )
            if rank in ranked[rng]:
                raise ParseError(
                    f"level {stmt.level}: duplicate rank {rank} into {rng!r}",
                    stmt.line,
                    1,
                )
            ranked[rng][rank] = src
        fiber = {}
        for v in vertices:
            ranks = sorted(ranked[v])
            if ranks != list(range(1, len(ranks) + 1)):
                raise ParseError(
                    f"level {stmt.level}: ranks into {v!r} must be 1..{len(ranks)}",
                    stmt.line,
                    1,
                )
            fiber[v] = tuple(ranked[v][k] for k in ranks)
        levels.append(vertices)
        fibers.append(fiber)
    return OrderedBratteli(levels, fibers)


def parse_text(text: str):
    """Parse any dialect, returning a GmCovering, Covering, or OrderedBratteli."""
    header, statements = _parse_document(text)
    if header == "gm-covering":
        return _parse_gm(statements)
    if header == "covering":
        return _parse_generic(statements)
    return _parse_bratteli(statements)


def parse_covering_text(text: str) -> Covering | GmCovering:
    got = parse_text(text)
    if isinstance(got, OrderedBratteli):
        raise ParseError("expected a covering, found a bratteli diagram", 1, 1)
    return got


def parse_file(path: str | Path):
    return parse_text(Path(path).read_text())


# -- serializers -------------------------------------------------------------------


def gm_to_text(g: GmCovering) -> str:
    lines = ["gm-covering"]
    lengths = ", ".join(str(length) for length in g.level(1).lengths)
    lines.append(f"level 1: lengths = ({lengths})")
    for n in range(2, g.depth + 1):
        words = ", ".join(
            "(" + ", ".join(str(t) for t in g.word(n, i).letters) + ")"
            for i in range(1, g.r(n) + 1)
        )
        lines.append(f"level {n}: words = ({words})")
    return "\n".join(lines) + "\n"


def covering_to_text(c: Covering) -> str:
    lines = ["covering"]
    for n in range(1, c.depth + 1):
        g = c.graph(n)
        vertices = ", ".join(g.vertices)
        edges = ", ".join(f"({u}, {v})" for u, v in g.sorted_edges())
        hom = c.hom(n)
        mapping = ", ".join(f"({v} -> {hom(v)})" for v in g.vertices)
        lines.append(
            f"level {n}: vertices = ({vertices}); edges = ({edges}); "
            f"map = ({mapping})"
        )
    return "\n".join(lines) + "\n"


def bratteli_to_text(d: OrderedBratteli) -> str:
    lines = ["bratteli"]
    for n in range(1, d.depth + 1):
        vertices = ", ".join(d.level(n))
        edges = ", ".join(
            f"({src}, {v}, {k})"
            for v in d.level(n)
            for k, src in enumerate(d.fiber(n, v), start=1)
        )
        lines.append(f"level {n}: vertices = ({vertices}); edges = ({edges})")
    return "\n".join(lines) + "\n"
