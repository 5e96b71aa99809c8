"""Text format for dependencies: parsing and formatting.

One declaration per line, ``#`` starts a comment::

    (c:{Course}:{title,year})::c.title,c.year=>c
    (x:{Course}:{lang})-[y:{teaches}:{using}]->()::x.lang=>y.using
    ()-[t:{TRANSFER}:{price}]->()::t.price=>t

A node pattern binds one variable; an edge pattern may name its edge
variable or leave it anonymous.  At most one endpoint of an edge may bind a
variable, written on either side of the arrow: ``(c)<-[t:...]-()`` and
``()-[t:...]->(c)`` mean the same thing.  ``∅`` is accepted for ``{}`` and
``⇒`` for ``=>``.  Formatting always emits the compact canonical spelling,
so parse-format round-trips are stable.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import IO, Iterable

from .errors import ParseError
from .gofd import GnSchema, GoFd, gofd
from .pattern import (
    Direction,
    ObjectVar,
    Pattern,
    PropVar,
    Variable,
    attrs,
    edge_pattern,
    node_edge_pattern,
    node_pattern,
    render_var,
)

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_MULTI = ("::", "]->", "<-[", "-[", "]-", "=>")
_SINGLES = "(){}:,."


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    column: int


def _tokenize(text: str, line: int) -> list[_Token]:
    out: list[_Token] = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch == "⇒":  # fancy arrow, same as =>
            out.append(_Token("=>", ch, i + 1))
            i += 1
            continue
        if ch == "∅":  # empty-set sign, same as {}
            out.append(_Token("empty", ch, i + 1))
            i += 1
            continue
        for multi in _MULTI:
            if text.startswith(multi, i):
                out.append(_Token(multi, multi, i + 1))
                i += len(multi)
                break
        else:
            if ch in _SINGLES:
                out.append(_Token(ch, ch, i + 1))
                i += 1
            else:
                match = _IDENT.match(text, i)
                if not match:
                    raise ParseError(f"unexpected character {ch!r}", line, i + 1)
                out.append(_Token("ident", match.group(), i + 1))
                i = match.end()
    out.append(_Token("end", "", len(text) + 1))
    return out


@dataclass
class _Endpoint:
    name: str | None = None
    labels: tuple[str, ...] = ()
    keys: tuple[str, ...] = ()


class _Parser:
    def __init__(self, tokens: list[_Token], line: int):
        self.tokens = tokens
        self.line = line
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def take(self, kind: str) -> _Token:
        token = self.tokens[self.pos]
        if token.kind != kind:
            shown = token.text or "end of line"
            raise ParseError(f"unexpected {shown!r}", self.line, token.column,
                             expected=(kind,))
        self.pos += 1
        return token

    def accept(self, kind: str) -> _Token | None:
        if self.tokens[self.pos].kind == kind:
            return self.take(kind)
        return None

    # -- pieces -----------------------------------------------------------

    def id_set(self) -> tuple[str, ...]:
        if self.accept("empty"):
            return ()
        self.take("{")
        names: list[str] = []
        if self.peek().kind == "ident":
            names.append(self.take("ident").text)
            while self.accept(","):
                names.append(self.take("ident").text)
        self.take("}")
        return tuple(names)

    def both_sets(self) -> tuple[tuple[str, ...], tuple[str, ...]]:
        labels = self.id_set()
        self.take(":")
        keys = self.id_set()
        return labels, keys

    def endpoint(self) -> _Endpoint:
        self.take("(")
        if self.accept(")"):
            return _Endpoint()
        name = self.take("ident").text
        labels: tuple[str, ...] = ()
        keys: tuple[str, ...] = ()
        if self.accept(":"):
            labels, keys = self.both_sets()
        self.take(")")
        return _Endpoint(name, labels, keys)

    def edge_body(self) -> _Endpoint:
        name = None
        token = self.accept("ident")
        if token is not None:
            name = token.text
        labels: tuple[str, ...] = ()
        keys: tuple[str, ...] = ()
        if self.accept(":"):
            labels, keys = self.both_sets()
        return _Endpoint(name, labels, keys)

    def pattern(self) -> Pattern:
        first = self.endpoint()
        arrow = self.peek().kind
        if arrow not in ("-[", "<-["):
            if first.name is None:
                raise ParseError("a node pattern must bind a variable",
                                 self.line, self.peek().column)
            return node_pattern(first.name, first.labels, first.keys)
        self.take(arrow)
        edge = self.edge_body()
        self.take("]->" if arrow == "-[" else "]-")
        second = self.endpoint()
        source, target = (first, second) if arrow == "-[" else (second, first)
        if source.name is not None and target.name is not None:
            raise ParseError("at most one endpoint may bind a variable",
                             self.line, self.peek().column)
        if source.name is None and target.name is None:
            return edge_pattern(edge.name or "", edge.labels, edge.keys)
        node = source if source.name is not None else target
        direction = Direction.OUT if node is source else Direction.IN
        return node_edge_pattern(node.name, node.labels, node.keys,
                                 edge.name or "", edge.labels, edge.keys, direction)

    def var_list(self) -> list[tuple[Variable, int]]:
        out: list[tuple[Variable, int]] = []
        while True:
            token = self.take("ident")
            if self.accept("."):
                key = self.take("ident").text
                out.append((PropVar(token.text, key), token.column))
            else:
                out.append((ObjectVar(token.text), token.column))
            if not self.accept(","):
                return out

    def declaration(self) -> GoFd:
        scope = self.pattern()
        self.take("::")
        lhs = self.var_list()
        self.take("=>")
        rhs = self.var_list()
        self.take("end")
        universe = attrs(scope)
        for var, column in lhs + rhs:
            if var not in universe:
                raise ParseError(
                    f"variable {render_var(var)} is not bound by the pattern",
                    self.line, column)
        return gofd(scope, [v for v, _ in lhs], [v for v, _ in rhs])


def _strip_comment(raw: str) -> str:
    cut = raw.find("#")
    return raw if cut < 0 else raw[:cut]


def parse_pattern_text(text: str, line: int = 1) -> Pattern:
    """Parse a pattern on its own, as used for scope selection."""
    parser = _Parser(_tokenize(_strip_comment(text), line), line)
    pattern = parser.pattern()
    parser.take("end")
    return pattern


def parse_gofd(text: str) -> GoFd:
    """Parse exactly one dependency declaration."""
    deps = [dep for dep, _ in _declarations(text)]
    if len(deps) != 1:
        raise ParseError(f"expected exactly one dependency, found {len(deps)}")
    return deps[0]


def _declarations(text: str) -> list[tuple[GoFd, int]]:
    out: list[tuple[GoFd, int]] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        parser = _Parser(_tokenize(line, number), number)
        out.append((parser.declaration(), number))
    return out


@dataclass
class SchemaDocument:
    schema: GnSchema
    warnings: list[str] = field(default_factory=list)


def parse_schema(text: str) -> SchemaDocument:
    """Parse a schema file; duplicates are dropped with a warning."""
    doc = SchemaDocument(GnSchema())
    for dep, number in _declarations(text):
        if not doc.schema.add(dep):
            doc.warnings.append(
                f"line {number}: duplicate dependency ignored: {dep.render()}")
    return doc


def format_gofd(dep: GoFd) -> str:
    return dep.render()


def format_schema(deps: Iterable[GoFd]) -> str:
    return "".join(f"{dep.render()}\n" for dep in deps)


def save_schema(deps: Iterable[GoFd], target: str | IO[str]) -> None:
    text = format_schema(deps)
    if hasattr(target, "write"):
        target.write(text)  # type: ignore[union-attr]
    else:
        with open(target, "w", encoding="utf-8") as fh:
            fh.write(text)


def load_schema(source: str | IO[str]) -> SchemaDocument:
    if hasattr(source, "read"):
        text = source.read()  # type: ignore[union-attr]
    else:
        with open(source, "r", encoding="utf-8") as fh:
            text = fh.read()
    return parse_schema(text)
