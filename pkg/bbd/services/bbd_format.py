"""The bbd/1 text format.

    # optional comment lines
    a=4
    X0 -> Y0
    Y0 -> X1

Arcs are written in canonical order (X tails, then Y tails, each by tail
index then head index). Output is UTF-8 with LF line endings.
"""

import re
from typing import Iterator

from ..errors import DigraphError, ParseError
from .digraph import BipartiteDigraph, Side, VertexId

_HEADER = re.compile(r"^a\s*=\s*(\d+)$")
_ARC = re.compile(r"^([XxYy]\d+)\s*->\s*([XxYy]\d+)$")


def serialize(d: BipartiteDigraph) -> str:
    lines = [f"a={d.a}"]
    lines.extend(f"{u} -> {v}" for u, v in d.arcs())
    return "\n".join(lines) + "\n"


def _content_lines(text: str) -> Iterator[tuple[int, str]]:
    for number, raw in enumerate(text.split("\n"), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield number, line


def _parse_lines(lines: list[tuple[int, str]]) -> BipartiteDigraph:
    if not lines:
        raise ParseError("missing header line `a=<integer>`")
    number, header = lines[0]
    match = _HEADER.match(header)
    if not match:
        raise ParseError(f"malformed header {header!r}, expected `a=<integer>`", number)
    try:
        d = BipartiteDigraph(int(match.group(1)))
    except DigraphError as exc:
        raise ParseError(str(exc), number) from None

    for number, line in lines[1:]:
        arc = _ARC.match(line)
        if not arc:
            raise ParseError(f"malformed arc line {line!r}, expected `X<i> -> Y<j>`", number)
        u, v = VertexId.parse(arc.group(1)), VertexId.parse(arc.group(2))
        if u.side == v.side:
            raise ParseError(f"arc {u} -> {v} joins two vertices of side {u.side.name}", number)
        for w in (u, v):
            if w.index >= d.a:
                raise ParseError(f"vertex {w} out of range for a={d.a}", number)
        if not d.add_arc(u, v):
            raise ParseError(f"duplicate arc {u} -> {v}", number)
    return d


def parse(text: str) -> BipartiteDigraph:
    return _parse_lines(list(_content_lines(text)))


def parse_many(text: str) -> list[BipartiteDigraph]:
    """Parse a stream of bbd/1 documents; each `a=` header opens a new one."""
    documents: list[list[tuple[int, str]]] = []
    for number, line in _content_lines(text):
        if _HEADER.match(line) or not documents:
            documents.append([])
        documents[-1].append((number, line))
    return [_parse_lines(doc) for doc in documents]


def serialize_many(digraphs: list[BipartiteDigraph]) -> str:
    return "\n".join(serialize(d) for d in digraphs)


def to_dot(d: BipartiteDigraph, name: str = "D") -> str:
    """Directed DOT drawing with X and Y in two ranks."""
    lines = [f"digraph {name} {{", "  rankdir=LR;"]
    for side in Side:
        members = " ".join(f'"{side.name}{i}"' for i in range(d.a))
        lines.append(f"  {{ rank=same; {members}; }}")
    lines.extend(f'  "{u}" -> "{v}";' for u, v in d.arcs())
    lines.append("}")
    return "\n".join(lines) + "\n"
