from dataclasses import dataclass
from typing import Iterable

from ..errors import DigraphError
from .connectivity import is_strongly_connected
from .digraph import BipartiteDigraph, VertexId


def render(vertices: Iterable[VertexId]) -> str:
    return " ".join(str(v) for v in vertices)


@dataclass(frozen=True)
class Cycle:
    """v1 ... vm with the closing arc vm -> v1 implied."""

    vertices: tuple[VertexId, ...]

    @classmethod
    def parse(cls, text: str) -> "Cycle":
        return cls(tuple(VertexId.parse(token) for token in text.split()))

    def __len__(self) -> int:
        return len(self.vertices)

    def __str__(self) -> str:
        return render(self.vertices)

    def arcs(self) -> list[tuple[VertexId, VertexId]]:
        vs = self.vertices
        return [(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]


@dataclass(frozen=True)
class Bypass:
    path: tuple[VertexId, ...]
    host: Cycle

    def __str__(self) -> str:
        return render(self.path)


def _in_range(d: BipartiteDigraph, vertices: Iterable[VertexId]) -> bool:
    try:
        for v in vertices:
            d._check(v)
    except DigraphError:
        return False
    return True


def verify_cycle(d: BipartiteDigraph, cycle: Cycle) -> bool:
    vs = cycle.vertices
    m = len(vs)
    if m < 2 or m % 2 or len(set(vs)) != m or not _in_range(d, vs):
        return False
    return all(u.side != v.side and d.has_arc(u, v) for u, v in cycle.arcs())


def verify_bypass(d: BipartiteDigraph, bypass: Bypass) -> bool:
    path = bypass.path
    if not verify_cycle(d, bypass.host) or len(path) < 3 or not _in_range(d, path):
        return False
    if len(set(path)) != len(path):
        return False
    on_host = set(bypass.host.vertices)
    if path[0] not in on_host or path[-1] not in on_host:
        return False
    if any(v in on_host for v in path[1:-1]):
        return False
    return all(u.side != v.side and d.has_arc(u, v) for u, v in zip(path, path[1:]))


def is_directed_cycle(d: BipartiteDigraph) -> bool:
    """True when D is one directed cycle through all 2a vertices."""
    if any(d.out_degree(v) != 1 or d.in_degree(v) != 1 for v in d.vertices()):
        return False
    return is_strongly_connected(d)
