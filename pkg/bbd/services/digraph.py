from enum import IntEnum
from typing import Iterable, Iterator, NamedTuple

from ..errors import DigraphError

# Adjacency rows are single ints used as bit vectors over opposite-side indices.
MAX_HALF_ORDER = 64


class Side(IntEnum):
    X = 0
    Y = 1

    @property
    def other(self) -> "Side":
        return Side.Y if self is Side.X else Side.X


class VertexId(NamedTuple):
    side: Side
    index: int

    def __str__(self) -> str:
        return f"{self.side.name}{self.index}"

    @classmethod
    def parse(cls, token: str) -> "VertexId":
        """Read `X3` / `y0` style names (case-insensitive)."""
        text = token.strip()
        if len(text) < 2 or text[0].upper() not in ("X", "Y") or not text[1:].isdigit():
            raise DigraphError(f"invalid vertex name {token!r}")
        return cls(Side[text[0].upper()], int(text[1:]))


def bits(mask: int) -> Iterator[int]:
    """Indices of set bits, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


class BipartiteDigraph:
    """Balanced bipartite digraph with partite sets X and Y of size `a`.

    Analysis functions treat an instance as immutable; `add_arc` and
    `remove_arc` need exclusive access.
    """

    __slots__ = ("a", "_out", "_in")

    def __init__(self, a: int) -> None:
        if isinstance(a, bool) or not isinstance(a, int) or a < 1:
            raise DigraphError(f"half-order a must be a positive integer, got {a!r}")
        if a > MAX_HALF_ORDER:
            raise DigraphError(f"half-order a={a} exceeds supported maximum {MAX_HALF_ORDER}")
        self.a = a
        self._out: tuple[list[int], list[int]] = ([0] * a, [0] * a)
        self._in: tuple[list[int], list[int]] = ([0] * a, [0] * a)

    @classmethod
    def from_arcs(cls, a: int, arcs: Iterable[tuple[VertexId, VertexId]]) -> "BipartiteDigraph":
        d = cls(a)
        for u, v in arcs:
            d.add_arc(u, v)
        return d

    @property
    def order(self) -> int:
        return 2 * self.a

    def _check(self, v: VertexId | tuple) -> VertexId:
        try:
            side, index = v
            side = Side(side)
        except (TypeError, ValueError):
            raise DigraphError(f"not a vertex: {v!r}") from None
        if isinstance(index, bool) or not isinstance(index, int) or not 0 <= index < self.a:
            raise DigraphError(f"vertex index {index!r} out of range for a={self.a}")
        return VertexId(side, index)

    # Mutation

    def add_arc(self, u: VertexId, v: VertexId) -> bool:
        """Insert arc u->v. Returns False when the arc was already present."""
        u, v = self._check(u), self._check(v)
        if u.side == v.side:
            raise DigraphError(f"arc {u} -> {v} joins two vertices of the same side")
        bit = 1 << v.index
        row = self._out[u.side]
        if row[u.index] & bit:
            return False
        row[u.index] |= bit
        self._in[v.side][v.index] |= 1 << u.index
        return True

    def remove_arc(self, u: VertexId, v: VertexId) -> bool:
        u, v = self._check(u), self._check(v)
        if u.side == v.side or not self._out[u.side][u.index] >> v.index & 1:
            return False
        self._out[u.side][u.index] &= ~(1 << v.index)
        self._in[v.side][v.index] &= ~(1 << u.index)
        return True

    def copy(self) -> "BipartiteDigraph":
        d = BipartiteDigraph(self.a)
        d._out = (list(self._out[0]), list(self._out[1]))
        d._in = (list(self._in[0]), list(self._in[1]))
        return d

    # Queries

    def has_arc(self, u: VertexId, v: VertexId) -> bool:
        u, v = self._check(u), self._check(v)
        return u.side != v.side and bool(self._out[u.side][u.index] >> v.index & 1)

    def adjacent(self, u: VertexId, v: VertexId) -> bool:
        return self.has_arc(u, v) or self.has_arc(v, u)

    def out_mask(self, v: VertexId) -> int:
        v = self._check(v)
        return self._out[v.side][v.index]

    def in_mask(self, v: VertexId) -> int:
        v = self._check(v)
        return self._in[v.side][v.index]

    def out_neighbors(self, v: VertexId) -> frozenset[VertexId]:
        v = self._check(v)
        other = v.side.other
        return frozenset(VertexId(other, j) for j in bits(self._out[v.side][v.index]))

    def in_neighbors(self, v: VertexId) -> frozenset[VertexId]:
        v = self._check(v)
        other = v.side.other
        return frozenset(VertexId(other, j) for j in bits(self._in[v.side][v.index]))

    def underlying_neighbors(self, v: VertexId) -> frozenset[VertexId]:
        v = self._check(v)
        other = v.side.other
        mask = self._out[v.side][v.index] | self._in[v.side][v.index]
        return frozenset(VertexId(other, j) for j in bits(mask))

    def out_neighbors_of_set(self, vertices: Iterable[VertexId]) -> frozenset[VertexId]:
        """N+(S) for a set S lying on one side."""
        members = [self._check(v) for v in vertices]
        if not members:
            return frozenset()
        side = members[0].side
        if any(v.side != side for v in members):
            raise DigraphError("vertex set mixes X and Y vertices")
        mask = 0
        for v in members:
            mask |= self._out[side][v.index]
        return frozenset(VertexId(side.other, j) for j in bits(mask))

    def out_degree(self, v: VertexId) -> int:
        return popcount(self.out_mask(v))

    def in_degree(self, v: VertexId) -> int:
        return popcount(self.in_mask(v))

    def degree(self, v: VertexId) -> int:
        v = self._check(v)
        return popcount(self._out[v.side][v.index]) + popcount(self._in[v.side][v.index])

    def degree_in_set(self, v: VertexId, subset: Iterable[VertexId]) -> int:
        """d(v, A) = d+(v, A) + d-(v, A)."""
        v = self._check(v)
        mask = 0
        for w in subset:
            w = self._check(w)
            if w.side != v.side:
                mask |= 1 << w.index
        return popcount(self._out[v.side][v.index] & mask) + popcount(self._in[v.side][v.index] & mask)

    # Enumeration

    def vertices(self) -> list[VertexId]:
        return [VertexId(side, i) for side in Side for i in range(self.a)]

    def arcs(self) -> list[tuple[VertexId, VertexId]]:
        """All arcs in canonical order: X tails, then Y tails, by tail then head index."""
        out = []
        for side in Side:
            for i, row in enumerate(self._out[side]):
                out.extend((VertexId(side, i), VertexId(side.other, j)) for j in bits(row))
        return out

    @property
    def arc_count(self) -> int:
        return sum(popcount(row) for rows in self._out for row in rows)

    # Flat indexing used by the graph algorithms: X i -> i, Y j -> a + j.

    def flat(self, v: VertexId) -> int:
        return v[0] * self.a + v[1]

    def vertex_at(self, n: int) -> VertexId:
        return VertexId(Side(n // self.a), n % self.a)

    def flat_successors(self) -> list[list[int]]:
        a = self.a
        succ = []
        for side in Side:
            offset = 0 if side is Side.Y else a
            for row in self._out[side]:
                succ.append([offset + j for j in bits(row)])
        return succ

    def degree_signature(self) -> tuple[tuple[tuple[int, int], ...], tuple[tuple[int, int], ...]]:
        """Sorted (out, in) degree pairs per side; invariant under relabeling."""
        return tuple(
            tuple(sorted((popcount(self._out[side][i]), popcount(self._in[side][i])) for i in range(self.a)))
            for side in Side
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BipartiteDigraph):
            return NotImplemented
        return self.a == other.a and self._out == other._out

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"BipartiteDigraph(a={self.a}, arcs={self.arc_count})"


def new_digraph(a: int) -> BipartiteDigraph:
    return BipartiteDigraph(a)
