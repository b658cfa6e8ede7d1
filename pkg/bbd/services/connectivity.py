from dataclasses import dataclass

import structlog

from ..errors import DigraphError
from .digraph import BipartiteDigraph, VertexId, bits

logger = structlog.get_logger("bbd")


@dataclass(frozen=True)
class StrongConnectivity:
    strong: bool
    # Tarjan emission order: every component appears before the components that reach it
    components: tuple[tuple[VertexId, ...], ...]
    # (u, v) such that no directed (u, v)-path exists
    unreachable: tuple[VertexId, VertexId] | None


@dataclass(frozen=True)
class TwoConnectivity:
    two_connected: bool
    connected: bool
    cut_vertex: VertexId | None
    # V(D) = E | F | {cut_vertex}, no UG edge between E and F
    separation: tuple[frozenset[VertexId], frozenset[VertexId]] | None


def _tarjan(succ: list[list[int]]) -> list[list[int]]:
    n = len(succ)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    components: list[list[int]] = []
    counter = 0

    for root in range(n):
        if index[root] != -1:
            continue
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        work = [(root, 0)]
        while work:
            v, i = work[-1]
            if i < len(succ[v]):
                work[-1] = (v, i + 1)
                w = succ[v][i]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                component = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    component.append(w)
                    if w == v:
                        break
                components.append(sorted(component))
    return components


def strong_components(d: BipartiteDigraph) -> StrongConnectivity:
    components = _tarjan(d.flat_successors())
    named = tuple(tuple(d.vertex_at(n) for n in comp) for comp in components)
    if len(components) == 1:
        return StrongConnectivity(strong=True, components=named, unreachable=None)
    # The first emitted component is a sink: nothing outside it is reachable from it.
    sink = components[0]
    outside = min(n for comp in components[1:] for n in comp)
    witness = (d.vertex_at(sink[0]), d.vertex_at(outside))
    return StrongConnectivity(strong=False, components=named, unreachable=witness)


def is_strongly_connected(d: BipartiteDigraph) -> bool:
    return len(_tarjan(d.flat_successors())) == 1


def _underlying_adjacency(d: BipartiteDigraph) -> list[list[int]]:
    adj = []
    for v in d.vertices():
        offset = 0 if v.side else d.a
        adj.append([offset + j for j in bits(d.out_mask(v) | d.in_mask(v))])
    return adj


def _articulation_points(adj: list[list[int]]) -> tuple[list[int], int]:
    """Cut vertices (ascending) and the number of connected components."""
    n = len(adj)
    disc = [-1] * n
    low = [0] * n
    parent = [-1] * n
    is_cut = [False] * n
    clock = 0
    pieces = 0

    for root in range(n):
        if disc[root] != -1:
            continue
        pieces += 1
        disc[root] = low[root] = clock
        clock += 1
        children = 0
        stack = [(root, iter(adj[root]))]
        while stack:
            v, neighbours = stack[-1]
            w = next(neighbours, None)
            if w is None:
                stack.pop()
                if stack:
                    p = stack[-1][0]
                    low[p] = min(low[p], low[v])
                    if parent[p] != -1 and low[v] >= disc[p]:
                        is_cut[p] = True
                continue
            if disc[w] == -1:
                parent[w] = v
                disc[w] = low[w] = clock
                clock += 1
                if v == root:
                    children += 1
                stack.append((w, iter(adj[w])))
            elif w != parent[v]:
                low[v] = min(low[v], disc[w])
        if children > 1:
            is_cut[root] = True

    return [v for v in range(n) if is_cut[v]], pieces


def _reach(adj: list[list[int]], start: int, blocked: int | None) -> set[int]:
    seen = {start}
    frontier = [start]
    while frontier:
        v = frontier.pop()
        for w in adj[v]:
            if w != blocked and w not in seen:
                seen.add(w)
                frontier.append(w)
    return seen


def underlying_is_two_connected(d: BipartiteDigraph) -> TwoConnectivity:
    """2-connectivity of UG(D), with a separating vertex as witness."""
    if d.order < 3:
        raise DigraphError(f"2-connectivity needs order at least 3, got {d.order}")
    adj = _underlying_adjacency(d)
    cuts, pieces = _articulation_points(adj)
    everything = set(range(d.order))

    if pieces > 1:
        first = _reach(adj, 0, None)
        separation = (
            frozenset(d.vertex_at(n) for n in first),
            frozenset(d.vertex_at(n) for n in everything - first),
        )
        return TwoConnectivity(two_connected=False, connected=False, cut_vertex=None, separation=separation)

    if not cuts:
        return TwoConnectivity(two_connected=True, connected=True, cut_vertex=None, separation=None)

    u = cuts[0]
    start = 0 if u != 0 else 1
    side_e = _reach(adj, start, u) - {u}
    side_f = everything - side_e - {u}
    return TwoConnectivity(
        two_connected=False,
        connected=True,
        cut_vertex=d.vertex_at(u),
        separation=(frozenset(d.vertex_at(n) for n in side_e), frozenset(d.vertex_at(n) for n in side_f)),
    )
