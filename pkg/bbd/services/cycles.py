"""Exact cycle searches at desk scale (2a <= 28).

Hamiltonicity uses a subset DP that advances one X-Y step at a time, so a
state is a pair (X used, Y used) plus the set of possible last Y vertices.
When the DP would keep more than `settings.dp_state_limit` states, the
search is handed to a pruned branch-and-bound DFS, which is also exact.
"""

from collections import deque
from typing import Iterator, List, Optional

import structlog

from ..config import settings
from ..errors import CapExceededError, InvalidCycleError, ParameterError
from .digraph import BipartiteDigraph, Side, VertexId, bits
from .walks import Bypass, Cycle, verify_cycle

logger = structlog.get_logger("bbd")

METHODS = ("auto", "dp", "branch_and_bound")


class _StateLimitExceeded(Exception):
    pass


def _require_desk_scale(d: BipartiteDigraph) -> None:
    cap = settings.solver_max_half_order
    if d.a > cap:
        raise CapExceededError(f"cap exceeded: exact cycle search supports 2a <= {2 * cap}, got 2a={d.order}")


def _flat_masks(d: BipartiteDigraph) -> tuple[List[int], List[int]]:
    """Successor and predecessor masks over flat ids (X i -> i, Y j -> a+j)."""
    a = d.a
    succ, pred = [], []
    for v in d.vertices():
        shift = a if v.side is Side.X else 0
        succ.append(d.out_mask(v) << shift)
        pred.append(d.in_mask(v) << shift)
    return succ, pred


def _cycle_from_flat(d: BipartiteDigraph, path: List[int]) -> Cycle:
    return Cycle(tuple(d.vertex_at(n) for n in path))


def _hamiltonian_dp(d: BipartiteDigraph, state_limit: float) -> Optional[List[VertexId]]:
    a = d.a
    out_x = [d.out_mask((Side.X, i)) for i in range(a)]
    out_y = [d.out_mask((Side.Y, j)) for j in range(a)]
    in_x = [d.in_mask((Side.X, i)) for i in range(a)]

    # layers[t-1]: (X used, Y used) -> mask of possible last Y, for paths X0 y x y ... of t X-Y steps
    first: dict[tuple[int, int], int] = {}
    for j in bits(out_x[0]):
        first[(1, 1 << j)] = 1 << j
    layers = [first]
    kept = len(first)

    for _ in range(2, a + 1):
        layer = layers[-1]
        nxt: dict[tuple[int, int], int] = {}
        for (xm, ym), last in layer.items():
            reach = 0
            for y in bits(last):
                reach |= out_y[y]
            for x in bits(reach & ~xm):
                options = out_x[x] & ~ym
                if not options:
                    continue
                nxm = xm | 1 << x
                for y2 in bits(options):
                    key = (nxm, ym | 1 << y2)
                    nxt[key] = nxt.get(key, 0) | 1 << y2
        kept += len(nxt)
        if kept > state_limit:
            raise _StateLimitExceeded
        if not nxt:
            return None
        layers.append(nxt)

    full = (1 << a) - 1
    closing = layers[-1].get((full, full), 0) & in_x[0]
    if not closing:
        return None

    y = next(bits(closing))
    xm = ym = full
    reverse = []
    for t in range(a, 1, -1):
        reverse.append(VertexId(Side.Y, y))
        previous = layers[t - 2]
        for x in bits(xm & ~1):
            if not out_x[x] >> y & 1:
                continue
            before = previous.get((xm ^ 1 << x, ym ^ 1 << y), 0) & in_x[x]
            if before:
                reverse.append(VertexId(Side.X, x))
                xm ^= 1 << x
                ym ^= 1 << y
                y = next(bits(before))
                break
    reverse.append(VertexId(Side.Y, y))
    reverse.append(VertexId(Side.X, 0))
    return reverse[::-1]


def _hamiltonian_branch_and_bound(d: BipartiteDigraph) -> Optional[List[int]]:
    n = d.order
    succ, pred = _flat_masks(d)
    if any(not s for s in succ) or any(not p for p in pred):
        return None
    full = (1 << n) - 1
    path = [0]

    def viable(visited: int, current: int) -> bool:
        unvisited = full & ~visited
        entry = unvisited | 1 << current
        leave = unvisited | 1
        for w in bits(unvisited):
            if not pred[w] & entry or not succ[w] & leave:
                return False
        return True

    def extend(v: int, visited: int) -> bool:
        if visited == full:
            return bool(succ[v] & 1)
        for w in bits(succ[v] & ~visited):
            reached = visited | 1 << w
            if not viable(reached, w):
                continue
            path.append(w)
            if extend(w, reached):
                return True
            path.pop()
        return False

    return path if extend(0, 1) else None


def hamiltonian_cycle(d: BipartiteDigraph, method: str = "auto") -> Optional[Cycle]:
    """A Hamiltonian cycle starting at X0, or None when D has none."""
    if method not in METHODS:
        raise ParameterError(f"unknown method {method!r}; choose from {', '.join(METHODS)}")
    _require_desk_scale(d)

    if method == "branch_and_bound":
        path = _hamiltonian_branch_and_bound(d)
        return _cycle_from_flat(d, path) if path is not None else None

    limit = float("inf") if method == "dp" else settings.dp_state_limit
    try:
        found = _hamiltonian_dp(d, limit)
    except _StateLimitExceeded:
        logger.info("hamiltonian_dp_fallback", a=d.a, state_limit=limit)
        path = _hamiltonian_branch_and_bound(d)
        return _cycle_from_flat(d, path) if path is not None else None
    return Cycle(tuple(found)) if found is not None else None


def _cycles_from(start: int, succ: List[int], pred: List[int], min_length: int, max_length: int) -> Iterator[List[int]]:
    """Simple cycles whose smallest flat id is `start`, in DFS order."""
    allowed = ((1 << len(succ)) - 1) & ~((1 << (start + 1)) - 1)
    if not succ[start] & allowed or not pred[start] & allowed:
        return
    path = [start]

    def walk(v: int, free: int) -> Iterator[List[int]]:
        length = len(path)
        if length >= min_length and length % 2 == 0 and succ[v] >> start & 1:
            yield list(path)
        if length >= max_length:
            return
        options = succ[v] & free
        if length == max_length - 1:
            options &= pred[start]
        for w in bits(options):
            path.append(w)
            yield from walk(w, free & ~(1 << w))
            path.pop()

    yield from walk(start, allowed)


def _search_cycles(d: BipartiteDigraph, min_length: int, max_length: int) -> Iterator[List[int]]:
    """Simple cycles by canonical start (the smallest flat id on the cycle)."""
    succ, pred = _flat_masks(d)
    for start in range(d.order):
        yield from _cycles_from(start, succ, pred, min_length, max_length)


def _side_counts_ok(a: int, free: int, need_x: int, need_y: int) -> bool:
    x_mask = (1 << a) - 1
    return bin(free & x_mask).count("1") >= need_x and bin(free >> a).count("1") >= need_y


def _cycle_of_exact_length(d: BipartiteDigraph, m: int) -> Optional[List[int]]:
    a, n = d.a, d.order
    succ, pred = _flat_masks(d)

    for start in range(n):
        allowed = ((1 << n) - 1) & ~((1 << (start + 1)) - 1)
        if not succ[start] & allowed or not pred[start] & allowed:
            continue
        start_is_x = start < a
        path = [start]

        def extend(v: int, free: int) -> bool:
            length = len(path)
            if length == m:
                return bool(succ[v] >> start & 1)
            # vertices still to place on each side
            remaining = m - length
            need_same = remaining // 2
            need_other = remaining - need_same
            need_x, need_y = (need_same, need_other) if start_is_x else (need_other, need_same)
            if not _side_counts_ok(a, free, need_x, need_y):
                return False
            options = succ[v] & free
            if length == m - 1:
                options &= pred[start]
            for w in bits(options):
                path.append(w)
                if extend(w, free & ~(1 << w)):
                    return True
                path.pop()
            return False

        if extend(start, allowed):
            return path
    return None


def cycle_of_length(d: BipartiteDigraph, m: int) -> Optional[Cycle]:
    if m % 2:
        raise ParameterError(f"bipartite digraphs have no odd cycles; got length {m}")
    if not 2 <= m <= d.order:
        raise ParameterError(f"cycle length must lie in [2, {d.order}], got {m}")
    _require_desk_scale(d)
    if m == d.order:
        return hamiltonian_cycle(d)
    path = _cycle_of_exact_length(d, m)
    return _cycle_from_flat(d, path) if path is not None else None


def even_cycle_spectrum(d: BipartiteDigraph) -> List[int]:
    """Sorted even lengths m for which D has an m-cycle."""
    _require_desk_scale(d)
    return [m for m in range(2, d.order + 1, 2) if cycle_of_length(d, m) is not None]


def exists_nonhamiltonian_cycle_geq4(d: BipartiteDigraph) -> Optional[Cycle]:
    _require_desk_scale(d)
    for m in range(4, d.order - 1, 2):
        found = cycle_of_length(d, m)
        if found is not None:
            return found
    return None


def iter_cycles(d: BipartiteDigraph, max_length: int | None = None, min_length: int = 2) -> Iterator[Cycle]:
    """Every simple cycle once, ordered by smallest vertex then DFS order."""
    _require_desk_scale(d)
    upper = d.order if max_length is None else min(max_length, d.order)
    for path in _search_cycles(d, min_length, upper):
        yield _cycle_from_flat(d, path)


def sample_cycles(d: BipartiteDigraph, max_length: int, limit: int) -> List[Cycle]:
    """Up to `limit` cycles of length <= max_length, taken round-robin over canonical starts."""
    _require_desk_scale(d)
    succ, pred = _flat_masks(d)
    upper = min(max_length, d.order)
    streams = deque(_cycles_from(start, succ, pred, 2, upper) for start in range(d.order))
    picked: List[Cycle] = []
    while streams and len(picked) < limit:
        stream = streams.popleft()
        path = next(stream, None)
        if path is None:
            continue
        picked.append(_cycle_from_flat(d, path))
        streams.append(stream)
    return picked


def find_bypass(d: BipartiteDigraph, cycle: Cycle) -> Optional[Bypass]:
    """First C-bypass found, scanning ordered pairs (u, v) of cycle vertices.

    For each pair the path is a shortest one whose interior avoids V(C).
    """
    if not verify_cycle(d, cycle):
        raise InvalidCycleError(f"{cycle} is not a cycle of D")
    if len(cycle) >= d.order:
        raise InvalidCycleError("a bypass needs at least one vertex outside the host cycle")

    on_cycle = {d.flat(v) for v in cycle.vertices}
    succ, _ = _flat_masks(d)
    outside = ((1 << d.order) - 1) & ~sum(1 << n for n in on_cycle)

    for u in cycle.vertices:
        origin = d.flat(u)
        parent: dict[int, int] = {}
        order: List[int] = []
        queue = deque()
        for w in bits(succ[origin] & outside):
            parent[w] = origin
            order.append(w)
            queue.append(w)
        while queue:
            w = queue.popleft()
            for z in bits(succ[w] & outside):
                if z not in parent:
                    parent[z] = w
                    order.append(z)
                    queue.append(z)
        for v in cycle.vertices:
            if v == u:
                continue
            target = d.flat(v)
            last = next((w for w in order if succ[w] >> target & 1), None)
            if last is None:
                continue
            interior = [last]
            while parent[interior[-1]] != origin:
                interior.append(parent[interior[-1]])
            path = [origin, *reversed(interior), target]
            return Bypass(path=tuple(d.vertex_at(n) for n in path), host=cycle)
    return None
