"""Perfect matchings X->Y and Y->X, Hall violators, and cycle factors.

A balanced bipartite digraph has a cycle factor iff it has a perfect matching
in both directions; the union of the two matchings gives every vertex
in- and out-degree one, so it splits into disjoint alternating cycles.
"""

from dataclasses import dataclass
from enum import Enum
from itertools import permutations
from typing import List, Optional, Union

import structlog

from ..errors import ParameterError
from .digraph import BipartiteDigraph, Side, VertexId, bits
from .walks import Cycle, verify_cycle

logger = structlog.get_logger("bbd")

BRUTE_FORCE_MAX_A = 8


class Direction(str, Enum):
    X_TO_Y = "XtoY"
    Y_TO_X = "YtoX"

    @property
    def source(self) -> Side:
        return Side.X if self is Direction.X_TO_Y else Side.Y

    @property
    def target(self) -> Side:
        return self.source.other


@dataclass(frozen=True)
class Matching:
    direction: Direction
    a: int
    # (source, target), ascending by source index
    pairs: tuple[tuple[VertexId, VertexId], ...]

    @property
    def size(self) -> int:
        return len(self.pairs)

    @property
    def is_perfect(self) -> bool:
        return len(self.pairs) == self.a


@dataclass(frozen=True)
class HallViolator:
    direction: Direction
    S: tuple[VertexId, ...]
    neighborhood: tuple[VertexId, ...]


@dataclass(frozen=True)
class MatchingOutcome:
    matching: Matching
    violator: Optional[HallViolator]

    @property
    def perfect(self) -> bool:
        return self.violator is None


@dataclass(frozen=True)
class CycleFactor:
    cycles: tuple[Cycle, ...]


@dataclass(frozen=True)
class FactorFailure:
    missing_direction: Direction
    violator: HallViolator


def _rows(d: BipartiteDigraph, direction: Direction) -> List[int]:
    return [d.out_mask((direction.source, i)) for i in range(d.a)]


def _augmenting_match(rows: List[int], a: int) -> List[int]:
    """Index-ordered augmenting-path search; returns target -> source (or -1)."""
    owner = [-1] * a

    def augment(i: int, seen: List[int]) -> bool:
        for j in bits(rows[i] & ~seen[0]):
            if seen[0] >> j & 1:
                continue
            seen[0] |= 1 << j
            if owner[j] == -1 or augment(owner[j], seen):
                owner[j] = i
                return True
        return False

    for i in range(a):
        augment(i, [0])
    return owner


def _violator_from(rows: List[int], owner: List[int], direction: Direction) -> Optional[HallViolator]:
    matched_sources = {i for i in owner if i != -1}
    free = [i for i in range(len(rows)) if i not in matched_sources]
    if not free:
        return None
    # Alternating search from the first unmatched source; it cannot reach a free target.
    start = free[0]
    sources = 1 << start
    targets = 0
    frontier = [start]
    while frontier:
        s = frontier.pop()
        for j in bits(rows[s] & ~targets):
            targets |= 1 << j
            t = owner[j]
            if not sources >> t & 1:
                sources |= 1 << t
                frontier.append(t)
    src, tgt = direction.source, direction.target
    return HallViolator(
        direction=direction,
        S=tuple(VertexId(src, i) for i in bits(sources)),
        neighborhood=tuple(VertexId(tgt, j) for j in bits(targets)),
    )


def perfect_matching_or_violator(d: BipartiteDigraph, direction: Direction) -> MatchingOutcome:
    rows = _rows(d, direction)
    owner = _augmenting_match(rows, d.a)
    src, tgt = direction.source, direction.target
    pairs = tuple(sorted((VertexId(src, i), VertexId(tgt, j)) for j, i in enumerate(owner) if i != -1))
    matching = Matching(direction=direction, a=d.a, pairs=pairs)
    return MatchingOutcome(matching=matching, violator=_violator_from(rows, owner, direction))


def max_matching(d: BipartiteDigraph, direction: Direction) -> Matching:
    return perfect_matching_or_violator(d, direction).matching


def hall_violator(d: BipartiteDigraph, direction: Direction) -> Optional[HallViolator]:
    return perfect_matching_or_violator(d, direction).violator


def cycle_factor(d: BipartiteDigraph) -> Union[CycleFactor, FactorFailure]:
    successor: dict[Direction, List[int]] = {}
    for direction in Direction:
        outcome = perfect_matching_or_violator(d, direction)
        if outcome.violator is not None:
            logger.debug("cycle_factor_missing", direction=direction.value, S=[str(v) for v in outcome.violator.S])
            return FactorFailure(missing_direction=direction, violator=outcome.violator)
        successor[direction] = [t.index for _, t in outcome.matching.pairs]

    to_y, to_x = successor[Direction.X_TO_Y], successor[Direction.Y_TO_X]
    visited = [False] * d.a
    cycles = []
    for start in range(d.a):
        if visited[start]:
            continue
        walk = []
        i = start
        while not visited[i]:
            visited[i] = True
            j = to_y[i]
            walk.extend((VertexId(Side.X, i), VertexId(Side.Y, j)))
            i = to_x[j]
        cycles.append(Cycle(tuple(walk)))
    return CycleFactor(cycles=tuple(cycles))


def brute_force_has_perfect_matching(d: BipartiteDigraph, direction: Direction) -> bool:
    """Try every bijection source -> target; independent oracle for small a."""
    if d.a > BRUTE_FORCE_MAX_A:
        raise ParameterError(f"brute force matching supports a <= {BRUTE_FORCE_MAX_A}, got a={d.a}")
    rows = _rows(d, direction)
    return any(all(rows[i] >> perm[i] & 1 for i in range(d.a)) for perm in permutations(range(d.a)))


def verify_matching(d: BipartiteDigraph, matching: Matching) -> bool:
    sources = [s for s, _ in matching.pairs]
    targets = [t for _, t in matching.pairs]
    if len(set(sources)) != len(sources) or len(set(targets)) != len(targets):
        return False
    return all(
        s.side == matching.direction.source and t.side == matching.direction.target and d.has_arc(s, t)
        for s, t in matching.pairs
    )


def verify_hall_violator(d: BipartiteDigraph, violator: HallViolator) -> bool:
    if not violator.S or any(v.side != violator.direction.source for v in violator.S):
        return False
    recomputed = d.out_neighbors_of_set(violator.S)
    return recomputed == frozenset(violator.neighborhood) and len(recomputed) < len(set(violator.S))


def verify_cycle_factor(d: BipartiteDigraph, factor: CycleFactor) -> bool:
    seen: set[VertexId] = set()
    for cycle in factor.cycles:
        if not verify_cycle(d, cycle) or seen.intersection(cycle.vertices):
            return False
        seen.update(cycle.vertices)
    return len(seen) == d.order
