"""Budgeted depth-first enumeration of strong digraphs satisfying B_k (a in {4, 5}).

Arcs are decided in canonical order, include before exclude, so the first
leaf reached is the complete bipartite digraph. A partial assignment is cut
when some vertex can no longer reach in- and out-degree one, or when a
dominating pair already present cannot meet the B_k bounds even if every
undecided arc is added. The second rule subsumes the partner rule: a vertex
with a partner sits in a dominating pair and so needs degree >= a+k.
"""

from typing import Iterator, List

import structlog

from ..errors import ParameterError
from .conditions import bk_pair_ok, dominating_pairs
from .connectivity import is_strongly_connected
from .constructions import complete_bipartite, degree_sequence_key, is_isomorphic
from .digraph import BipartiteDigraph, VertexId

logger = structlog.get_logger("bbd")

SUPPORTED_HALF_ORDERS = (4, 5)


def _canonical_arcs(a: int) -> List[tuple[VertexId, VertexId]]:
    return complete_bipartite(a).arcs()


def _undecided_incidence(d: BipartiteDigraph, arcs: List[tuple[VertexId, VertexId]]) -> List[List[tuple[int, int]]]:
    """table[t][flat v] = (out, in) arcs at v with canonical index >= t."""
    n = d.order
    table = [[(0, 0)] * n]
    for u, v in reversed(arcs):
        row = list(table[-1])
        fu, fv = d.flat(u), d.flat(v)
        row[fu] = (row[fu][0] + 1, row[fu][1])
        row[fv] = (row[fv][0], row[fv][1] + 1)
        table.append(row)
    return table[::-1]


class Enumeration:
    """Iterable stream of emitted digraphs plus coverage counters.

    After iteration, `completed` is True only when the search finished within
    `budget` nodes, in which case every strong B_k digraph was emitted up to
    the deduplication policy: isomorphism at a=4, degree-sequence hash at a=5.
    """

    def __init__(self, a: int, k: int, budget: int, dedup: bool = True) -> None:
        if a not in SUPPORTED_HALF_ORDERS:
            raise ParameterError(f"enumeration supports a in {SUPPORTED_HALF_ORDERS}, got a={a}")
        if k < 0:
            raise ParameterError(f"k must be non-negative, got {k}")
        if budget < 1:
            raise ParameterError(f"budget must be positive, got {budget}")
        self.a = a
        self.k = k
        self.budget = budget
        self.dedup = dedup
        self.completed = False
        self.nodes_explored = 0
        self.emitted = 0
        self.duplicates_skipped = 0
        self._exhausted = False
        self._started = False
        self._seen: dict[tuple, List[BipartiteDigraph]] = {}

    def __iter__(self) -> Iterator[BipartiteDigraph]:
        if self._started:
            raise ParameterError("an Enumeration can be iterated only once")
        self._started = True
        return self._search()

    def coverage(self) -> dict:
        return {
            "completed": self.completed,
            "nodes_explored": self.nodes_explored,
            "budget": self.budget,
            "emitted": self.emitted,
            "duplicates_skipped": self.duplicates_skipped,
            "dedup": ("isomorphism" if self.a == 4 else "degree_sequence") if self.dedup else "none",
        }

    def _feasible(self, d: BipartiteDigraph, undecided: List[tuple[int, int]]) -> bool:
        best = []
        for n, v in enumerate(d.vertices()):
            out_left, in_left = undecided[n]
            out = d.out_degree(v) + out_left
            inn = d.in_degree(v) + in_left
            if not out or not inn:
                return False
            best.append(out + inn)
        for pair in dominating_pairs(d):
            if not bk_pair_ok(d.a, self.k, best[d.flat(pair.u)], best[d.flat(pair.v)]):
                return False
        return True

    def _is_new(self, d: BipartiteDigraph) -> bool:
        if not self.dedup:
            return True
        key = degree_sequence_key(d)
        bucket = self._seen.setdefault(key, [])
        if self.a == 4:
            if any(is_isomorphic(d, rep) for rep in bucket):
                return False
        elif bucket:
            return False
        bucket.append(d)
        return True

    def _search(self) -> Iterator[BipartiteDigraph]:
        d = BipartiteDigraph(self.a)
        arcs = _canonical_arcs(self.a)
        undecided = _undecided_incidence(d, arcs)

        def visit(t: int) -> Iterator[BipartiteDigraph]:
            if self.nodes_explored >= self.budget:
                self._exhausted = True
                return
            self.nodes_explored += 1
            if not self._feasible(d, undecided[t]):
                return
            if t == len(arcs):
                # all arcs decided: feasibility is B_k itself
                if is_strongly_connected(d):
                    found = d.copy()
                    if self._is_new(found):
                        self.emitted += 1
                        yield found
                    else:
                        self.duplicates_skipped += 1
                return
            u, v = arcs[t]
            d.add_arc(u, v)
            yield from visit(t + 1)
            d.remove_arc(u, v)
            if not self._exhausted:
                yield from visit(t + 1)

        yield from visit(0)
        self.completed = not self._exhausted
        logger.info("enumeration_finished", a=self.a, k=self.k, **self.coverage())


def enumerate_bk(a: int, k: int, budget: int, dedup: bool = True) -> Enumeration:
    return Enumeration(a, k, budget, dedup=dedup)
