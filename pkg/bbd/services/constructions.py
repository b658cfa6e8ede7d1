"""Reference digraphs, standard families, seeded generators, isomorphism.

Random generation uses numpy's PCG64 bit generator. One stream is opened per
call from `config.seed`; sampling a digraph draws 2a^2 uniform doubles in
canonical arc order (X tails by tail then head index, then Y tails) and keeps
an arc when its draw is below `arc_probability`. Repair moves draw from the
same stream afterwards, so a config always reproduces the same digraph.
"""

from collections import Counter
from itertools import combinations, permutations
from typing import Iterator, List, Optional, Sequence

import numpy as np
import structlog

from ..errors import GeneratorError, ParameterError
from ..schemas.generator import GeneratorConfig
from .conditions import check_condition_bk, wang_range_issues
from .connectivity import StrongConnectivity, strong_components
from .digraph import BipartiteDigraph, Side, VertexId, bits

logger = structlog.get_logger("bbd")

GENERATOR_NAME = "numpy.random.PCG64"
ISOMORPHISM_MAX_A = 6


def _x(i: int) -> VertexId:
    return VertexId(Side.X, i)


def _y(j: int) -> VertexId:
    return VertexId(Side.Y, j)


def _both(d: BipartiteDigraph, u: VertexId, v: VertexId) -> None:
    d.add_arc(u, v)
    d.add_arc(v, u)


def build_d8() -> BipartiteDigraph:
    """Strong, non-Hamiltonian; max degree bound 2a-1 over dominating pairs."""
    d = BipartiteDigraph(4)
    d.add_arc(_y(0), _x(1))
    d.add_arc(_y(1), _x(0))
    d.add_arc(_x(2), _y(3))
    d.add_arc(_x(3), _y(2))
    for i in range(4):
        _both(d, _x(i), _y(i))
    for j in (0, 1):
        for i in (2, 3):
            _both(d, _y(j), _x(i))
    return d


def build_d10() -> BipartiteDigraph:
    """Strong, no 8-cycle, UG not 2-connected; bound 2a-2 over dominating pairs."""
    d = BipartiteDigraph(5)
    middle = (1, 2, 3)
    for i in middle:
        for j in (0, 4):
            _both(d, _x(i), _y(j))
        for j in middle:
            d.add_arc(_x(i), _y(j))
    _both(d, _x(4), _y(4))
    _both(d, _x(0), _y(0))
    _both(d, _x(3), _y(1))
    for i in middle:
        # x3 <-> y4 repeats an arc pair of the complete block; duplicates are no-ops
        _both(d, _x(i), _y(i + 1))
    return d


def directed_cycle(a: int) -> BipartiteDigraph:
    """x0 y0 x1 y1 ... x_{a-1} y_{a-1} x0."""
    d = BipartiteDigraph(a)
    for i in range(a):
        d.add_arc(_x(i), _y(i))
        d.add_arc(_y(i), _x((i + 1) % a))
    return d


def complete_bipartite(a: int) -> BipartiteDigraph:
    d = BipartiteDigraph(a)
    for i in range(a):
        for j in range(a):
            _both(d, _x(i), _y(j))
    return d


def d10_single_arc_extensions() -> Iterator[tuple[tuple[VertexId, VertexId], BipartiteDigraph]]:
    """D(10) plus one absent arc with an end-vertex x0 or x4."""
    base = build_d10()
    for i in (0, 4):
        for j in range(base.a):
            for arc in ((_x(i), _y(j)), (_y(j), _x(i))):
                if not base.has_arc(*arc):
                    extended = base.copy()
                    extended.add_arc(*arc)
                    yield arc, extended


def d10_back_arc_extensions() -> Iterator[tuple[tuple[tuple[VertexId, VertexId], ...], BipartiteDigraph]]:
    """D(10) plus every nonempty set of absent arcs y_i -> x_j, i, j in {1, 2, 3}."""
    base = build_d10()
    absent = [(_y(i), _x(j)) for i in (1, 2, 3) for j in (1, 2, 3) if not base.has_arc(_y(i), _x(j))]
    for size in range(1, len(absent) + 1):
        for chosen in combinations(absent, size):
            extended = base.copy()
            for arc in chosen:
                extended.add_arc(*arc)
            yield chosen, extended


# Seeded generation


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def _sample(a: int, p: float, rng: np.random.Generator) -> BipartiteDigraph:
    keep = rng.random(2 * a * a).reshape(2, a, a) < p
    d = BipartiteDigraph(a)
    for side, tail, head in np.argwhere(keep):
        d.add_arc(VertexId(Side(int(side)), int(tail)), VertexId(Side(int(side)).other, int(head)))
    return d


def random_digraph(config: GeneratorConfig) -> BipartiteDigraph:
    return _sample(config.a, config.arc_probability, make_rng(config.seed))


def _add_arc_at(d: BipartiteDigraph, w: VertexId, rng: np.random.Generator) -> bool:
    other = w.side.other
    absent = []
    for j in range(d.a):
        z = VertexId(other, j)
        if not d.has_arc(w, z):
            absent.append((w, z))
        if not d.has_arc(z, w):
            absent.append((z, w))
    if not absent:
        return False
    d.add_arc(*absent[int(rng.integers(len(absent)))])
    return True


def _connect_sink(d: BipartiteDigraph, strong: StrongConnectivity, rng: np.random.Generator) -> bool:
    # components[0] is a sink component; give it an arc leaving it
    sink = set(strong.components[0])
    options = [
        (s, t)
        for s in sorted(sink)
        for t in (VertexId(s.side.other, j) for j in range(d.a))
        if t not in sink
    ]
    if not options:
        return False
    d.add_arc(*options[int(rng.integers(len(options)))])
    return True


def _repair(d: BipartiteDigraph, k: int, rng: np.random.Generator, iterations: int) -> bool:
    for step in range(iterations + 1):
        report = check_condition_bk(d, k)
        last = step == iterations
        if report.holds:
            strong = strong_components(d)
            if strong.strong:
                return True
            if last or not _connect_sink(d, strong, rng):
                return False
            continue
        if last:
            return False
        u, v = (VertexId.parse(name) for name in report.witness.vertices)
        z = VertexId.parse(report.witness.common_neighbour)
        if rng.random() < 0.5:
            low = u if d.degree(u) <= d.degree(v) else v
            if _add_arc_at(d, low, rng):
                continue
        tail = (u, v)[int(rng.integers(2))]
        d.remove_arc(tail, z)
    return False


def validate_wang_parameters(a: int, k: int) -> None:
    issues = wang_range_issues(a, k)
    if issues:
        raise GeneratorError("parameters outside 2 <= k <= floor(a/2), 2a >= 8: " + "; ".join(issues))


def random_bk_digraph(config: GeneratorConfig, rng: Optional[np.random.Generator] = None) -> Optional[BipartiteDigraph]:
    """A strong digraph satisfying B_k, or None after `max_attempts` samples.

    Each attempt samples a digraph and repairs it: a violating dominating pair
    either gains an arc at its lower-degree vertex or loses one of its two arcs
    into the shared out-neighbour; a non-strong digraph gains an arc leaving a
    sink component. Not a uniform sampler.
    """
    validate_wang_parameters(config.a, config.k)
    rng = rng if rng is not None else make_rng(config.seed)
    for attempt in range(config.max_attempts):
        d = _sample(config.a, config.arc_probability, rng)
        if _repair(d, config.k, rng, config.repair_iterations):
            logger.debug("bk_instance_generated", a=config.a, k=config.k, attempt=attempt, arcs=d.arc_count)
            return d
    logger.info("bk_generation_failed", a=config.a, k=config.k, seed=config.seed, attempts=config.max_attempts)
    return None


# Isomorphism


def relabel(
    d: BipartiteDigraph,
    x_perm: Sequence[int],
    y_perm: Sequence[int],
    swap_sides: bool = False,
) -> BipartiteDigraph:
    """Image of D under X i -> x_perm[i], Y j -> y_perm[j], optionally exchanging X and Y."""
    if sorted(x_perm) != list(range(d.a)) or sorted(y_perm) != list(range(d.a)):
        raise ParameterError("relabeling must be a permutation of 0..a-1 on each side")

    def image(v: VertexId) -> VertexId:
        index = x_perm[v.index] if v.side is Side.X else y_perm[v.index]
        return VertexId(v.side.other if swap_sides else v.side, index)

    return BipartiteDigraph.from_arcs(d.a, ((image(u), image(v)) for u, v in d.arcs()))


def _map_mask(mask: int, perm: Sequence[int]) -> int:
    out = 0
    for i in bits(mask):
        out |= 1 << perm[i]
    return out


def _isomorphic_under(d1: BipartiteDigraph, d2: BipartiteDigraph, swap: bool) -> bool:
    a = d1.a
    first, second = Side.X, Side.Y
    image_first = second if swap else first
    image_second = first if swap else second

    def signature(d: BipartiteDigraph, v: VertexId) -> tuple[int, int]:
        return d.out_degree(v), d.in_degree(v)

    sources = [VertexId(first, i) for i in range(a)]
    targets = [VertexId(image_first, i) for i in range(a)]
    wanted = [signature(d1, v) for v in sources]
    target_sig = [signature(d2, v) for v in targets]

    # Keys of the second side in D2: (out mask, in mask) over the image of the first side
    goal = Counter((d2.out_mask((image_second, j)), d2.in_mask((image_second, j))) for j in range(a))

    for perm in permutations(range(a)):
        if any(wanted[i] != target_sig[perm[i]] for i in range(a)):
            continue
        # With the first side fixed, a vertex of the second side is determined by its
        # neighbourhoods up to twins, so comparing key multisets decides the rest.
        keys = Counter(
            (_map_mask(d1.out_mask((second, j)), perm), _map_mask(d1.in_mask((second, j)), perm))
            for j in range(a)
        )
        if keys == goal:
            return True
    return False


def is_isomorphic(d1: BipartiteDigraph, d2: BipartiteDigraph) -> bool:
    """Side-preserving or side-swapping relabeling mapping arcs onto arcs."""
    if d1.a != d2.a:
        raise ParameterError(f"half-orders differ: {d1.a} vs {d2.a}")
    if d1.a > ISOMORPHISM_MAX_A:
        raise ParameterError(f"brute-force isomorphism supports a <= {ISOMORPHISM_MAX_A}, got a={d1.a}")
    if d1.arc_count != d2.arc_count:
        return False
    sig1, sig2 = d1.degree_signature(), d2.degree_signature()
    if sig1 == sig2 and _isomorphic_under(d1, d2, swap=False):
        return True
    return sig1 == (sig2[1], sig2[0]) and _isomorphic_under(d1, d2, swap=True)


def degree_sequence_key(d: BipartiteDigraph) -> tuple:
    """Relabeling-invariant hash key: degree signatures with the two sides unordered."""
    sig = d.degree_signature()
    return (d.a, d.arc_count, tuple(sorted(sig)))


def isomorphism_classes(digraphs: List[BipartiteDigraph]) -> List[BipartiteDigraph]:
    """One representative per isomorphism class, first occurrence kept."""
    buckets: dict[tuple, List[BipartiteDigraph]] = {}
    kept = []
    for d in digraphs:
        bucket = buckets.setdefault(degree_sequence_key(d), [])
        if any(is_isomorphic(d, rep) for rep in bucket):
            continue
        bucket.append(d)
        kept.append(d)
    return kept
