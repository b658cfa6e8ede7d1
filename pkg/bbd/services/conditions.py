"""Degree-condition predicates over balanced bipartite digraphs.

Every check returns a ConditionReport; when the condition fails the report
carries the first violating vertex or pair (canonical vertex order) with the
degrees that were compared, so the verdict can be re-checked against D.
"""

from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Dict, Iterator, List, Optional, Tuple

from ..errors import ParameterError, UnknownConditionError
from ..schemas.reports import ConditionReport, TheoremCheck, Witness
from .connectivity import is_strongly_connected
from .digraph import BipartiteDigraph, Side, VertexId, bits
from .walks import is_directed_cycle


@dataclass(frozen=True)
class DominatingPair:
    u: VertexId
    v: VertexId
    # smallest common out-neighbour
    witness_z: VertexId


def dominating_pairs(d: BipartiteDigraph) -> List[DominatingPair]:
    pairs = []
    for side in Side:
        for i, j in combinations(range(d.a), 2):
            common = d.out_mask((side, i)) & d.out_mask((side, j))
            if common:
                z = next(bits(common))
                pairs.append(DominatingPair(VertexId(side, i), VertexId(side, j), VertexId(side.other, z)))
    return pairs


def _partner_mask(d: BipartiteDigraph, v: VertexId) -> int:
    """Same-side indices sharing an out-neighbour with v."""
    mask = 0
    for z in bits(d.out_mask(v)):
        mask |= d.in_mask((v.side.other, z))
    return mask & ~(1 << v.index)


def partners(d: BipartiteDigraph, v: VertexId) -> frozenset[VertexId]:
    v = d._check(v)
    return frozenset(VertexId(v.side, i) for i in bits(_partner_mask(d, v)))


def has_partner(d: BipartiteDigraph, v: VertexId) -> bool:
    return bool(_partner_mask(d, d._check(v)))


def _pair_witness(d: BipartiteDigraph, u: VertexId, v: VertexId, reason: str, z: VertexId | None = None) -> Witness:
    return Witness(
        vertices=[str(u), str(v)],
        degrees=[d.degree(u), d.degree(v)],
        common_neighbour=str(z) if z is not None else None,
        reason=reason,
    )


def _report(name: str, params: Dict[str, float | int], checked: int, witness: Optional[Witness]) -> ConditionReport:
    return ConditionReport(
        condition=name,
        params=params,
        holds=witness is None,
        vacuous=checked == 0,
        witness=witness,
    )


def bk_pair_ok(a: int, k: int, du: int, dv: int) -> bool:
    return (du >= 2 * a - k and dv >= a + k) or (du >= a + k and dv >= 2 * a - k)


def check_condition_bk(d: BipartiteDigraph, k: int) -> ConditionReport:
    """For every dominating pair, one degree >= 2a-k and the other >= a+k."""
    if k < 0:
        raise ParameterError(f"k must be non-negative, got {k}")
    a = d.a
    pairs = dominating_pairs(d)
    for pair in pairs:
        du, dv = d.degree(pair.u), d.degree(pair.v)
        if not bk_pair_ok(a, k, du, dv):
            reason = f"d({pair.u})={du}, d({pair.v})={dv}: need one >= {2 * a - k} and the other >= {a + k}"
            return _report("Bk", {"k": k}, len(pairs), _pair_witness(d, pair.u, pair.v, reason, pair.witness_z))
    return _report("Bk", {"k": k}, len(pairs), None)


def check_wang_theorem(d: BipartiteDigraph) -> ConditionReport:
    """Degree bounds 2a-1 and a+1 over dominating pairs (condition B_1)."""
    report = check_condition_bk(d, 1)
    return report.model_copy(update={"condition": "wang_theorem", "params": {}})


def check_proposition_1(d: BipartiteDigraph, k: int) -> ConditionReport:
    """Every vertex that has a partner has degree >= a+k."""
    bound = d.a + k
    checked = 0
    for v in d.vertices():
        mask = _partner_mask(d, v)
        if not mask:
            continue
        checked += 1
        dv = d.degree(v)
        if dv < bound:
            partner = VertexId(v.side, next(bits(mask)))
            witness = Witness(
                vertices=[str(v)],
                degrees=[dv],
                reason=f"{v} has partner {partner} but d({v})={dv} < a+k={bound}",
            )
            return _report("prop1", {"k": k}, checked, witness)
    return _report("prop1", {"k": k}, checked, None)


def _same_side_pairs(d: BipartiteDigraph) -> Iterator[Tuple[VertexId, VertexId]]:
    for side in Side:
        for i, j in combinations(range(d.a), 2):
            yield VertexId(side, i), VertexId(side, j)


def _check_bound(bound: float) -> None:
    if bound < 0:
        raise ParameterError(f"bound must be non-negative, got {bound}")


def check_sum_dominating(d: BipartiteDigraph, bound: float) -> ConditionReport:
    """d(x)+d(y) >= bound for pairs with a common out- or in-neighbour."""
    _check_bound(bound)
    checked = 0
    for u, v in _same_side_pairs(d):
        common_out = d.out_mask(u) & d.out_mask(v)
        common_in = d.in_mask(u) & d.in_mask(v)
        if not (common_out or common_in):
            continue
        checked += 1
        du, dv = d.degree(u), d.degree(v)
        if du + dv < bound:
            z = VertexId(u.side.other, next(bits(common_out or common_in)))
            reason = f"d({u})+d({v})={du + dv} < {bound}"
            return _report("sum_dominating", {"bound": bound}, checked, _pair_witness(d, u, v, reason, z))
    return _report("sum_dominating", {"bound": bound}, checked, None)


def check_max_dominating(d: BipartiteDigraph, bound: float) -> ConditionReport:
    """max{d(x), d(y)} >= bound over dominating pairs."""
    _check_bound(bound)
    pairs = dominating_pairs(d)
    for pair in pairs:
        du, dv = d.degree(pair.u), d.degree(pair.v)
        if max(du, dv) < bound:
            reason = f"max(d({pair.u}), d({pair.v}))={max(du, dv)} < {bound}"
            return _report("max_dominating", {"bound": bound}, len(pairs), _pair_witness(d, pair.u, pair.v, reason, pair.witness_z))
    return _report("max_dominating", {"bound": bound}, len(pairs), None)


def check_nonadjacent_sum(d: BipartiteDigraph, bound: float) -> ConditionReport:
    """d(u)+d(v) >= bound for every pair of distinct non-adjacent vertices."""
    _check_bound(bound)
    checked = 0
    for u, v in combinations(d.vertices(), 2):
        if u.side != v.side and d.adjacent(u, v):
            continue
        checked += 1
        du, dv = d.degree(u), d.degree(v)
        if du + dv < bound:
            reason = f"non-adjacent {u}, {v}: d({u})+d({v})={du + dv} < {bound}"
            return _report("nonadjacent_sum", {"bound": bound}, checked, _pair_witness(d, u, v, reason))
    return _report("nonadjacent_sum", {"bound": bound}, checked, None)


def check_min_degree(d: BipartiteDigraph, bound: float) -> ConditionReport:
    _check_bound(bound)
    for v in d.vertices():
        dv = d.degree(v)
        if dv < bound:
            witness = Witness(vertices=[str(v)], degrees=[dv], reason=f"d({v})={dv} < {bound}")
            return _report("min_degree", {"bound": bound}, d.order, witness)
    return _report("min_degree", {"bound": bound}, d.order, None)


def check_same_side_sum(d: BipartiteDigraph, bound: float) -> ConditionReport:
    """d(x)+d(y) >= bound for distinct x, y both in X or both in Y."""
    _check_bound(bound)
    checked = 0
    for u, v in _same_side_pairs(d):
        checked += 1
        du, dv = d.degree(u), d.degree(v)
        if du + dv < bound:
            reason = f"d({u})+d({v})={du + dv} < {bound}"
            return _report("same_side_sum", {"bound": bound}, checked, _pair_witness(d, u, v, reason))
    return _report("same_side_sum", {"bound": bound}, checked, None)


# name -> (predicate, required parameter)
CONDITIONS: Dict[str, Tuple[Callable[..., ConditionReport], Optional[str]]] = {
    "Bk": (check_condition_bk, "k"),
    "prop1": (check_proposition_1, "k"),
    "sum_dominating": (check_sum_dominating, "bound"),
    "max_dominating": (check_max_dominating, "bound"),
    "nonadjacent_sum": (check_nonadjacent_sum, "bound"),
    "min_degree": (check_min_degree, "bound"),
    "same_side_sum": (check_same_side_sum, "bound"),
    "wang_theorem": (check_wang_theorem, None),
}


def run_condition(d: BipartiteDigraph, name: str, params: Dict[str, float | int]) -> ConditionReport:
    if name not in CONDITIONS:
        raise UnknownConditionError(f"unknown condition {name!r}; choose from {', '.join(CONDITIONS)}")
    predicate, parameter = CONDITIONS[name]
    if parameter is None:
        return predicate(d)
    if params.get(parameter) is None:
        raise ParameterError(f"condition {name} needs parameter {parameter}")
    value = params[parameter]
    if parameter == "k":
        if float(value) != int(value):
            raise ParameterError(f"k must be an integer, got {value}")
        value = int(value)
    return predicate(d, value)


def wang_range_issues(a: int, k: int) -> List[str]:
    """Reasons (a, k) falls outside 2 <= k <= floor(a/2), 2a >= 8."""
    issues = []
    if a < 4:
        issues.append(f"order 2a={2 * a} is below 8")
    if k < 2:
        issues.append(f"k={k} is below 2")
    if k > a // 2:
        issues.append(f"k={k} exceeds floor(a/2)={a // 2}")
    return issues


def at_odd_boundary(a: int, k: int) -> bool:
    return a % 2 == 1 and k == a // 2


def evaluate_theorems(d: BipartiteDigraph) -> List[TheoremCheck]:
    """Hypotheses of the classical sufficient conditions and what each guarantees."""
    a = d.a
    strong = is_strongly_connected(d)
    cycle = is_directed_cycle(d)
    checks: List[TheoremCheck] = []

    def add(name: str, conclusion: str, requirements: Dict[str, bool], exception: str | None = None) -> None:
        failed = [label for label, ok in requirements.items() if not ok]
        checks.append(
            TheoremCheck(
                theorem=name,
                hypothesis_holds=not failed,
                failed_requirements=failed,
                conclusion=conclusion,
                exception=exception,
            )
        )

    add("nonadjacent_sum_3a_plus_1", "hamiltonian", {
        "a >= 2": a >= 2,
        f"nonadjacent_sum >= {3 * a + 1}": check_nonadjacent_sum(d, 3 * a + 1).holds,
    })
    add("strong_nonadjacent_sum_3a", "hamiltonian", {
        "a >= 2": a >= 2,
        "strong": strong,
        f"nonadjacent_sum >= {3 * a}": check_nonadjacent_sum(d, 3 * a).holds,
    })
    add("min_degree_3a_plus_1_half", "hamiltonian", {
        "a >= 2": a >= 2,
        f"min_degree >= {(3 * a + 1) / 2}": check_min_degree(d, (3 * a + 1) / 2).holds,
    })
    add("strong_min_degree_3a_half", "hamiltonian", {
        "a >= 2": a >= 2,
        "strong": strong,
        f"min_degree >= {3 * a / 2}": check_min_degree(d, 3 * a / 2).holds,
    })
    add("dominating_sum_3a", "hamiltonian", {
        "2a >= 6": a >= 3,
        "strong": strong,
        f"sum_dominating >= {3 * a}": check_sum_dominating(d, 3 * a).holds,
    })
    add("wang_b1", "hamiltonian", {
        "strong": strong,
        "B_1": check_wang_theorem(d).holds,
    })
    add("max_dominating_2a_minus_1", "hamiltonian", {
        "2a >= 8": a >= 4,
        "strong": strong,
        f"max_dominating >= {2 * a - 1}": check_max_dominating(d, 2 * a - 1).holds,
    }, exception="D8")
    add("max_dominating_2a_minus_1_pancyclic", "even_pancyclic", {
        "2a >= 8": a >= 4,
        "strong": strong,
        "not a directed cycle": not cycle,
        f"max_dominating >= {2 * a - 1}": check_max_dominating(d, 2 * a - 1).holds,
    }, exception="D8")
    add("same_side_sum_3a_plus_1", "even_pancyclic", {
        "2a >= 4": a >= 2,
        f"same_side_sum >= {3 * a + 1}": check_same_side_sum(d, 3 * a + 1).holds,
    })
    add("strong_same_side_sum_3a", "even_pancyclic", {
        "2a >= 6": a >= 3,
        "strong": strong,
        f"same_side_sum >= {3 * a}": check_same_side_sum(d, 3 * a).holds,
    })
    add("dominating_sum_3a_pancyclic", "even_pancyclic", {
        "2a >= 6": a >= 3,
        "strong": strong,
        f"sum_dominating >= {3 * a}": check_sum_dominating(d, 3 * a).holds,
    }, exception="directed_cycle")
    add("max_dominating_2a_minus_2", "cycles_up_to_2a_minus_2", {
        "2a >= 10": a >= 5,
        "strong": strong,
        "not a directed cycle": not cycle,
        f"max_dominating >= {2 * a - 2}": check_max_dominating(d, 2 * a - 2).holds,
    }, exception="D10")
    add("bk_cycle_factor", "cycle_factor", {
        "2a >= 8": a >= 4,
        "strong": strong,
        "B_k for some 2 <= k <= floor(a/2)": any(
            check_condition_bk(d, k).holds for k in range(2, a // 2 + 1)
        ),
    })
    return checks
