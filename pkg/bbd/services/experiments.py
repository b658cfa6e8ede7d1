"""Single-graph analysis, the reference verification suite, instance experiments and the search.

Experiments draw instance i from seed `config.seed + i`, so a report depends
only on its config. Instances run in a process pool capped by
`settings.threads`; violations are sorted by serialization before they are
reported, which keeps the report body independent of worker scheduling.
"""

import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime, timezone
from typing import Any, Callable, Dict, Iterable, List, Optional, Tuple, Union

import structlog

from .. import __version__
from ..config import settings
from ..errors import GeneratorError, ParameterError
from ..schemas.generator import ExperimentConfig, GeneratorConfig
from ..schemas.reports import (
    AnalysisReport,
    AssertionResult,
    ConditionReport,
    ConnectivityReport,
    CycleFactorReport,
    ExperimentReport,
    HallViolatorReport,
    TheoremCheck,
    TwoConnectivityReport,
    Violation,
)
from .bbd_format import parse, serialize
from .conditions import (
    at_odd_boundary,
    check_condition_bk,
    check_max_dominating,
    check_proposition_1,
    dominating_pairs,
    evaluate_theorems,
    has_partner,
    run_condition,
    wang_range_issues,
)
from .connectivity import StrongConnectivity, TwoConnectivity, strong_components, underlying_is_two_connected
from .constructions import (
    GENERATOR_NAME,
    build_d8,
    build_d10,
    d10_back_arc_extensions,
    d10_single_arc_extensions,
    is_isomorphic,
    random_bk_digraph,
    validate_wang_parameters,
)
from .cycles import (
    cycle_of_length,
    even_cycle_spectrum,
    exists_nonhamiltonian_cycle_geq4,
    find_bypass,
    hamiltonian_cycle,
    sample_cycles,
)
from .digraph import BipartiteDigraph, VertexId
from .enumeration import Enumeration
from .factor import CycleFactor, FactorFailure, HallViolator, cycle_factor, verify_cycle_factor
from .walks import Cycle, is_directed_cycle, verify_bypass, verify_cycle

logger = structlog.get_logger("bbd")

EXPERIMENTS = ("cycle_factor", "partner_existence", "long_cycle", "two_connectivity_bypass", "proposition_1")
EXPERIMENT_ALIASES = {
    "thm1_10": "cycle_factor",
    "lemma4_1": "partner_existence",
    "lemma4_2": "long_cycle",
    "lemma4_3": "two_connectivity_bypass",
}
PROPOSITION_GRID: Tuple[Tuple[int, int], ...] = ((4, 2), (5, 2), (6, 2), (6, 3))
SEARCH_MODES = ("random", "enumerate")

# instances per experiment in the verification suite's smoke runs
VERIFY_INSTANCES = 20

D8_DOMINATING_PAIRS = {
    frozenset(pair)
    for pair in (
        ("X0", "X2"), ("X0", "X3"), ("X1", "X2"), ("X1", "X3"), ("X2", "X3"),
        ("Y0", "Y1"), ("Y0", "Y2"), ("Y0", "Y3"), ("Y1", "Y2"), ("Y1", "Y3"),
    )
}


def warn_wang_range(a: int, k: int) -> bool:
    """Log when (a, k) leaves 2 <= k <= floor(a/2), 2a >= 8; True when inside."""
    issues = wang_range_issues(a, k)
    if issues:
        logger.warning("k_outside_wang_range", a=a, k=k, issues=issues)
        return False
    if at_odd_boundary(a, k):
        logger.warning("k_at_odd_boundary", a=a, k=k, note="odd a with k = floor(a/2)")
    return True


# Report converters


def violator_report(violator: HallViolator) -> HallViolatorReport:
    return HallViolatorReport(
        direction=violator.direction.value,
        S=[str(v) for v in violator.S],
        neighborhood=[str(v) for v in violator.neighborhood],
    )


def cycle_factor_report(result: Union[CycleFactor, FactorFailure]) -> CycleFactorReport:
    if isinstance(result, FactorFailure):
        return CycleFactorReport(
            exists=False,
            missing_direction=result.missing_direction.value,
            violator=violator_report(result.violator),
        )
    return CycleFactorReport(exists=True, cycles=[str(c) for c in result.cycles])


def connectivity_report(strong: StrongConnectivity) -> ConnectivityReport:
    return ConnectivityReport(
        strong=strong.strong,
        components=len(strong.components),
        unreachable=[str(v) for v in strong.unreachable] if strong.unreachable else None,
    )


def two_connectivity_report(result: TwoConnectivity) -> TwoConnectivityReport:
    return TwoConnectivityReport(
        two_connected=result.two_connected,
        connected=result.connected,
        cut_vertex=str(result.cut_vertex) if result.cut_vertex is not None else None,
        separation=[sorted(str(v) for v in part) for part in result.separation] if result.separation else None,
    )


# Single-graph commands


def check(d: BipartiteDigraph, name: str, params: Dict[str, float | int]) -> ConditionReport:
    if "k" in params and params["k"] is not None:
        warn_wang_range(d.a, int(params["k"]))
    return run_condition(d, name, params)


def _conclusion_holds(conclusion: str, d: BipartiteDigraph, hamiltonian: bool, spectrum: List[int], factor: bool) -> bool:
    if conclusion == "hamiltonian":
        return hamiltonian
    if conclusion == "even_pancyclic":
        return spectrum == list(range(2, d.order + 1, 2))
    if conclusion == "cycles_up_to_2a_minus_2":
        return set(range(2, d.order - 1, 2)) <= set(spectrum)
    if conclusion == "cycle_factor":
        return factor
    raise ParameterError(f"unknown conclusion {conclusion!r}")


def _is_exception(d: BipartiteDigraph, exception: Optional[str]) -> bool:
    if exception == "D8":
        return d.a == 4 and is_isomorphic(d, build_d8())
    if exception == "D10":
        return d.a == 5 and is_isomorphic(d, build_d10())
    if exception == "directed_cycle":
        return is_directed_cycle(d)
    return False


def cross_check_theorems(
    d: BipartiteDigraph, checks: List[TheoremCheck], hamiltonian: bool, spectrum: List[int], factor: bool
) -> List[TheoremCheck]:
    """Compare each applicable guarantee with what the solvers found."""
    out = []
    for item in checks:
        if not item.hypothesis_holds:
            out.append(item)
            continue
        holds = _conclusion_holds(item.conclusion, d, hamiltonian, spectrum, factor)
        update: Dict[str, Any] = {"conclusion_holds": holds}
        if not holds:
            if _is_exception(d, item.exception):
                update["excepted"] = True
            else:
                update["contradiction"] = True
                logger.error("theorem_contradiction", theorem=item.theorem, graph=serialize(d))
        out.append(item.model_copy(update=update))
    return out


def analyze(d: BipartiteDigraph, k: int) -> AnalysisReport:
    in_range = warn_wang_range(d.a, k)
    strong = strong_components(d)
    omissions = []

    two = None
    if d.order >= 3:
        two = two_connectivity_report(underlying_is_two_connected(d))
    else:
        omissions.append("two_connected_ug: needs order at least 3")

    cap = settings.solver_max_half_order
    capped = d.a > cap
    if capped:
        omissions.extend([
            f"hamiltonian: cap exceeded (2a={d.order} > {2 * cap})",
            f"even_spectrum: cap exceeded (2a={d.order} > {2 * cap})",
            "theorem conclusions: not cross-checked without the cycle solvers",
        ])

    factor = cycle_factor_report(cycle_factor(d))
    report = AnalysisReport(
        a=d.a,
        order=d.order,
        arc_count=d.arc_count,
        k=k,
        wang_range=in_range,
        strong=connectivity_report(strong),
        two_connected_ug=two,
        bk=check_condition_bk(d, k),
        dominating_pairs=[[str(p.u), str(p.v)] for p in dominating_pairs(d)],
        cycle_factor=factor,
        theorems=evaluate_theorems(d),
        omissions=omissions,
    )
    if capped:
        return report

    ham = hamiltonian_cycle(d)
    spectrum = even_cycle_spectrum(d)
    report.hamiltonian = ham is not None
    report.hamiltonian_cycle = str(ham) if ham is not None else None
    report.even_spectrum = spectrum
    report.theorems = cross_check_theorems(d, report.theorems, ham is not None, spectrum, factor.exists)
    return report


# Verification suite


def _assertion(results: List[AssertionResult], name: str, passed: bool, detail: str = "") -> None:
    results.append(AssertionResult(name=name, passed=bool(passed), detail=detail))
    if not passed:
        logger.warning("assertion_failed", assertion=name, detail=detail)


def _degrees(d: BipartiteDigraph, names: Iterable[str]) -> Dict[str, int]:
    return {name: d.degree(VertexId.parse(name)) for name in names}


def _check_d8(d8: BipartiteDigraph, results: List[AssertionResult]) -> None:
    _assertion(results, "d8_arc_count", d8.arc_count == 20, f"{d8.arc_count} arcs")
    high = _degrees(d8, ("X2", "X3", "Y0", "Y1"))
    low = _degrees(d8, ("X0", "X1", "Y2", "Y3"))
    _assertion(
        results,
        "d8_degrees",
        d8.a == 4 and set(high.values()) == {7} and set(low.values()) == {3},
        f"{high} {low}",
    )
    pairs = {frozenset((str(p.u), str(p.v))) for p in dominating_pairs(d8)}
    _assertion(results, "d8_dominating_pairs", pairs == D8_DOMINATING_PAIRS, f"{len(pairs)} pairs")
    _assertion(results, "d8_strong", strong_components(d8).strong)
    found = hamiltonian_cycle(d8)
    _assertion(results, "d8_not_hamiltonian", found is None, str(found) if found else "")
    bound = 2 * d8.a - 1
    _assertion(results, "d8_max_dominating_2a_minus_1", check_max_dominating(d8, bound).holds, f"bound {bound}")
    _assertion(results, "d8_violates_b2", not check_condition_bk(d8, 2).holds)
    partnered = {name: has_partner(d8, VertexId.parse(name)) for name in ("X2", "Y2")}
    _assertion(results, "d8_x2_y2_have_partners", all(partnered.values()), str(partnered))


def _check_d10(d10: BipartiteDigraph, results: List[AssertionResult]) -> None:
    ends = _degrees(d10, ("X0", "X4"))
    _assertion(results, "d10_end_degrees", set(ends.values()) == {2}, str(ends))
    _assertion(results, "d10_strong", strong_components(d10).strong)
    found = cycle_of_length(d10, 8)
    _assertion(results, "d10_no_8_cycle", found is None, str(found) if found else "")
    cycle = Cycle.parse("X1 Y1 X3 Y3 X2 Y2")
    _assertion(results, "d10_six_cycle", verify_cycle(d10, cycle), str(cycle))
    spectrum = even_cycle_spectrum(d10)
    _assertion(
        results,
        "d10_spectrum_has_2_and_6_not_8_or_10",
        {2, 6} <= set(spectrum) and not {8, 10} & set(spectrum),
        str(spectrum),
    )
    long_cycle = exists_nonhamiltonian_cycle_geq4(d10)
    _assertion(
        results,
        "d10_has_nonhamiltonian_cycle_geq4",
        long_cycle is not None and 4 <= len(cycle) <= d10.order - 2,
        str(long_cycle) if long_cycle else "",
    )
    _assertion(results, "d10_ug_not_two_connected", not underlying_is_two_connected(d10).two_connected)
    bound = 2 * d10.a - 2
    _assertion(results, "d10_max_dominating_2a_minus_2", check_max_dominating(d10, bound).holds, f"bound {bound}")

    missing = [f"{u}->{v}" for (u, v), ext in d10_single_arc_extensions() if cycle_of_length(ext, 8) is None]
    _assertion(results, "d10_single_arc_extensions_have_8_cycle", not missing, ", ".join(missing))

    limit = 2 * d10.a - 3
    failing, total = [], 0
    for arcs, ext in d10_back_arc_extensions():
        total += 1
        if not any(max(ext.degree(p.u), ext.degree(p.v)) <= limit for p in dominating_pairs(ext)):
            failing.append(" ".join(f"{u}->{v}" for u, v in arcs))
    _assertion(
        results,
        "d10_back_arc_extensions_have_low_dominating_pair",
        not failing,
        f"{total} arc sets checked" + (f"; failing: {'; '.join(failing)}" if failing else ""),
    )


def verify_paper(d8: Optional[BipartiteDigraph] = None, d10: Optional[BipartiteDigraph] = None) -> ExperimentReport:
    """Run the reference-digraph assertions plus short experiment smoke runs.

    `d8` / `d10` replace the built-in digraphs, so a mutated copy can be
    injected to confirm the suite notices.
    """
    started = time.perf_counter()
    results: List[AssertionResult] = []
    _check_d8(d8 if d8 is not None else build_d8(), results)
    _check_d10(d10 if d10 is not None else build_d10(), results)

    try:
        validate_wang_parameters(3, 1)
        _assertion(results, "wang_search_rejects_order_below_8", False, "a=3 accepted")
    except GeneratorError as e:
        _assertion(results, "wang_search_rejects_order_below_8", "below 8" in str(e), str(e))

    smoke = ExperimentConfig(a=4, k=2, seed=settings.default_seed, count=VERIFY_INSTANCES)
    for name in EXPERIMENTS[:4]:
        outcome = run_experiment(name, smoke)
        _assertion(
            results,
            f"{name}_smoke",
            not outcome.violations,
            f"{outcome.instance_count} instances, {len(outcome.violations)} violations",
        )

    report = ExperimentReport(
        experiment="verify_paper",
        tool_version=__version__,
        generator=GENERATOR_NAME,
        config={"smoke_instances": VERIFY_INSTANCES, "seed": smoke.seed},
        instance_count=len(results),
        assertions=results,
        passed=all(r.passed for r in results),
    )
    return _finish(report, started)


# Instance experiments

Checker = Callable[[BipartiteDigraph, int, str], Tuple[List[Violation], Counter]]


def _violation(graph: str, prop: str, certificate: Dict[str, Any], severity: str = "bug") -> Violation:
    return Violation(graph=graph, failed_property=prop, certificate=certificate, severity=severity)


def _check_cycle_factor(d: BipartiteDigraph, k: int, graph: str) -> Tuple[List[Violation], Counter]:
    counts: Counter = Counter(instances_checked=1)
    result = cycle_factor(d)
    if isinstance(result, FactorFailure):
        return [_violation(graph, "cycle_factor", cycle_factor_report(result).model_dump())], counts
    if not verify_cycle_factor(d, result):
        return [_violation(graph, "cycle_factor_certificate", {"cycles": [str(c) for c in result.cycles]})], counts
    counts["factor_cycles"] += len(result.cycles)
    return [], counts


def _check_partner_existence(d: BipartiteDigraph, k: int, graph: str) -> Tuple[List[Violation], Counter]:
    counts: Counter = Counter()
    if hamiltonian_cycle(d) is not None:
        counts["skipped_hamiltonian"] += 1
        return [], counts
    counts["instances_checked"] += 1
    lonely = [str(v) for v in d.vertices() if not has_partner(d, v)]
    if lonely:
        return [_violation(graph, "partner_existence", {"vertices_without_partner": lonely})], counts
    return [], counts


def _check_long_cycle(d: BipartiteDigraph, k: int, graph: str) -> Tuple[List[Violation], Counter]:
    counts: Counter = Counter()
    if is_directed_cycle(d):
        counts["skipped_directed_cycle"] += 1
        return [], counts
    counts["instances_checked"] += 1
    found = exists_nonhamiltonian_cycle_geq4(d)
    if found is None:
        lengths = list(range(4, d.order - 1, 2))
        return [_violation(graph, "nonhamiltonian_cycle_geq4", {"lengths_exhausted": lengths})], counts
    counts[f"found_length_{len(found)}"] += 1
    return [], counts


def _check_two_connectivity_bypass(d: BipartiteDigraph, k: int, graph: str) -> Tuple[List[Violation], Counter]:
    counts: Counter = Counter(instances_checked=1)
    violations = []
    two = underlying_is_two_connected(d)
    if not two.two_connected:
        violations.append(_violation(graph, "ug_two_connected", two_connectivity_report(two).model_dump()))
    for cycle in sample_cycles(d, d.order - 2, settings.bypass_cycles_per_instance):
        counts["cycles_sampled"] += 1
        bypass = find_bypass(d, cycle)
        if bypass is None or not verify_bypass(d, bypass):
            violations.append(_violation(graph, "bypass_exists", {"cycle": str(cycle)}))
    return violations, counts


def _check_proposition(d: BipartiteDigraph, k: int, graph: str) -> Tuple[List[Violation], Counter]:
    counts: Counter = Counter(instances_checked=1)
    report = check_proposition_1(d, k)
    if check_condition_bk(d, k).holds and not report.holds:
        return [_violation(graph, "proposition_1", report.model_dump())], counts
    counts["partnered_vertices"] += int(not report.vacuous)
    return [], counts


def _check_wang(d: BipartiteDigraph, k: int, graph: str) -> Tuple[List[Violation], Counter]:
    counts: Counter = Counter(instances_checked=1)
    if hamiltonian_cycle(d) is not None:
        counts["hamiltonian"] += 1
        return [], counts
    certificate = {
        "bk": check_condition_bk(d, k).model_dump(),
        "strong": connectivity_report(strong_components(d)).model_dump(),
        "hamiltonian_cycle": None,
        "hamiltonian_search": "exhausted",
    }
    return [_violation(graph, "hamiltonian", certificate, severity="finding")], counts


CHECKERS: Dict[str, Checker] = {
    "cycle_factor": _check_cycle_factor,
    "partner_existence": _check_partner_existence,
    "long_cycle": _check_long_cycle,
    "two_connectivity_bypass": _check_two_connectivity_bypass,
    "proposition_1": _check_proposition,
    "wang_search": _check_wang,
}


def _instance_task(task: Tuple[str, Dict[str, Any]]) -> Dict[str, Any]:
    """Generate one instance from its config and run one checker; picklable for the pool."""
    name, raw = task
    config = GeneratorConfig(**raw)
    d = random_bk_digraph(config)
    if d is None:
        return {"generated": False, "violations": [], "counts": {}, "graph": None, "arcs": 0}
    graph = serialize(d)
    violations, counts = CHECKERS[name](d, config.k, graph)
    return {
        "generated": True,
        "violations": [v.model_dump() for v in violations],
        "counts": dict(counts),
        "graph": graph,
        "arcs": d.arc_count,
    }


def _map(tasks: List[Tuple[str, Dict[str, Any]]]) -> List[Dict[str, Any]]:
    workers = max(1, settings.threads)
    if workers == 1 or len(tasks) < 2:
        return [_instance_task(t) for t in tasks]
    chunk = max(1, len(tasks) // (workers * 4))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_instance_task, tasks, chunksize=chunk))


def _tasks(name: str, config: ExperimentConfig, a: int, k: int) -> List[Tuple[str, Dict[str, Any]]]:
    base = config.model_dump(include={"arc_probability", "max_attempts", "repair_iterations"})
    return [
        (name, {**base, "a": a, "k": k, "seed": (config.seed + i) % 2**64})
        for i in range(config.count)
    ]


def _aggregate(outcomes: List[Dict[str, Any]]) -> Tuple[int, int, List[Violation], Counter]:
    generated = failures = 0
    violations: List[Violation] = []
    counts: Counter = Counter()
    for outcome in outcomes:
        if not outcome["generated"]:
            failures += 1
            continue
        generated += 1
        violations.extend(Violation(**v) for v in outcome["violations"])
        counts.update(outcome["counts"])
    violations.sort(key=lambda v: (v.graph, v.failed_property, str(v.certificate)))
    return generated, failures, violations, counts


def _finish(report: ExperimentReport, started: float) -> ExperimentReport:
    report.wall_time_s = round(time.perf_counter() - started, 3)
    report.timestamp = datetime.now(timezone.utc).isoformat()
    return report


def resolve_experiment(name: str) -> str:
    resolved = EXPERIMENT_ALIASES.get(name, name)
    if resolved not in EXPERIMENTS:
        choices = ", ".join([*EXPERIMENTS, *EXPERIMENT_ALIASES])
        raise ParameterError(f"unknown experiment {name!r}; choose from {choices}")
    return resolved


def run_experiment(name: str, config: ExperimentConfig) -> ExperimentReport:
    """Check one proved statement on `config.count` generated strong B_k instances."""
    started = time.perf_counter()
    experiment = resolve_experiment(name)
    cells = PROPOSITION_GRID if experiment == "proposition_1" else ((config.a, config.k),)
    for a, k in cells:
        validate_wang_parameters(a, k)
        warn_wang_range(a, k)

    tasks = [task for a, k in cells for task in _tasks(experiment, config, a, k)]
    logger.info("experiment_started", experiment=experiment, instances=len(tasks), threads=settings.threads)
    generated, failures, violations, counts = _aggregate(_map(tasks))

    coverage: Dict[str, Any] = dict(sorted(counts.items()))
    coverage["insufficient_instances"] = generated < len(tasks)
    echo = config.model_dump(exclude={"budget"})
    if experiment == "proposition_1":
        echo["grid"] = [list(cell) for cell in cells]

    report = ExperimentReport(
        experiment=experiment,
        tool_version=__version__,
        generator=GENERATOR_NAME,
        config=echo,
        instance_count=generated,
        generation_failures=failures,
        violations=violations,
        coverage=coverage,
        passed=not violations,
    )
    logger.info(
        "experiment_completed",
        experiment=experiment,
        instances=generated,
        generation_failures=failures,
        violations=len(violations),
    )
    return _finish(report, started)


def _search_enumerate(config: ExperimentConfig) -> Tuple[int, List[Violation], Dict[str, Any], bool]:
    search = Enumeration(config.a, config.k, config.budget)
    violations: List[Violation] = []
    hamiltonian = 0
    for d in search:
        found, _ = _check_wang(d, config.k, serialize(d))
        violations.extend(found)
        hamiltonian += not found
    coverage = {**search.coverage(), "hamiltonian": hamiltonian}
    return search.emitted, violations, coverage, search.completed


def wang_search(config: ExperimentConfig, mode: str = "random") -> ExperimentReport:
    """Look for strong non-Hamiltonian B_k digraphs; hits are findings, not bugs."""
    if mode not in SEARCH_MODES:
        raise ParameterError(f"unknown search mode {mode!r}; choose from {', '.join(SEARCH_MODES)}")
    validate_wang_parameters(config.a, config.k)
    warn_wang_range(config.a, config.k)
    started = time.perf_counter()
    failures = 0
    completed = True

    if mode == "random":
        outcomes = _map(_tasks("wang_search", config, config.a, config.k))
        instances, failures, violations, counts = _aggregate(outcomes)
        arcs = [o["arcs"] for o in outcomes if o["generated"]]
        coverage: Dict[str, Any] = {
            "instances_checked": counts.get("instances_checked", 0),
            "hamiltonian": counts.get("hamiltonian", 0),
            "distinct_instances": len({o["graph"] for o in outcomes if o["generated"]}),
            "arc_count_min": min(arcs) if arcs else None,
            "arc_count_max": max(arcs) if arcs else None,
        }
        echo = config.model_dump(exclude={"budget"})
    else:
        instances, violations, coverage, completed = _search_enumerate(config)
        violations.sort(key=lambda v: v.graph)
        echo = config.model_dump(include={"a", "k", "budget"})

    echo["mode"] = mode
    report = ExperimentReport(
        experiment="wang_search",
        tool_version=__version__,
        generator=GENERATOR_NAME,
        config=echo,
        instance_count=instances,
        generation_failures=failures,
        violations=violations,
        coverage=coverage,
        completed=completed,
        passed=not violations,
    )
    logger.info("wang_search_completed", mode=mode, instances=instances, findings=len(violations), completed=completed)
    return _finish(report, started)


def recheck_violation(violation: Violation, k: int) -> bool:
    """Re-run the failed property from the violation's serialized digraph alone."""
    d = parse(violation.graph)
    failed, _ = CHECKERS[_PROPERTY_CHECKER[violation.failed_property]](d, k, violation.graph)
    return any(v.failed_property == violation.failed_property for v in failed)


_PROPERTY_CHECKER = {
    "cycle_factor": "cycle_factor",
    "cycle_factor_certificate": "cycle_factor",
    "partner_existence": "partner_existence",
    "nonhamiltonian_cycle_geq4": "long_cycle",
    "ug_two_connected": "two_connectivity_bypass",
    "bypass_exists": "two_connectivity_bypass",
    "proposition_1": "proposition_1",
    "hamiltonian": "wang_search",
}
