import pytest

from bbd.errors import ParameterError, UnknownConditionError
from bbd.services.conditions import (
    at_odd_boundary,
    check_condition_bk,
    check_max_dominating,
    check_min_degree,
    check_nonadjacent_sum,
    check_proposition_1,
    check_same_side_sum,
    check_sum_dominating,
    check_wang_theorem,
    dominating_pairs,
    evaluate_theorems,
    has_partner,
    partners,
    run_condition,
    wang_range_issues,
)
from bbd.services.constructions import complete_bipartite, directed_cycle

from conftest import X, Y, sample

D8_PAIRS = {
    ("X0", "X2"), ("X0", "X3"), ("X1", "X2"), ("X1", "X3"), ("X2", "X3"),
    ("Y0", "Y1"), ("Y0", "Y2"), ("Y0", "Y3"), ("Y1", "Y2"), ("Y1", "Y3"),
}


def test_d8_dominating_pairs(d8):
    pairs = dominating_pairs(d8)
    assert {(str(p.u), str(p.v)) for p in pairs} == D8_PAIRS
    assert len(pairs) == 10
    first = pairs[0]
    assert (first.u, first.v, first.witness_z) == (X(0), X(2), Y(0))


def test_partners(d8):
    assert partners(d8, X(0)) == {X(2), X(3)}
    assert has_partner(d8, Y(2))
    assert not has_partner(directed_cycle(4), X(0))


def test_bk_fails_on_d8_with_witness(d8):
    report = check_condition_bk(d8, 2)
    assert not report.holds
    assert report.witness.vertices == ["X0", "X2"]
    assert report.witness.degrees == [3, 7]
    assert report.witness.common_neighbour == "Y0"


def test_bk_holds_on_complete_bipartite():
    assert check_condition_bk(complete_bipartite(4), 2).holds


def test_bk_vacuous_on_directed_cycle():
    report = check_condition_bk(directed_cycle(4), 2)
    assert report.holds and report.vacuous


def test_bk_rejects_negative_k(d8):
    with pytest.raises(ParameterError):
        check_condition_bk(d8, -1)


def test_wang_theorem_is_b1(d8):
    report = check_wang_theorem(d8)
    assert report.condition == "wang_theorem"
    assert not report.holds
    assert check_wang_theorem(complete_bipartite(4)).holds


def test_max_dominating_on_reference_digraphs(d8, d10):
    assert check_max_dominating(d8, 7).holds
    assert not check_max_dominating(d8, 8).holds
    assert check_max_dominating(d10, 8).holds


def test_sum_dominating_uses_common_in_neighbours(d8):
    report = check_sum_dominating(d8, 12)
    assert not report.holds
    # X0 and X1 share no out-neighbour but both receive arcs from Y0 and Y1
    assert report.witness.vertices == ["X0", "X1"]
    assert report.witness.common_neighbour == "Y0"


def test_same_side_sum(d8):
    report = check_same_side_sum(d8, 13)
    assert report.witness.vertices == ["X0", "X1"]
    assert check_same_side_sum(d8, 6).holds


def test_nonadjacent_sum_on_complete_bipartite():
    d = complete_bipartite(3)
    assert check_nonadjacent_sum(d, 12).holds
    assert not check_nonadjacent_sum(d, 13).holds


def test_min_degree(d8):
    assert check_min_degree(d8, 3).holds
    report = check_min_degree(d8, 4)
    assert report.witness.vertices == ["X0"]


def test_proposition_1_on_complete_bipartite():
    assert check_proposition_1(complete_bipartite(4), 2).holds


def test_bk_implies_proposition_1_on_random_digraphs():
    for d in sample(300, max_a=6, seed=5):
        for k in range(0, d.a // 2 + 1):
            if check_condition_bk(d, k).holds:
                assert check_proposition_1(d, k).holds


def test_run_condition_dispatch(d8):
    assert run_condition(d8, "max_dominating", {"bound": 7}).holds
    assert not run_condition(d8, "Bk", {"k": 2.0}).holds
    assert run_condition(d8, "wang_theorem", {}).condition == "wang_theorem"


def test_run_condition_errors(d8):
    with pytest.raises(UnknownConditionError):
        run_condition(d8, "nope", {})
    with pytest.raises(ParameterError):
        run_condition(d8, "Bk", {})
    with pytest.raises(ParameterError):
        run_condition(d8, "Bk", {"k": 2.5})


def test_wang_range():
    assert wang_range_issues(4, 2) == []
    assert wang_range_issues(3, 2)
    assert wang_range_issues(6, 4)
    assert at_odd_boundary(5, 2)
    assert not at_odd_boundary(6, 3)


def test_theorem_table_on_d8(d8):
    table = {t.theorem: t for t in evaluate_theorems(d8)}
    applicable = table["max_dominating_2a_minus_1"]
    assert applicable.hypothesis_holds
    assert applicable.exception == "D8"
    assert not table["bk_cycle_factor"].hypothesis_holds
    assert "strong" not in table["wang_b1"].failed_requirements
