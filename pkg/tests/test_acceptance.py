"""Experiment runs at full volume. Deselected by default; run with `pytest -m slow`."""

import pytest

from bbd.schemas.generator import ExperimentConfig
from bbd.services.bbd_format import parse
from bbd.services.conditions import check_condition_bk
from bbd.services.connectivity import is_strongly_connected
from bbd.services.cycles import hamiltonian_cycle
from bbd.services.experiments import PROPOSITION_GRID, recheck_violation, run_experiment, wang_search

pytestmark = pytest.mark.slow

# (a, instances) per half order, fixed seeds
VOLUMES = [(4, 10_000), (5, 1_000), (6, 1_000)]
SEED = 20240601


def _assert_clean(report, count):
    assert report.violations == []
    assert report.passed
    assert report.instance_count + report.generation_failures == count
    assert report.instance_count > 0


@pytest.mark.parametrize("a,count", VOLUMES)
def test_cycle_factor_at_volume(a, count):
    report = run_experiment("cycle_factor", ExperimentConfig(a=a, k=2, seed=SEED, count=count))
    _assert_clean(report, count)
    assert report.coverage["instances_checked"] == report.instance_count


@pytest.mark.parametrize("experiment", ["partner_existence", "long_cycle", "two_connectivity_bypass"])
@pytest.mark.parametrize("a,count", VOLUMES)
def test_structural_experiments_at_volume(experiment, a, count):
    report = run_experiment(experiment, ExperimentConfig(a=a, k=2, seed=SEED, count=count))
    _assert_clean(report, count)


def test_proposition_1_over_the_grid():
    per_cell = 250
    report = run_experiment("proposition_1", ExperimentConfig(a=4, k=2, seed=SEED, count=per_cell))
    _assert_clean(report, per_cell * len(PROPOSITION_GRID))
    assert report.instance_count >= 1_000 - report.generation_failures


def test_wang_search_random_at_volume():
    count = 10_000
    report = wang_search(ExperimentConfig(a=4, k=2, seed=SEED, count=count), mode="random")
    assert report.completed
    assert report.instance_count + report.generation_failures == count
    coverage = report.coverage
    assert coverage["instances_checked"] == report.instance_count
    assert coverage["hamiltonian"] + len(report.violations) == report.instance_count
    assert coverage["arc_count_min"] <= coverage["arc_count_max"]
    for violation in report.violations:
        d = parse(violation.graph)
        assert violation.severity == "finding"
        assert check_condition_bk(d, 2).holds
        assert is_strongly_connected(d)
        assert hamiltonian_cycle(d) is None
        assert recheck_violation(violation, k=2)
