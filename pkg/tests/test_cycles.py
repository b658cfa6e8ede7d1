import networkx as nx
import pytest

from bbd.config import settings
from bbd.errors import CapExceededError, InvalidCycleError, ParameterError
from bbd.services.constructions import complete_bipartite, directed_cycle
from bbd.services.cycles import (
    cycle_of_length,
    even_cycle_spectrum,
    exists_nonhamiltonian_cycle_geq4,
    find_bypass,
    hamiltonian_cycle,
    iter_cycles,
    sample_cycles,
)
from bbd.services.walks import Bypass, Cycle, is_directed_cycle, verify_bypass, verify_cycle

from conftest import sample, to_networkx


@pytest.mark.parametrize("method", ["auto", "dp", "branch_and_bound"])
def test_d8_is_not_hamiltonian(d8, method):
    assert hamiltonian_cycle(d8, method=method) is None


def test_directed_cycle_is_hamiltonian():
    found = hamiltonian_cycle(directed_cycle(3))
    assert str(found) == "X0 Y0 X1 Y1 X2 Y2"


def test_complete_bipartite_one_is_a_two_cycle():
    assert str(hamiltonian_cycle(complete_bipartite(1))) == "X0 Y0"


def test_d10_has_no_8_cycle(d10):
    assert cycle_of_length(d10, 8) is None
    assert verify_cycle(d10, Cycle.parse("X1 Y1 X3 Y3 X2 Y2"))
    assert 8 not in even_cycle_spectrum(d10)
    assert cycle_of_length(d10, 6) is not None


def test_spectra():
    assert even_cycle_spectrum(complete_bipartite(4)) == [2, 4, 6, 8]
    assert even_cycle_spectrum(directed_cycle(4)) == [8]


@pytest.mark.parametrize("m", [3, 0, 10])
def test_cycle_of_length_rejects_bad_lengths(d8, m):
    with pytest.raises(ParameterError):
        cycle_of_length(d8, m)


def test_cap_exceeded():
    with pytest.raises(CapExceededError, match="cap exceeded"):
        hamiltonian_cycle(complete_bipartite(settings.solver_max_half_order + 1))


def test_dp_and_branch_and_bound_agree(small_digraphs):
    for d in small_digraphs:
        by_dp = hamiltonian_cycle(d, method="dp")
        by_search = hamiltonian_cycle(d, method="branch_and_bound")
        assert (by_dp is None) == (by_search is None)
        for found in (by_dp, by_search):
            if found is not None:
                assert len(found) == d.order
                assert verify_cycle(d, found)


def test_dp_state_limit_falls_back(monkeypatch):
    monkeypatch.setattr(settings, "dp_state_limit", 1)
    found = hamiltonian_cycle(complete_bipartite(4))
    assert found is not None and len(found) == 8


def test_unknown_method(d8):
    with pytest.raises(ParameterError):
        hamiltonian_cycle(d8, method="guess")


def test_spectrum_matches_networkx():
    for d in sample(120, max_a=4, seed=3):
        lengths = {len(c) for c in nx.simple_cycles(to_networkx(d))}
        assert even_cycle_spectrum(d) == sorted(lengths)


def test_iter_cycles_lists_each_cycle_once():
    for d in sample(60, max_a=3, seed=21):
        ours = list(iter_cycles(d))
        assert len(ours) == sum(1 for _ in nx.simple_cycles(to_networkx(d)))
        assert len({frozenset(c.arcs()) for c in ours}) == len(ours)
        assert all(verify_cycle(d, c) for c in ours)


def test_sample_cycles_rotates_through_start_vertices():
    d = complete_bipartite(3)
    picked = sample_cycles(d, 4, 6)
    assert len(picked) == 6
    assert [str(c.vertices[0]) for c in picked[:3]] == ["X0", "X1", "X2"]
    assert all(verify_cycle(d, c) and len(c) <= 4 for c in picked)
    assert len({frozenset(c.arcs()) for c in picked}) == 6


def test_sample_cycles_reaches_cycles_avoiding_x0(d10):
    picked = sample_cycles(d10, d10.order - 2, 20)
    assert len({c.vertices[0] for c in picked}) > 1
    assert any(all(str(v) != "X0" for v in c.vertices) for c in picked)


def test_sample_cycles_respects_limit_and_total():
    d = directed_cycle(3)
    assert sample_cycles(d, 4, 20) == []
    assert len(sample_cycles(complete_bipartite(2), 4, 50)) == len(list(iter_cycles(complete_bipartite(2))))


def test_nonhamiltonian_long_cycle():
    assert exists_nonhamiltonian_cycle_geq4(directed_cycle(4)) is None
    found = exists_nonhamiltonian_cycle_geq4(complete_bipartite(4))
    assert len(found) == 4


def test_bypass_on_complete_bipartite():
    d = complete_bipartite(2)
    host = Cycle.parse("X0 Y0")
    bypass = find_bypass(d, host)
    assert str(bypass) == "X0 Y1 X1 Y0"
    assert verify_bypass(d, bypass)


def test_no_bypass_around_d10_pendant_cycle(d10):
    assert find_bypass(d10, Cycle.parse("X0 Y0")) is None


def test_bypass_rejects_bad_hosts(d8):
    with pytest.raises(InvalidCycleError):
        find_bypass(d8, Cycle.parse("X0 Y1"))
    with pytest.raises(InvalidCycleError):
        find_bypass(directed_cycle(2), Cycle.parse("X0 Y0 X1 Y1"))


def test_verify_cycle_rejections(d8):
    assert not verify_cycle(d8, Cycle.parse("X0 Y0 X0 Y0"))
    assert not verify_cycle(d8, Cycle.parse("X0 Y0 X1"))
    assert not verify_cycle(d8, Cycle.parse("X0 Y1"))
    assert not verify_cycle(d8, Cycle.parse("X0 Y7"))


def test_verify_bypass_rejects_interior_on_host():
    d = complete_bipartite(2)
    host = Cycle.parse("X0 Y0")
    assert not verify_bypass(d, Bypass(path=Cycle.parse("X0 Y0 X1").vertices, host=host))


def test_is_directed_cycle(d8):
    assert is_directed_cycle(directed_cycle(5))
    assert not is_directed_cycle(d8)
