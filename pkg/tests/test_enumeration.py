from itertools import islice

import pytest

from bbd.errors import ParameterError
from bbd.services.conditions import check_condition_bk
from bbd.services.connectivity import is_strongly_connected
from bbd.services.constructions import complete_bipartite
from bbd.services.enumeration import Enumeration, enumerate_bk


def test_complete_bipartite_is_emitted_first():
    assert next(islice(enumerate_bk(4, 2, budget=100), 1)) == complete_bipartite(4)
    assert next(islice(enumerate_bk(5, 2, budget=100), 1)) == complete_bipartite(5)


def test_budgeted_stream_is_certificate_valid():
    search = enumerate_bk(4, 2, budget=400)
    emitted = list(search)
    assert emitted
    assert not search.completed
    assert search.nodes_explored == 400
    assert search.emitted == len(emitted)
    for d in emitted:
        assert check_condition_bk(d, 2).holds
        assert is_strongly_connected(d)


def test_dedup_only_drops_duplicates():
    deduped = enumerate_bk(4, 2, budget=400)
    everything = enumerate_bk(4, 2, budget=400, dedup=False)
    kept, full = list(deduped), list(everything)
    assert len(kept) + deduped.duplicates_skipped == len(full)
    assert everything.duplicates_skipped == 0
    assert deduped.coverage()["dedup"] == "isomorphism"


@pytest.mark.parametrize("a", [3, 6])
def test_unsupported_half_order(a):
    with pytest.raises(ParameterError):
        Enumeration(a, 2, budget=10)


def test_stream_is_single_use():
    search = enumerate_bk(4, 2, budget=50)
    list(search)
    with pytest.raises(ParameterError):
        iter(search)
