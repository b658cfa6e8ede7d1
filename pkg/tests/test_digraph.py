import pytest

from bbd.errors import DigraphError
from bbd.services.digraph import BipartiteDigraph, Side, VertexId, new_digraph

from conftest import X, Y


def test_new_digraph_is_empty():
    d = new_digraph(3)
    assert d.order == 6
    assert d.arc_count == 0
    assert all(d.degree(v) == 0 for v in d.vertices())


@pytest.mark.parametrize("a", [0, -1, 65])
def test_new_digraph_rejects_half_order(a):
    with pytest.raises(DigraphError):
        new_digraph(a)


def test_add_arc_and_duplicate():
    d = new_digraph(2)
    assert d.add_arc(X(0), Y(1)) is True
    assert d.add_arc(X(0), Y(1)) is False
    assert d.arc_count == 1
    assert d.has_arc(X(0), Y(1))
    assert not d.has_arc(Y(1), X(0))


def test_add_arc_rejects_same_side_and_range():
    d = new_digraph(2)
    with pytest.raises(DigraphError):
        d.add_arc(X(0), X(1))
    with pytest.raises(DigraphError):
        d.add_arc(X(0), Y(2))


def test_remove_arc():
    d = BipartiteDigraph.from_arcs(2, [(X(0), Y(0)), (Y(0), X(1))])
    assert d.remove_arc(X(0), Y(0)) is True
    assert d.remove_arc(X(0), Y(0)) is False
    assert d.arc_count == 1
    assert d.in_degree(Y(0)) == 0


def test_degrees_of_d8(d8):
    for v in (X(2), X(3), Y(0), Y(1)):
        assert d8.degree(v) == 7
    for v in (X(0), X(1), Y(2), Y(3)):
        assert d8.degree(v) == 3
    assert d8.out_degree(X(2)) == 4
    assert d8.in_degree(X(0)) == 2


def test_degree_in_set(d8):
    # X2 <-> Y0 both ways, X2 -> Y3 only
    assert d8.degree_in_set(X(2), [Y(0), Y(3)]) == 3
    assert d8.degree_in_set(X(2), []) == 0


def test_neighbourhoods(d8):
    assert d8.out_neighbors(X(0)) == {Y(0)}
    assert d8.in_neighbors(X(0)) == {Y(0), Y(1)}
    assert d8.underlying_neighbors(Y(2)) == {X(2), X(3)}
    assert d8.out_neighbors_of_set([X(0), X(1)]) == {Y(0), Y(1)}
    assert d8.out_neighbors_of_set([]) == frozenset()


def test_out_neighbors_of_set_rejects_mixed_sides(d8):
    with pytest.raises(DigraphError):
        d8.out_neighbors_of_set([X(0), Y(0)])


def test_vertex_names():
    assert VertexId.parse("x3") == VertexId(Side.X, 3)
    assert str(VertexId.parse("Y10")) == "Y10"
    for bad in ("Z1", "X", "Xa", ""):
        with pytest.raises(DigraphError):
            VertexId.parse(bad)


def test_copy_is_independent(d8):
    twin = d8.copy()
    assert twin == d8
    twin.remove_arc(X(0), Y(0))
    assert twin != d8
    assert d8.has_arc(X(0), Y(0))


def test_canonical_arc_order():
    d = BipartiteDigraph.from_arcs(2, [(Y(1), X(0)), (X(1), Y(0)), (X(0), Y(1)), (Y(0), X(1))])
    assert [f"{u}->{v}" for u, v in d.arcs()] == ["X0->Y1", "X1->Y0", "Y0->X1", "Y1->X0"]


def test_degree_signature_is_label_free():
    d1 = BipartiteDigraph.from_arcs(2, [(X(0), Y(0))])
    d2 = BipartiteDigraph.from_arcs(2, [(X(1), Y(1))])
    assert d1.degree_signature() == d2.degree_signature()
