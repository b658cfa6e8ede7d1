import networkx as nx
import pytest

from bbd.schemas.generator import GeneratorConfig
from bbd.services.constructions import build_d8, build_d10, random_digraph
from bbd.services.digraph import BipartiteDigraph, Side, VertexId

PROBABILITIES = (0.2, 0.35, 0.5, 0.65, 0.8)


def sample(count: int, max_a: int, seed: int = 0) -> list[BipartiteDigraph]:
    """Seeded random digraphs cycling through half-orders 1..max_a and a few densities."""
    out = []
    for i in range(count):
        a = 1 + i % max_a
        p = PROBABILITIES[(i // max_a) % len(PROBABILITIES)]
        out.append(random_digraph(GeneratorConfig(a=a, seed=seed + i, arc_probability=p)))
    return out


def to_networkx(d: BipartiteDigraph) -> nx.DiGraph:
    g = nx.DiGraph()
    g.add_nodes_from(str(v) for v in d.vertices())
    g.add_edges_from((str(u), str(v)) for u, v in d.arcs())
    return g


def X(i: int) -> VertexId:
    return VertexId(Side.X, i)


def Y(j: int) -> VertexId:
    return VertexId(Side.Y, j)


@pytest.fixture
def d8() -> BipartiteDigraph:
    return build_d8()


@pytest.fixture
def d10() -> BipartiteDigraph:
    return build_d10()


@pytest.fixture
def no_xy_matching() -> BipartiteDigraph:
    # X0 and X1 both point only at Y0
    return BipartiteDigraph.from_arcs(2, [(X(0), Y(0)), (X(1), Y(0)), (Y(0), X(0)), (Y(1), X(1))])


@pytest.fixture(scope="session")
def small_digraphs() -> list[BipartiteDigraph]:
    return sample(500, max_a=5)
