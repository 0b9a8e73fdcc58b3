import networkx as nx
import pytest

from core.services.independent_set import independence_bound, turan_weighted_is

def test_path_takes_both_ends() -> None:
    graph = nx.path_graph(["a", "b", "c"])
    assert turan_weighted_is(graph) == {"a", "c"}
    assert independence_bound(graph) == pytest.approx(1 / 2 + 1 / 3 + 1 / 2)

def test_heavy_star_centre_wins() -> None:
    graph = nx.star_graph(3)
    graph.nodes[0]["weight"] = 10.0
    assert turan_weighted_is(graph) == {0}

def test_empty_graph() -> None:
    assert turan_weighted_is(nx.Graph()) == set()

@pytest.mark.parametrize("seed", range(10))
def test_greedy_meets_weighted_bound(seed) -> None:
    graph = nx.gnp_random_graph(12, 0.3, seed=seed)
    for v in graph.nodes:
        graph.nodes[v]["weight"] = 1.0 + (v * 7 + seed) % 5
    chosen = turan_weighted_is(graph)
    assert graph.subgraph(chosen).number_of_edges() == 0
    weight = sum(graph.nodes[v]["weight"] for v in chosen)
    assert weight >= independence_bound(graph) - 1e-9
