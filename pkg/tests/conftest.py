import os
import sys

import networkx as nx
import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from graph_core import (
    Graph,
    billiard_graph,
    complete_bipartite_graph,
    complete_graph,
    parse_edge_list,
    theta_graph,
    validate,
)

K4_TEXT = "1 2\n2 3\n3 1\n1 4\n2 4\n3 4\n"
TRIANGLE_TEXT = "1 2\n2 3\n3 1\n"
PATH_TEXT = "1 2\n2 3\n"


def random_valid_graphs(count=20, seed=2024):
    """Seeded connected graphs with min degree 2, a degree-3 vertex, n in 5..7 and m <= 10"""
    graphs = []
    attempt = 0
    while len(graphs) < count:
        if attempt > 10000:
            raise RuntimeError("could not draw enough valid random graphs")
        n = 5 + attempt % 3
        m = min(n + 1 + (attempt // 3) % 4, 10, n * (n - 1) // 2)
        candidate = nx.gnm_random_graph(n, m, seed=seed + attempt)
        attempt += 1
        if candidate.number_of_edges() == 0:
            continue
        g = Graph.from_networkx(candidate)
        if g.n == n and validate(g).passed:
            graphs.append(g)
    return graphs


RANDOM_GRAPHS = random_valid_graphs()


@pytest.fixture
def k4():
    return parse_edge_list(K4_TEXT)


@pytest.fixture
def billiard():
    return billiard_graph()


@pytest.fixture
def k23():
    return complete_bipartite_graph(2, 3)


@pytest.fixture
def theta():
    return theta_graph(4)


@pytest.fixture
def triangle():
    return parse_edge_list(TRIANGLE_TEXT)


@pytest.fixture
def path():
    return parse_edge_list(PATH_TEXT)


@pytest.fixture
def suite_graphs():
    """Named graphs every cross-route check runs on"""
    named = [("K4", complete_graph(4)), ("billiard", billiard_graph()), ("K23", complete_bipartite_graph(2, 3))]
    named += [(f"random{i}", g) for i, g in enumerate(RANDOM_GRAPHS)]
    return named


@pytest.fixture
def graph_file(tmp_path):
    def write(text, name="graph.txt"):
        target = tmp_path / name
        target.write_text(text, encoding="utf-8")
        return str(target)
    return write
