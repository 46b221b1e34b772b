"""
Finite simple graphs and the standing hypotheses of the zeta machinery:
simple, connected, every degree at least two, and not a cycle graph.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

import networkx as nx

from errors import GraphParseError, GraphValidationError

logger = logging.getLogger(__name__)

# Five reflectors at the corners and centre of a square; the centre sees all four.
BILLIARD_EDGE_LIST = """\
# five-reflector billiard table
1 2
2 4
4 3
3 1
1 5
2 5
3 5
4 5
"""


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph with vertices in first-appearance order"""

    vertices: Tuple[str, ...]
    edges: Tuple[Tuple[str, str], ...]
    warnings: Tuple[str, ...] = field(default=(), compare=False)

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def index(self) -> Dict[str, int]:
        """Dense index 0..n-1 for each vertex"""
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def degree(self) -> Dict[str, int]:
        degrees = {v: 0 for v in self.vertices}
        for u, v in self.edges:
            degrees[u] += 1
            degrees[v] += 1
        return degrees

    def adjacency_matrix(self) -> List[List[int]]:
        size = self.n
        matrix = [[0] * size for _ in range(size)]
        for u, v in self.edges:
            i, j = self.index[u], self.index[v]
            matrix[i][j] += 1
            matrix[j][i] += 1
        return matrix

    def degree_list(self) -> List[int]:
        return [self.degree[v] for v in self.vertices]

    def to_networkx(self) -> nx.Graph:
        graph = nx.MultiGraph()
        graph.add_nodes_from(self.vertices)
        graph.add_edges_from(self.edges)
        return graph

    def relabel(self, mapping: Mapping[str, str]) -> "Graph":
        """Rename vertices; edge order is kept"""
        return build_graph((mapping[u], mapping[v]) for u, v in self.edges)

    @classmethod
    def from_networkx(cls, graph: nx.Graph) -> "Graph":
        return build_graph((str(u), str(v)) for u, v in graph.edges())


@dataclass(frozen=True)
class DegreeStats:
    """Extremes of d_u + d_v over the edges"""

    d: int
    D: int


@dataclass(frozen=True)
class HypothesisCheck:
    hypothesis: str
    passed: bool
    detail: str


@dataclass(frozen=True)
class ValidationReport:
    checks: Tuple[HypothesisCheck, ...]
    warnings: Tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def failures(self) -> List[str]:
        return [check.detail for check in self.checks if not check.passed]


def build_graph(pairs: Iterable[Tuple[str, str]]) -> Graph:
    """
    Assemble a Graph from vertex pairs, deduplicating undirected edges.

    Args:
        pairs: iterable of (u, v) vertex identifiers

    Returns:
        Graph with first-appearance vertex order and input edge order
    """
    vertices: List[str] = []
    seen_vertices = set()
    edges: List[Tuple[str, str]] = []
    seen_edges = set()
    warnings: List[str] = []

    for u, v in pairs:
        for vertex in (u, v):
            if vertex not in seen_vertices:
                seen_vertices.add(vertex)
                vertices.append(vertex)
        key = frozenset((u, v))
        if key in seen_edges:
            warnings.append(f"duplicate edge {u} {v} ignored")
            continue
        seen_edges.add(key)
        edges.append((u, v))

    for warning in warnings:
        logger.warning(warning)
    return Graph(tuple(vertices), tuple(edges), tuple(warnings))


def parse_edge_list(text: str) -> Graph:
    """
    Parse newline-separated "u v" records; '#' starts a comment line.

    Raises:
        GraphParseError: malformed line, self-loop, or no edges at all
    """
    pairs: List[Tuple[str, str]] = []
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise GraphParseError(f"expected two vertex ids, got {len(tokens)}: {raw!r}", line_number)
        u, v = tokens
        if u == v:
            raise GraphParseError(f"self-loop {u} {v}", line_number)
        pairs.append((u, v))

    if not pairs:
        raise GraphParseError("empty edge set")

    graph = build_graph(pairs)
    logger.debug(f"Parsed graph with n={graph.n}, m={graph.m}")
    return graph


def serialize_edge_list(g: Graph) -> str:
    return "".join(f"{u} {v}\n" for u, v in g.edges)


def validate(g: Graph) -> ValidationReport:
    """Check each standing hypothesis and report pass/fail with detail"""
    checks: List[HypothesisCheck] = []

    loops = [u for u, v in g.edges if u == v]
    parallel = len({frozenset(e) for e in g.edges}) != g.m
    simple_ok = not loops and not parallel
    checks.append(HypothesisCheck(
        "simple",
        simple_ok,
        "no self-loops or parallel edges" if simple_ok
        else f"self-loops at {loops}" if loops else "parallel edges present",
    ))

    connected = g.n > 0 and nx.is_connected(g.to_networkx())
    checks.append(HypothesisCheck(
        "connected",
        connected,
        "connected" if connected else "graph is disconnected",
    ))

    low = [v for v in g.vertices if g.degree[v] < 2]
    checks.append(HypothesisCheck(
        "min_degree_two",
        not low,
        "every vertex has degree >= 2" if not low
        else f"vertex of degree one or zero: {', '.join(low)}",
    ))

    max_degree = max(g.degree.values(), default=0)
    not_cycle = max_degree >= 3
    if not_cycle:
        detail = f"max degree {max_degree}"
    elif connected and not low:
        detail = "is a cycle graph"
    else:
        detail = f"max degree {max_degree} < 3"
    checks.append(HypothesisCheck("not_cycle", not_cycle, detail))

    return ValidationReport(tuple(checks), g.warnings)


def require_valid(g: Graph) -> None:
    """Raise GraphValidationError unless every hypothesis holds"""
    report = validate(g)
    if not report.passed:
        raise GraphValidationError(report)


def degree_stats(g: Graph) -> DegreeStats:
    sums = [g.degree[u] + g.degree[v] for u, v in g.edges]
    return DegreeStats(d=min(sums), D=max(sums))


def complete_graph(n: int) -> Graph:
    return Graph.from_networkx(nx.complete_graph(range(1, n + 1)))


def complete_bipartite_graph(a: int, b: int) -> Graph:
    return Graph.from_networkx(nx.complete_bipartite_graph(a, b))


def billiard_graph() -> Graph:
    return parse_edge_list(BILLIARD_EDGE_LIST)


def theta_graph(length: int) -> Graph:
    """Two hubs joined by three internally disjoint paths of `length` edges each"""
    if length < 2:
        raise ValueError(f"theta graph paths need at least 2 edges, got {length}")
    graph = nx.Graph()
    for branch in range(3):
        nx.add_path(graph, ["a"] + [f"{branch}.{i}" for i in range(1, length)] + ["b"])
    return Graph.from_networkx(graph)


def load_graph(path: str) -> Graph:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_edge_list(handle.read())
