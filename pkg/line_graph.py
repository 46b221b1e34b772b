"""
Oriented edge alphabet, the oriented line graph and its adjacency matrix T.

Symbols are 0-based: symbol k < m is edge k in input order oriented as
written, symbol k + m is its inverse. Labels e1..e(2m) follow the usual
1-based naming.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from config import LabSettings, resolve
from errors import ResourceGuardError, SymbolError
from graph_core import Graph

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OrientedEdgeAlphabet:
    """The 2m oriented edges of a graph"""

    graph: Graph

    @property
    def m(self) -> int:
        return self.graph.m

    @property
    def size(self) -> int:
        return 2 * self.graph.m

    @property
    def symbols(self) -> range:
        return range(self.size)

    def edge(self, symbol: int) -> Tuple[str, str]:
        """(initial, terminal) vertex pair of a symbol"""
        self.check(symbol)
        m = self.m
        u, v = self.graph.edges[symbol % m]
        return (u, v) if symbol < m else (v, u)

    def initial(self, symbol: int) -> str:
        return self.edge(symbol)[0]

    def terminal(self, symbol: int) -> str:
        return self.edge(symbol)[1]

    def inverse(self, symbol: int) -> int:
        self.check(symbol)
        return (symbol + self.m) % self.size

    def label(self, symbol: int) -> str:
        return f"e{symbol + 1}"

    def check(self, symbol) -> None:
        if not isinstance(symbol, (int, np.integer)) or not 0 <= symbol < self.size:
            raise SymbolError(f"unknown symbol {symbol!r}; alphabet has {self.size} symbols")

    @cached_property
    def successors(self) -> Dict[int, Tuple[int, ...]]:
        """Symbols that may follow each symbol without backtracking"""
        outgoing: Dict[str, List[int]] = {v: [] for v in self.graph.vertices}
        for s in self.symbols:
            outgoing[self.initial(s)].append(s)
        return {
            s: tuple(f for f in outgoing[self.terminal(s)] if f != self.inverse(s))
            for s in self.symbols
        }

    def to_dict(self) -> Dict:
        return {
            "size": self.size,
            "symbols": [
                {"index": s, "label": self.label(s), "initial": self.initial(s),
                 "terminal": self.terminal(s), "inverse": self.inverse(s)}
                for s in self.symbols
            ],
        }


@dataclass(frozen=True)
class HashimotoMatrix:
    """Non-backtracking edge adjacency: T[e, f] = 1 iff t(e) = i(f) and i(e) != t(f)"""

    alphabet: OrientedEdgeAlphabet
    entries: np.ndarray

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    def row_sums(self) -> List[int]:
        return [int(x) for x in self.entries.sum(axis=1)]

    def column_sums(self) -> List[int]:
        return [int(x) for x in self.entries.sum(axis=0)]

    def arc_count(self) -> int:
        return int(self.entries.sum())

    def degree_sum(self) -> int:
        """In-degree plus out-degree over all vertices of the oriented line graph"""
        return 2 * self.arc_count()

    def to_digraph(self) -> nx.DiGraph:
        digraph = nx.DiGraph()
        digraph.add_nodes_from(range(self.size))
        rows, cols = np.nonzero(self.entries)
        digraph.add_edges_from(zip(rows.tolist(), cols.tolist()))
        return digraph

    def is_irreducible(self) -> bool:
        return self.size > 0 and nx.is_strongly_connected(self.to_digraph())

    def is_symmetric(self) -> bool:
        return bool(np.array_equal(self.entries, self.entries.T))

    def exact(self) -> np.ndarray:
        """Object-dtype copy holding Python ints"""
        return np.array(self.entries.tolist(), dtype=object)

    def to_dict(self) -> Dict:
        return {"size": self.size, "rows": self.entries.tolist()}


def build_alphabet(g: Graph) -> OrientedEdgeAlphabet:
    return OrientedEdgeAlphabet(g)


def build_hashimoto(alph: OrientedEdgeAlphabet) -> HashimotoMatrix:
    size = alph.size
    entries = np.zeros((size, size), dtype=np.int64)
    for e, followers in alph.successors.items():
        for f in followers:
            entries[e, f] = 1
    logger.debug(f"Built Hashimoto matrix of size {size} with {int(entries.sum())} arcs")
    return HashimotoMatrix(alph, entries)


def hashimoto_for(g: Graph) -> HashimotoMatrix:
    return build_hashimoto(build_alphabet(g))


def line_graph_degree_sum(g: Graph) -> int:
    """2 * sum over edges of (d_u + d_v - 2)"""
    return 2 * sum(g.degree[u] + g.degree[v] - 2 for u, v in g.edges)


def trace_powers(T: HashimotoMatrix, K: int) -> List[int]:
    """
    Exact traces tr(T^k) for k = 1..K.

    Args:
        T: Hashimoto matrix
        K: highest power, at least 1

    Returns:
        List of Python ints, index k-1 holds tr(T^k)
    """
    if K < 1:
        raise ValueError(f"K must be at least 1, got {K}")
    base = T.exact()
    power = base
    traces = [int(np.trace(power))]
    for _ in range(2, K + 1):
        power = power.dot(base)
        traces.append(int(np.trace(power)))
    return traces


def count_closed_walks_bruteforce(alph: OrientedEdgeAlphabet, k: int,
                                  custom_settings: Optional[LabSettings] = None) -> int:
    """
    Count closed non-backtracking walks of length k directly from the alphabet.

    Walks are sequences e_1..e_k with each step composable and not reversing,
    including the wrap from e_k back to e_1; each starting point counts.

    Raises:
        ResourceGuardError: when 2m * branch^(k-1) exceeds the enumeration guard
    """
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    lab = resolve(custom_settings)
    branch = max((len(f) for f in alph.successors.values()), default=0)
    work = alph.size * branch ** (k - 1)
    if work > lab.enumeration_guard:
        raise ResourceGuardError(
            f"closed-walk enumeration of length {k} needs up to {work} steps "
            f"(guard {lab.enumeration_guard})"
        )

    successors = alph.successors
    total = 0
    for start in alph.symbols:
        closing = set(s for s in alph.symbols if start in successors[s])
        stack: List[Tuple[int, int]] = [(start, 1)]
        while stack:
            current, length = stack.pop()
            if length == k:
                if current in closing:
                    total += 1
                continue
            for nxt in successors[current]:
                stack.append((nxt, length + 1))
    return total


def composable(alph: OrientedEdgeAlphabet, symbols: Sequence[int]) -> bool:
    """Consecutive symbols meet head to tail"""
    return all(alph.terminal(a) == alph.initial(b) for a, b in zip(symbols, symbols[1:]))
