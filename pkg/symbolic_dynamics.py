"""
Shift of finite type over the oriented edge alphabet: blocks, forbidden
words e e^-1, prime cycles, and the truncated Euler product.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import sympy

from config import LabSettings, resolve
from errors import ResourceGuardError, SymbolError, UnsupportedOrderError
from graph_core import Graph, require_valid
from line_graph import OrientedEdgeAlphabet, build_alphabet, composable, hashimoto_for, trace_powers
from series_engine import TruncatedSeries

logger = logging.getLogger(__name__)

# Walk P1 P1 Q P2 P2 on the billiard table (0-based symbols):
# P1 = e1 e6 e5^-1, Q = e1 e2, P2 = e3 e7 e8^-1
BILLIARD_P1 = (0, 5, 12)
BILLIARD_Q = (0, 1)
BILLIARD_P2 = (2, 6, 15)
BILLIARD_WALK = BILLIARD_P1 * 2 + BILLIARD_Q + BILLIARD_P2 * 2


@dataclass(frozen=True)
class Block:
    symbols: Tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.symbols)


@dataclass(frozen=True)
class PrimeCycle:
    """Canonical (least) rotation of a primitive closed non-backtracking walk"""

    symbols: Tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.symbols)

    def labels(self, alph: OrientedEdgeAlphabet) -> List[str]:
        return [alph.label(s) for s in self.symbols]


@dataclass(frozen=True)
class ForbiddenSet:
    blocks: Tuple[Tuple[int, int], ...]


@dataclass(frozen=True)
class Factor:
    """One piece of a factored block: a prime power or a connecting walk"""

    kind: str
    symbols: Tuple[int, ...]
    power: int = 1


def forbidden_blocks(alph: OrientedEdgeAlphabet) -> ForbiddenSet:
    return ForbiddenSet(tuple((e, alph.inverse(e)) for e in alph.symbols))


def _symbols_of(block) -> Tuple[int, ...]:
    return tuple(block.symbols) if isinstance(block, (Block, PrimeCycle)) else tuple(block)


def _step_ok(alph: OrientedEdgeAlphabet, e: int, f: int) -> bool:
    return alph.terminal(e) == alph.initial(f) and f != alph.inverse(e)


def is_admissible(block, alph: OrientedEdgeAlphabet) -> bool:
    """
    Consecutive symbols compose and no factor e e^-1 occurs.

    Raises:
        SymbolError: a symbol outside the alphabet
    """
    symbols = _symbols_of(block)
    for s in symbols:
        alph.check(s)
    if not composable(alph, symbols):
        return False
    forbidden = set(forbidden_blocks(alph).blocks)
    return not any(pair in forbidden for pair in zip(symbols, symbols[1:]))


def is_closed_cycle(symbols: Sequence[int], alph: OrientedEdgeAlphabet) -> bool:
    """Admissible including the wrap from the last symbol to the first"""
    symbols = tuple(symbols)
    return bool(symbols) and is_admissible(symbols, alph) and _step_ok(alph, symbols[-1], symbols[0])


def canonical_rotation(symbols: Sequence[int]) -> Tuple[int, ...]:
    symbols = tuple(symbols)
    return min(symbols[i:] + symbols[:i] for i in range(len(symbols))) if symbols else symbols


def is_primitive(symbols: Sequence[int]) -> bool:
    """Not a power of a shorter word"""
    symbols = tuple(symbols)
    L = len(symbols)
    return all(symbols[d:] + symbols[:d] != symbols for d in range(1, L) if L % d == 0)


def enumeration_work(alph: OrientedEdgeAlphabet, L: int) -> int:
    branch = max((len(f) for f in alph.successors.values()), default=0)
    return alph.size * branch ** max(L - 1, 0)


def enumerate_primes(g: Graph, L: int, custom_settings: Optional[LabSettings] = None) -> List[PrimeCycle]:
    """
    All prime cycles of length <= L, each once, sorted by (length, symbols).

    DFS from each start symbol s only visits symbols >= s, so every cycle
    is met from its least symbol; non-canonical rotations are dropped.

    Raises:
        ResourceGuardError: 2m * branch^(L-1) exceeds the enumeration guard
    """
    if L < 1:
        raise ValueError(f"L must be at least 1, got {L}")
    lab = resolve(custom_settings)
    require_valid(g)
    alph = build_alphabet(g)
    work = enumeration_work(alph, L)
    if work > lab.enumeration_guard:
        raise ResourceGuardError(
            f"prime enumeration to length {L} needs up to {work} steps (guard {lab.enumeration_guard})")

    successors = alph.successors
    primes: List[PrimeCycle] = []
    for start in alph.symbols:
        stack: List[Tuple[int, ...]] = [(start,)]
        while stack:
            path = stack.pop()
            last = path[-1]
            if start in successors[last] and is_primitive(path) and canonical_rotation(path) == path:
                primes.append(PrimeCycle(path))
            if len(path) < L:
                for nxt in successors[last]:
                    if nxt >= start:
                        stack.append(path + (nxt,))

    primes.sort(key=lambda p: (p.length, p.symbols))
    logger.debug(f"Enumerated {len(primes)} prime cycles up to length {L}")
    return primes


def euler_product_series(primes: Sequence[PrimeCycle], L: int, order: int) -> TruncatedSeries:
    """
    Product over primes of 1/(1 - x^length), truncated at order.

    Raises:
        UnsupportedOrderError: order > L, where the prime list is incomplete
    """
    if order > L:
        raise UnsupportedOrderError(f"order {order} exceeds the enumerated prime length {L}")
    product = TruncatedSeries.constant(1, order)
    for prime in primes:
        if prime.length > order:
            continue
        geometric = [Fraction(0)] * (order + 1)
        for k in range(0, order + 1, prime.length):
            geometric[k] = Fraction(1)
        product = product * TruncatedSeries(tuple(geometric))
    return product


def mobius(n: int) -> int:
    exponents = sympy.factorint(n).values()
    if any(e > 1 for e in exponents):
        return 0
    return -1 if len(exponents) % 2 else 1


def prime_counts_from_traces(g: Graph, L: int) -> Dict[int, int]:
    """
    Prime counts per length from traces by divisor inversion:
    l * #primes(l) = sum_{d | l} mu(d) tr(T^(l/d)).

    This is a consistency oracle for enumerate_primes, not a separate theory.
    """
    if L < 1:
        raise ValueError(f"L must be at least 1, got {L}")
    require_valid(g)
    traces = trace_powers(hashimoto_for(g), L)
    counts = {}
    for length in range(1, L + 1):
        total = sum(mobius(d) * traces[length // d - 1] for d in sympy.divisors(length))
        if total % length:
            raise ArithmeticError(f"trace inversion at length {length} is not divisible: {total}")
        counts[length] = total // length
    return counts


def prime_length_counts(primes: Sequence[PrimeCycle], L: int) -> Dict[int, int]:
    counts = {length: 0 for length in range(1, L + 1)}
    for prime in primes:
        counts[prime.length] += 1
    return counts


def factor_block(block, alph: OrientedEdgeAlphabet) -> List[Factor]:
    """
    Greedy factorisation of a finite walk into prime powers (a closed
    primitive cycle repeated at least twice) and connecting walks.

    Only a finite window is examined; other factorisations may exist.
    """
    symbols = _symbols_of(block)
    if not is_admissible(symbols, alph):
        raise SymbolError("block is not admissible")

    factors: List[Factor] = []
    pending: List[int] = []
    i = 0
    while i < len(symbols):
        match = None
        for period in range(1, (len(symbols) - i) // 2 + 1):
            word = symbols[i:i + period]
            if symbols[i + period:i + 2 * period] != word:
                continue
            if is_closed_cycle(word, alph) and is_primitive(word):
                match = word
                break
        if match is None:
            pending.append(symbols[i])
            i += 1
            continue

        power = 0
        while symbols[i:i + len(match)] == match:
            power += 1
            i += len(match)
        if pending:
            factors.append(Factor("walk", tuple(pending)))
            pending = []
        factors.append(Factor("prime", match, power))

    if pending:
        factors.append(Factor("walk", tuple(pending)))
    return factors
