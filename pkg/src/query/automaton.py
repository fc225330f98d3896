"""
Query Automaton Construction
Compiles a RegexAst into an epsilon-free Glushkov NFA and determinizes it

The deterministic automaton is the unambiguous query automaton used by the
all-shortest and counting evaluations: every word has at most one run, so
every database path maps to at most one product-graph path.
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Generic, Hashable, Iterable, List, Mapping, Optional, Set, TextIO, Tuple, TypeVar, Union

from .regex_parser import Concat, Epsilon, Plus, RegexAst, Star, Symbol, fold_ast, Optional as OptionalNode, Union as UnionNode

logger = logging.getLogger(__name__)

S = TypeVar("S", bound=Hashable)


@dataclass(frozen=True)
class Nfa(Generic[S]):
    """Epsilon-free automaton (Q, Sigma, delta, q0, F) with states 0..state_count-1"""

    state_count: int
    initial: int
    finals: FrozenSet[int]
    transitions: FrozenSet[Tuple[int, S, int]]
    _moves: Dict[Tuple[int, S], Tuple[int, ...]] = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        moves: Dict[Tuple[int, S], List[int]] = {}
        for source, symbol, target in self.transitions:
            moves.setdefault((source, symbol), []).append(target)
        object.__setattr__(self, "_moves", {key: tuple(sorted(targets)) for key, targets in moves.items()})

    @property
    def alphabet(self) -> Set[S]:
        return {symbol for _source, symbol, _target in self.transitions}

    def step(self, states: Iterable[int], symbol: S) -> FrozenSet[int]:
        """Set of states reachable from `states` by one `symbol` transition"""
        reached: Set[int] = set()
        for state in states:
            reached.update(self._moves.get((state, symbol), ()))
        return frozenset(reached)


@dataclass(frozen=True)
class Dfa(Generic[S]):
    """Deterministic automaton with a partial transition map; a missing transition rejects"""

    state_count: int
    initial: int
    finals: FrozenSet[int]
    transitions: Mapping[Tuple[int, S], int]
    _outgoing: Tuple[Tuple[Tuple[S, int], ...], ...] = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        outgoing: List[List[Tuple[S, int]]] = [[] for _ in range(self.state_count)]
        for (source, symbol), target in self.transitions.items():
            outgoing[source].append((symbol, target))
        object.__setattr__(self, "_outgoing", tuple(tuple(sorted(pairs)) for pairs in outgoing))

    @property
    def alphabet(self) -> Set[S]:
        return {symbol for _state, symbol in self.transitions}

    def step(self, state: int, symbol: S) -> Optional[int]:
        return self.transitions.get((state, symbol))

    def outgoing(self, state: int) -> Tuple[Tuple[S, int], ...]:
        """(symbol, target) pairs leaving `state`, sorted by symbol"""
        return self._outgoing[state]

    def is_final(self, state: int) -> bool:
        return state in self.finals

    def relabel(self, mapping: Mapping[S, Hashable]) -> "Dfa":
        """
        Rename transition symbols through `mapping`

        Symbols missing from the mapping are dropped. Used to bind a DFA over
        label strings to the label ids of one graph.
        """
        transitions = {
            (source, mapping[symbol]): target
            for (source, symbol), target in self.transitions.items()
            if symbol in mapping
        }
        return Dfa(self.state_count, self.initial, self.finals, transitions)


def glushkov(ast: RegexAst) -> Nfa[str]:
    """
    Glushkov (position) automaton of `ast`

    State 0 is the initial state; state i (1..m) is the i-th Symbol occurrence.
    The initial state is final iff the expression is nullable.
    """
    position_labels: List[str] = []
    follow: Dict[int, Set[int]] = {}

    def build(node: RegexAst, values: List[Tuple[bool, FrozenSet[int], FrozenSet[int]]]):
        # (nullable, first positions, last positions), children already built
        if isinstance(node, Symbol):
            position_labels.append(node.label)
            position = len(position_labels)
            follow[position] = set()
            return False, frozenset({position}), frozenset({position})
        if isinstance(node, Epsilon):
            return True, frozenset(), frozenset()
        if isinstance(node, UnionNode):
            (left_null, left_first, left_last), (right_null, right_first, right_last) = values
            return left_null or right_null, left_first | right_first, left_last | right_last
        if isinstance(node, Concat):
            (left_null, left_first, left_last), (right_null, right_first, right_last) = values
            for position in left_last:
                follow[position].update(right_first)
            first = left_first | right_first if left_null else left_first
            last = left_last | right_last if right_null else right_last
            return left_null and right_null, first, last
        if isinstance(node, (Star, Plus)):
            child_null, child_first, child_last = values[0]
            for position in child_last:
                follow[position].update(child_first)
            return isinstance(node, Star) or child_null, child_first, child_last
        if isinstance(node, OptionalNode):
            _child_null, child_first, child_last = values[0]
            return True, child_first, child_last
        raise TypeError(f"not a regex node: {node!r}")

    is_nullable, first, last = fold_ast(ast, build)

    transitions = {(0, position_labels[p - 1], p) for p in first}
    for source, targets in follow.items():
        transitions.update((source, position_labels[p - 1], p) for p in targets)
    finals = set(last)
    if is_nullable:
        finals.add(0)

    return Nfa(
        state_count=len(position_labels) + 1,
        initial=0,
        finals=frozenset(finals),
        transitions=frozenset(transitions),
    )


def determinize(nfa: Nfa) -> Dfa:
    """
    Subset construction restricted to subsets reachable from {initial}

    DFA states are numbered in breadth-first discovery order, exploring
    symbols in sorted order, so the numbering is reproducible.
    """
    symbols = sorted(nfa.alphabet)
    start = frozenset({nfa.initial})
    numbering: Dict[FrozenSet[int], int] = {start: 0}
    queue = deque([start])
    transitions: Dict[Tuple[int, str], int] = {}
    finals: Set[int] = set()

    while queue:
        subset = queue.popleft()
        state = numbering[subset]
        if subset & nfa.finals:
            finals.add(state)
        for symbol in symbols:
            target = nfa.step(subset, symbol)
            if not target:
                continue
            if target not in numbering:
                numbering[target] = len(numbering)
                queue.append(target)
            transitions[(state, symbol)] = numbering[target]

    logger.debug(f"Determinized {nfa.state_count}-state NFA into {len(numbering)}-state DFA")
    return Dfa(len(numbering), 0, frozenset(finals), transitions)


def accepts(dfa: Dfa, word: Iterable) -> bool:
    """Run `word` through `dfa`; a missing transition rejects"""
    state: Optional[int] = dfa.initial
    for symbol in word:
        state = dfa.step(state, symbol)
        if state is None:
            return False
    return dfa.is_final(state)


def dump_automaton(automaton: Union[Nfa, Dfa], sink: TextIO) -> None:
    """Write a header plus one `state<TAB>label<TAB>state` line per transition"""
    sink.write(f"# states {automaton.state_count}\n")
    sink.write(f"# initial {automaton.initial}\n")
    sink.write("# finals " + " ".join(str(state) for state in sorted(automaton.finals)) + "\n")
    if isinstance(automaton, Dfa):
        triples = [(source, symbol, target) for (source, symbol), target in automaton.transitions.items()]
    else:
        triples = list(automaton.transitions)
    for source, symbol, target in sorted(triples, key=lambda t: (t[0], str(t[1]), t[2])):
        sink.write(f"{source}\t{symbol}\t{target}\n")
