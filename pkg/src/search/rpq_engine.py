"""
RPQ Evaluation Engine
Evaluates regular path queries (v, regex, ?x) over a labelled graph

Every mode runs a breadth-first search over the product graph G x A, built
on the fly: product node (n, q) has an l-labelled edge to (n', q') whenever
(n, l, n') is a graph edge and the query automaton moves from q to q' on l.

Answers are finalized when a product node with a final automaton state is
popped. Because the automaton may have several final states, an answer
dictionary records the first depth at which each graph node was answered;
later arrivals of the same node through other final states are discarded.
"""

import logging
from collections import deque
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Set, Tuple, Union

from ..database.graph_store import LabelId, LabelledGraph, NodeId
from ..query.automaton import Dfa, determinize, glushkov
from ..query.regex_parser import RegexAst, parse_regex
from .path_dag import Path, PathDag
from .path_enumerator import AnswerPaths

logger = logging.getLogger(__name__)

ProductState = Tuple[NodeId, int]


@dataclass(frozen=True)
class Rpq:
    """
    Query (v, regex, ?x) compiled against one graph

    `dfa` is determinize(glushkov(ast)) with its symbols renamed to the
    graph's label ids; regex labels the graph never uses have no transitions.
    """

    source: NodeId
    ast: RegexAst
    dfa: Dfa


@dataclass
class CountEntry:
    node: NodeId
    state: int
    depth: int
    num_paths: int


def compile_rpq(graph: LabelledGraph, source: Union[str, NodeId], regex: Union[str, RegexAst]) -> Rpq:
    """
    Build an Rpq from a node name or id and regex text or syntax tree

    Raises:
        UnknownNodeError: the source node is not in the graph
        RegexSyntaxError: the regex text does not parse
    """
    source_id = graph.node_id(source) if isinstance(source, str) else source
    ast = parse_regex(regex) if isinstance(regex, str) else regex
    query_dfa = determinize(glushkov(ast))
    logger.info(f"Compiled query automaton with {query_dfa.state_count} states")
    return bind_rpq(graph, source_id, ast, query_dfa)


def bind_rpq(graph: LabelledGraph, source: NodeId, ast: RegexAst, query_dfa: Dfa) -> Rpq:
    """Attach an already compiled automaton over label strings to `graph` and `source`"""
    graph.check_node(source)
    label_ids = {symbol: graph.labels.get(symbol) for symbol in query_dfa.alphabet}
    dfa = query_dfa.relabel({symbol: label for symbol, label in label_ids.items() if label is not None})
    return Rpq(source, ast, dfa)


def product_neighbours(graph: LabelledGraph, dfa: Dfa, pstate: ProductState) -> List[Tuple[ProductState, LabelId]]:
    """
    Successors of a product node, ordered by label id then successor id

    Walks whichever side is smaller: the node's outgoing edges or the
    automaton state's outgoing labels.
    """
    node, state = pstate
    edges = graph.out_all[node]
    moves = dfa.outgoing(state)
    result: List[Tuple[ProductState, LabelId]] = []
    if len(edges) <= len(moves):
        for label, successor in edges:
            target = dfa.step(state, label)
            if target is not None:
                result.append(((successor, target), label))
    else:
        for label, target in moves:
            for successor in graph.successors(node, label):
                result.append(((successor, target), label))
    return result


def eval_reach(graph: LabelledGraph, query: Rpq) -> Set[NodeId]:
    """All nodes reachable from the source by a path whose label word the query accepts"""
    dfa = query.dfa
    start = (query.source, dfa.initial)
    visited = {start}
    open_queue = deque([start])
    answers: Set[NodeId] = set()

    while open_queue:
        current = open_queue.popleft()
        if dfa.is_final(current[1]):
            answers.add(current[0])
        for successor, _label in product_neighbours(graph, dfa, current):
            if successor not in visited:
                visited.add(successor)
                open_queue.append(successor)

    logger.debug(f"Reachability: {len(visited)} product nodes visited, {len(answers)} answers")
    return answers


def eval_single_path(graph: LabelledGraph, query: Rpq, on_solution: Callable[[NodeId, Path], None]) -> None:
    """
    One shortest witnessing path per answer, emitted in nondecreasing length

    Visited stores a single predecessor link (and the edge label) per product
    node; the path is rebuilt by following the links back to the start.
    """
    dfa = query.dfa
    start = (query.source, dfa.initial)
    # product node -> (predecessor product node, label)
    previous: Dict[ProductState, Optional[Tuple[ProductState, LabelId]]] = {start: None}
    depths: Dict[ProductState, int] = {start: 0}
    answers: Dict[NodeId, int] = {}
    open_queue = deque([start])

    while open_queue:
        current = open_queue.popleft()
        node, state = current
        if dfa.is_final(state) and node not in answers:
            answers[node] = depths[current]
            on_solution(node, _reconstruct_path(previous, current))
        for successor, label in product_neighbours(graph, dfa, current):
            if successor not in previous:
                previous[successor] = (current, label)
                depths[successor] = depths[current] + 1
                open_queue.append(successor)


def _reconstruct_path(previous: Dict[ProductState, Optional[Tuple[ProductState, LabelId]]], pstate: ProductState) -> Path:
    nodes = [pstate[0]]
    labels: List[LabelId] = []
    link = previous[pstate]
    while link is not None:
        pstate, label = link
        nodes.append(pstate[0])
        labels.append(label)
        link = previous[pstate]
    nodes.reverse()
    labels.reverse()
    return Path(tuple(nodes), tuple(labels))


def eval_all_shortest(
    graph: LabelledGraph,
    query: Rpq,
    on_solution: Optional[Callable[[NodeId, int, AnswerPaths], None]] = None,
) -> PathDag:
    """
    All shortest witnessing paths per answer, encoded in a product DAG

    `on_solution(node, depth, paths)` fires once per answer node when its
    first final-state entry is popped. `paths` enumerates the union over every
    final-state entry of that node at the same depth; with a deterministic
    automaton these path sets are disjoint, so each path is delivered once.
    """
    dfa = query.dfa
    finals = sorted(dfa.finals)
    dag = PathDag(labelled=True)
    start = (query.source, dfa.initial)
    root = dag.add_entry(start, query.source, 0, dfa.initial)
    answers: Dict[NodeId, int] = {}
    open_queue = deque([root])

    while open_queue:
        current_id = open_queue.popleft()
        current = dag.entries[current_id]

        if dfa.is_final(current.state) and current.node not in answers:
            answers[current.node] = current.depth
            if on_solution is not None:
                # every entry at this depth is already discovered and complete
                group = sorted(
                    entry_id
                    for entry_id in (dag.index.get((current.node, final)) for final in finals)
                    if entry_id is not None and dag.entries[entry_id].depth == current.depth
                )
                on_solution(current.node, current.depth, AnswerPaths(dag, group))

        next_depth = current.depth + 1
        for successor, label in product_neighbours(graph, dfa, (current.node, current.state)):
            entry_id = dag.index.get(successor)
            if entry_id is None:
                new_id = dag.add_entry(successor, successor[0], next_depth, successor[1])
                new_entry = dag.entries[new_id]
                new_entry.prev_list.append(current_id)
                new_entry.prev_labels.append(label)
                open_queue.append(new_id)
                continue
            existing = dag.entries[entry_id]
            if existing.depth == next_depth:
                existing.prev_list.append(current_id)
                existing.prev_labels.append(label)

    logger.debug(f"All-shortest evaluation: {len(dag)} product entries, {len(answers)} answers")
    return dag


def eval_count(
    graph: LabelledGraph,
    query: Rpq,
    on_solution: Callable[[NodeId, int, int], None],
) -> None:
    """
    Number of shortest witnessing paths per answer, without storing the paths

    New entries inherit the path count of their creator and same-depth
    revisits add theirs. Counts of all final-state entries of a node at its
    answer depth are summed. Counts are unbounded Python integers.
    """
    dfa = query.dfa
    finals = sorted(dfa.finals)
    start = (query.source, dfa.initial)
    visited: Dict[ProductState, CountEntry] = {start: CountEntry(query.source, dfa.initial, 0, 1)}
    answers: Dict[NodeId, int] = {}
    open_queue = deque([visited[start]])

    while open_queue:
        current = open_queue.popleft()

        if dfa.is_final(current.state) and current.node not in answers:
            answers[current.node] = current.depth
            total = 0
            for final in finals:
                entry = visited.get((current.node, final))
                if entry is not None and entry.depth == current.depth:
                    total += entry.num_paths
            on_solution(current.node, current.depth, total)

        next_depth = current.depth + 1
        for successor, _label in product_neighbours(graph, dfa, (current.node, current.state)):
            entry = visited.get(successor)
            if entry is None:
                entry = CountEntry(successor[0], successor[1], next_depth, current.num_paths)
                visited[successor] = entry
                open_queue.append(entry)
            elif entry.depth == next_depth:
                entry.num_paths += current.num_paths

    logger.debug(f"Count evaluation: {len(visited)} product entries, {len(answers)} answers")
