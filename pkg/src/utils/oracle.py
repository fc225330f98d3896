"""
Brute-Force Reference Implementations
Slow, independent answers used to validate every engine mode on small instances

These trade performance for obviousness. Paths are expanded explicitly,
level by level, and regex membership is decided by structural recursion
over the syntax tree. Nothing here goes through the query automaton.
"""

from functools import lru_cache
from typing import Dict, List, Sequence, Set, Tuple
from typing import Optional as Maybe

from ..database.graph_store import LabelledGraph, NodeId, UnlabelledGraph, neighbours
from ..query.regex_parser import Concat, Epsilon, Optional, Plus, RegexAst, Star, Symbol, Union, ast_size
from ..search.path_dag import Path
from ..search.rpq_engine import Rpq
from .errors import OracleSizeError

OracleResult = Dict[NodeId, Tuple[int, Set[Path]]]
Residual = Maybe[RegexAst]

MAX_UNLABELLED_NODES = 16
MAX_RPQ_NODES = 12
MAX_RPQ_AST_SIZE = 12
MAX_WORD_LENGTH = 8
MAX_RPQ_KEYS = 100_000


def brute_all_shortest_unlabelled(graph: UnlabelledGraph, source: NodeId) -> OracleResult:
    """
    Every shortest path from `source` to every reachable node, by explicit expansion

    Only paths that are shortest to their own endpoint are extended: every
    prefix of a shortest path is itself shortest, so nothing is lost.
    """
    if graph.node_count > MAX_UNLABELLED_NODES:
        raise OracleSizeError(f"graph has {graph.node_count} nodes, limit is {MAX_UNLABELLED_NODES}")
    graph.check_node(source)

    result: OracleResult = {source: (0, {Path((source,))})}
    frontier: List[Tuple[NodeId, ...]] = [(source,)]
    level = 0
    while frontier and level <= graph.node_count:
        level += 1
        extended: List[Tuple[NodeId, ...]] = []
        for nodes in frontier:
            for successor in neighbours(graph, nodes[-1]):
                known = result.get(successor)
                if known is not None and known[0] < level:
                    continue
                if known is None:
                    known = (level, set())
                    result[successor] = known
                path = nodes + (successor,)
                known[1].add(Path(path))
                extended.append(path)
        frontier = extended

    for node, (depth, paths) in result.items():
        assert all(path.length == depth and path.end == node for path in paths)
    return result


def brute_all_shortest_rpq(graph: LabelledGraph, query: Rpq) -> OracleResult:
    """
    Every shortest accepted path from the query source to every answer node

    Labelled paths are expanded by increasing length. Each path carries the
    residual of the regex after reading its labels, taken by derivatives of
    the syntax tree; a path is accepted iff its residual matches the empty
    word. Two paths ending at the same node with the same residual have the
    same accepted continuations, so only paths that are shortest for their
    (node, residual) key are extended. The query automaton is never consulted.
    """
    if graph.node_count > MAX_RPQ_NODES:
        raise OracleSizeError(f"graph has {graph.node_count} nodes, limit is {MAX_RPQ_NODES}")
    if ast_size(query.ast) > MAX_RPQ_AST_SIZE:
        raise OracleSizeError(f"regex has {ast_size(query.ast)} nodes, limit is {MAX_RPQ_AST_SIZE}")

    start_key = (query.source, query.ast)
    best: Dict[Tuple[NodeId, RegexAst], int] = {start_key: 0}
    frontier: Dict[Tuple[NodeId, RegexAst], List[Path]] = {start_key: [Path((query.source,))]}
    result: OracleResult = {}
    length = 0

    while frontier:
        for (node, residual), paths in frontier.items():
            if not brute_regex_membership(residual, ()):
                continue
            known = result.get(node)
            if known is None:
                known = (length, set())
                result[node] = known
            if known[0] == length:
                known[1].update(paths)

        extended: Dict[Tuple[NodeId, RegexAst], List[Path]] = {}
        for (node, residual), paths in frontier.items():
            for label, successor in graph.out_all[node]:
                reached = derivative(residual, graph.label_name(label))
                if reached is None:
                    continue
                key = (successor, reached)
                if best.get(key, length + 1) < length + 1:
                    continue
                best[key] = length + 1
                bucket = extended.setdefault(key, [])
                bucket.extend(Path(path.nodes + (successor,), path.labels + (label,)) for path in paths)
        frontier = extended
        length += 1
        if len(best) > MAX_RPQ_KEYS:
            raise OracleSizeError(f"more than {MAX_RPQ_KEYS} (node, residual) keys")

    for node, (depth, paths) in result.items():
        for path in paths:
            word = [graph.label_name(label) for label in path.labels]
            assert path.length == depth and path.end == node
            if len(word) <= MAX_WORD_LENGTH:
                assert brute_regex_membership(query.ast, word)
    return result


def derivative(ast: RegexAst, label: str) -> Residual:
    """
    Regex for the words w such that `label` w matches `ast`; None is the empty language

    Alternatives are flattened, deduplicated and sorted, so residuals of equal
    alternative sets compare equal and the set of reachable residuals is finite.
    """
    if isinstance(ast, Symbol):
        return Epsilon() if ast.label == label else None
    if isinstance(ast, Epsilon):
        return None
    if isinstance(ast, Union):
        return _union(derivative(ast.left, label), derivative(ast.right, label))
    if isinstance(ast, Concat):
        head = _concat(derivative(ast.left, label), ast.right)
        if brute_regex_membership(ast.left, ()):
            return _union(head, derivative(ast.right, label))
        return head
    if isinstance(ast, Optional):
        return derivative(ast.child, label)
    if isinstance(ast, (Star, Plus)):
        return _concat(derivative(ast.child, label), Star(ast.child))
    raise TypeError(f"not a regex node: {ast!r}")


def _alternatives(ast: Residual) -> Set[RegexAst]:
    if ast is None:
        return set()
    if isinstance(ast, Union):
        return _alternatives(ast.left) | _alternatives(ast.right)
    return {ast}


def _union(left: Residual, right: Residual) -> Residual:
    alternatives = sorted(_alternatives(left) | _alternatives(right), key=repr)
    if not alternatives:
        return None
    merged = alternatives[0]
    for alternative in alternatives[1:]:
        merged = Union(merged, alternative)
    return merged


def _concat(left: Residual, right: RegexAst) -> Residual:
    if left is None:
        return None
    if isinstance(left, Epsilon):
        return right
    if isinstance(right, Epsilon):
        return left
    return Concat(left, right)


def brute_regex_membership(ast: RegexAst, word: Sequence[str]) -> bool:
    """Decide word membership by trying every split point; words up to 8 symbols"""
    if len(word) > MAX_WORD_LENGTH:
        raise OracleSizeError(f"word has {len(word)} symbols, limit is {MAX_WORD_LENGTH}")
    word = tuple(word)

    @lru_cache(maxsize=None)
    def matches(node: RegexAst, start: int, end: int) -> bool:
        if isinstance(node, Symbol):
            return end - start == 1 and word[start] == node.label
        if isinstance(node, Epsilon):
            return start == end
        if isinstance(node, Union):
            return matches(node.left, start, end) or matches(node.right, start, end)
        if isinstance(node, Concat):
            return any(matches(node.left, start, mid) and matches(node.right, mid, end) for mid in range(start, end + 1))
        if isinstance(node, Optional):
            return start == end or matches(node.child, start, end)
        if isinstance(node, Star):
            if start == end:
                return True
            # first iteration consumes at least one symbol
            return any(matches(node.child, start, mid) and matches(node, mid, end) for mid in range(start + 1, end + 1))
        if isinstance(node, Plus):
            if matches(node.child, start, end):
                return True
            return any(matches(node.child, start, mid) and matches(node, mid, end) for mid in range(start + 1, end + 1))
        raise TypeError(f"not a regex node: {node!r}")

    return matches(ast, 0, len(word))
