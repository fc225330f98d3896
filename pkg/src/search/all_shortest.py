"""
All-Shortest-Paths Search over unlabelled graphs

Breadth-first search from one source that keeps, for every reached node, a
list of ALL immediate predecessors on shortest paths. The resulting DAG
encodes every shortest path from the source in O(|V| + |E|) space.
"""

import logging
from collections import deque
from typing import Callable, Dict, Optional

from ..database.graph_store import NodeId, UnlabelledGraph, neighbours
from .path_dag import Path, PathDag, dag_stats  # noqa: F401

logger = logging.getLogger(__name__)

SolutionCallback = Callable[[NodeId, int, int], None]


def all_shortest_search(
    graph: UnlabelledGraph,
    source: NodeId,
    on_solution: Optional[SolutionCallback] = None,
) -> PathDag:
    """
    Build the shortest-path DAG rooted at `source`

    `on_solution(node, depth, entry_id)` fires once per reachable node (the
    source first, at depth 0) when its entry is popped. At that point every
    shortest path to the node is already recorded in the entry's prev_list.

    Raises:
        UnknownNodeError: `source` is not a node of `graph`
    """
    graph.check_node(source)
    dag = PathDag(labelled=False)
    root = dag.add_entry(source, source, 0)
    open_queue = deque([root])

    while open_queue:
        current_id = open_queue.popleft()
        current = dag.entries[current_id]
        if on_solution is not None:
            on_solution(current.node, current.depth, current_id)

        next_depth = current.depth + 1
        for successor in neighbours(graph, current.node):
            entry_id = dag.index.get(successor)
            if entry_id is None:
                new_id = dag.add_entry(successor, successor, next_depth)
                dag.entries[new_id].prev_list.append(current_id)
                open_queue.append(new_id)
                continue
            existing = dag.entries[entry_id]
            if existing.depth == next_depth:
                # another shortest path into a node still waiting in the queue
                existing.prev_list.append(current_id)
            else:
                assert existing.depth < next_depth, "FIFO order violated"

    logger.debug(f"All-shortest search from node {source}: {len(dag)} entries")
    return dag


def single_shortest_search(
    graph: UnlabelledGraph,
    source: NodeId,
    on_solution: Callable[[NodeId, Path], None],
) -> None:
    """Textbook BFS: one shortest path per reachable node via single predecessor links"""
    graph.check_node(source)
    previous: Dict[NodeId, Optional[NodeId]] = {source: None}
    open_queue = deque([source])

    while open_queue:
        current = open_queue.popleft()
        on_solution(current, _reconstruct(previous, current))
        for successor in neighbours(graph, current):
            if successor not in previous:
                previous[successor] = current
                open_queue.append(successor)


def _reconstruct(previous: Dict[NodeId, Optional[NodeId]], node: NodeId) -> Path:
    nodes = [node]
    while previous[nodes[-1]] is not None:
        nodes.append(previous[nodes[-1]])
    nodes.reverse()
    return Path(tuple(nodes))
