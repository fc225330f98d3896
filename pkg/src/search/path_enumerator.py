"""
Path Enumeration over a shortest-path DAG

Decodes root-to-target paths one at a time by a depth-first walk backwards
along prev_lists. The cursor keeps the stack of entries on the current path
together with the position used inside each prev_list, plus a separate stack
of the stack levels where an unused alternative remains (the forks). Moving
to the next path jumps straight to the deepest fork, so the work between two
consecutive paths is linear in the length of the next path.
"""

from itertools import chain
from typing import Iterable, Iterator, List, Optional, Sequence

from .path_dag import Path, PathDag, VisitedEntry


class PathCursor(Iterator[Path]):
    """
    Resumable enumeration of all paths from the DAG root to one target entry

    `steps` counts elementary stack operations (pushes and pops) and is
    exposed for delay measurements.
    """

    def __init__(self, dag: PathDag, target: int):
        dag.get(target)
        self._dag = dag
        self._target = target
        self._stack: List[int] = []
        self._positions: List[int] = []
        self._forks: List[int] = []
        self._started = False
        self._exhausted = False
        self.steps = 0

    def __iter__(self) -> "PathCursor":
        return self

    def __next__(self) -> Path:
        if self._exhausted:
            raise StopIteration
        if not self._started:
            self._started = True
            self._descend(self._target)
            return self._materialise()
        if not self._forks:
            self._exhausted = True
            raise StopIteration

        level = self._forks[-1]
        removed = len(self._stack) - level - 1
        del self._stack[level + 1:]
        del self._positions[level + 1:]
        self.steps += removed

        entry = self._dag.entries[self._stack[level]]
        position = self._positions[level] + 1
        self._positions[level] = position
        if position == len(entry.prev_list) - 1:
            self._forks.pop()
        self._descend(entry.prev_list[position])
        return self._materialise()

    def _descend(self, entry_id: int) -> None:
        # follow first predecessors down to the root
        entries = self._dag.entries
        while True:
            entry = entries[entry_id]
            self._stack.append(entry_id)
            self.steps += 1
            if not entry.prev_list:
                self._positions.append(-1)
                return
            self._positions.append(0)
            if len(entry.prev_list) > 1:
                self._forks.append(len(self._stack) - 1)
            entry_id = entry.prev_list[0]

    def _materialise(self) -> Path:
        entries = self._dag.entries
        nodes = tuple(entries[entry_id].node for entry_id in reversed(self._stack))
        if not self._dag.labelled:
            return Path(nodes)
        labels = tuple(
            entries[self._stack[level]].prev_labels[self._positions[level]]
            for level in range(len(self._stack) - 2, -1, -1)
        )
        return Path(nodes, labels)


def enumerate_paths(dag: PathDag, target: int) -> PathCursor:
    """
    Iterator over every shortest path from the search source to `target`

    Each path is yielded exactly once, in depth-first order induced by the
    prev_list discovery order. Paths of product DAGs carry edge labels.

    Raises:
        UnknownEntryError: `target` is not an entry of `dag`
    """
    return PathCursor(dag, target)


def _prefix_counts(entries: Sequence[VisitedEntry]) -> List[int]:
    # predecessors always have smaller ids than the entries that reference them
    counts: List[int] = []
    for entry in entries:
        if entry.prev_list:
            counts.append(sum(counts[previous] for previous in entry.prev_list))
        else:
            counts.append(1)
    return counts


def count_all_paths(dag: PathDag) -> List[int]:
    """Number of root-to-entry paths for every entry, in one pass over the store"""
    return _prefix_counts(dag.entries)


def count_paths(dag: PathDag, target: int) -> int:
    """Number of root-to-target paths; O(entries + references) with no enumeration"""
    dag.get(target)
    return _prefix_counts(dag.entries[:target + 1])[target]


class AnswerPaths(Iterable[Path]):
    """
    Path enumeration handle for one RPQ answer

    An answer may be reached through several final automaton states at the
    same depth; its paths are the disjoint union of the per-entry enumerations,
    taken in entry order.
    """

    def __init__(self, dag: PathDag, entry_ids: Sequence[int]):
        for entry_id in entry_ids:
            dag.get(entry_id)
        self.dag = dag
        self.entry_ids = tuple(entry_ids)
        self._count: Optional[int] = None

    def __iter__(self) -> Iterator[Path]:
        return chain.from_iterable(enumerate_paths(self.dag, entry_id) for entry_id in self.entry_ids)

    def count(self) -> int:
        """Number of paths the handle yields; computed once, without enumeration"""
        if self._count is None:
            self._count = sum(count_paths(self.dag, entry_id) for entry_id in self.entry_ids)
        return self._count
