"""
Shortest-path DAG store

The Visited store built by the all-shortest searches, read as a DAG: every
entry points back to all of its immediate predecessors on some shortest path.
Entries are appended in discovery order, which under FIFO search is also
nondecreasing depth order, so every predecessor id is smaller than the id of
the entry that references it.
"""

from dataclasses import dataclass, field
from typing import Dict, Hashable, List, Optional, Tuple

from ..utils.errors import UnknownEntryError


@dataclass(frozen=True)
class Path:
    """Node sequence n1..n(k+1) with edge labels a1..ak (no labels for unlabelled paths)"""

    nodes: Tuple[int, ...]
    labels: Tuple[int, ...] = ()

    @property
    def length(self) -> int:
        return len(self.nodes) - 1

    @property
    def start(self) -> int:
        return self.nodes[0]

    @property
    def end(self) -> int:
        return self.nodes[-1]


@dataclass
class VisitedEntry:
    """
    One search-key record: (node, state, depth, prev_list)

    `state` is None in the unlabelled search. `prev_labels` runs parallel to
    `prev_list` in the product search (the label of the edge taken from each
    predecessor) and is None in the unlabelled search.
    """

    node: int
    depth: int
    state: Optional[int] = None
    prev_list: List[int] = field(default_factory=list)
    prev_labels: Optional[List[int]] = None


class PathDag:
    """Append-only entry store with a search-key index; root is entry 0"""

    def __init__(self, labelled: bool):
        self.labelled = labelled
        self.entries: List[VisitedEntry] = []
        self.index: Dict[Hashable, int] = {}
        self.root = 0

    def add_entry(self, key: Hashable, node: int, depth: int, state: Optional[int] = None) -> int:
        entry_id = len(self.entries)
        self.entries.append(VisitedEntry(node, depth, state, [], [] if self.labelled else None))
        self.index[key] = entry_id
        return entry_id

    def get(self, entry_id: int) -> VisitedEntry:
        if not isinstance(entry_id, int) or not 0 <= entry_id < len(self.entries):
            raise UnknownEntryError(entry_id)
        return self.entries[entry_id]

    def lookup(self, key: Hashable) -> Optional[int]:
        return self.index.get(key)

    def __len__(self) -> int:
        return len(self.entries)


def dag_stats(dag: PathDag) -> Tuple[int, int]:
    """(entry count, prev_list reference count)"""
    return len(dag.entries), sum(len(entry.prev_list) for entry in dag.entries)
