"""
Graph Store for the RPQ Engine
In-memory edge-labelled graph database with file ingestion and adjacency lookup

Node names and labels are interned into dense integer ids so the search loops
only ever compare integers. Graphs are immutable once built.
"""

import logging
from typing import Callable, Dict, Iterable, List, Set, TextIO, Tuple

from ..utils.errors import GraphParseError, RpqError, UnknownLabelError, UnknownNodeError

logger = logging.getLogger(__name__)

NodeId = int
LabelId = int
Triple = Tuple[NodeId, LabelId, NodeId]


class Interner:
    """
    Bijection between strings and contiguous ids 0..n-1

    `missing` builds the error raised for an unknown name or id.
    """

    def __init__(self, missing: Callable[[object], RpqError] = UnknownNodeError):
        self._missing = missing
        self._ids: Dict[str, int] = {}
        self._names: List[str] = []

    def intern(self, name: str) -> int:
        ident = self._ids.get(name)
        if ident is None:
            ident = len(self._names)
            self._ids[name] = ident
            self._names.append(name)
        return ident

    def lookup(self, name: str) -> int:
        ident = self._ids.get(name)
        if ident is None:
            raise self._missing(name)
        return ident

    def get(self, name: str, default=None):
        return self._ids.get(name, default)

    def name(self, ident: int) -> str:
        if not 0 <= ident < len(self._names):
            raise self._missing(ident)
        return self._names[ident]

    def __contains__(self, name: str) -> bool:
        return name in self._ids

    def __len__(self) -> int:
        return len(self._names)


class LabelledGraph:
    """
    Edge-labelled directed graph (the graph database G)

    - edges: duplicate-free set of (source, label, target) id triples
    - out_index: (node, label) -> successors in ascending id order
    - out_all: node -> (label, successor) pairs ordered by label id, then successor id
    """

    def __init__(self, nodes: Interner, labels: Interner, edges: Set[Triple]):
        self.nodes = nodes
        self.labels = labels
        self.edges = frozenset(edges)

        out_index: Dict[Tuple[NodeId, LabelId], List[NodeId]] = {}
        out_all: List[List[Tuple[LabelId, NodeId]]] = [[] for _ in range(len(nodes))]
        for source, label, target in self.edges:
            out_index.setdefault((source, label), []).append(target)
            out_all[source].append((label, target))
        for successors in out_index.values():
            successors.sort()
        for pairs in out_all:
            pairs.sort()

        self.out_index: Dict[Tuple[NodeId, LabelId], Tuple[NodeId, ...]] = {
            key: tuple(successors) for key, successors in out_index.items()
        }
        self.out_all: Tuple[Tuple[Tuple[LabelId, NodeId], ...], ...] = tuple(tuple(pairs) for pairs in out_all)

    @classmethod
    def from_triples(cls, triples: Iterable[Tuple[str, str, str]]) -> "LabelledGraph":
        """Build a graph from (source name, label, target name) triples"""
        nodes = Interner()
        labels = Interner(UnknownLabelError)
        edges: Set[Triple] = set()
        for source, label, target in triples:
            edges.add((nodes.intern(source), labels.intern(label), nodes.intern(target)))
        return cls(nodes, labels, edges)

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def node_id(self, name: str) -> NodeId:
        return self.nodes.lookup(name)

    def node_name(self, node: NodeId) -> str:
        return self.nodes.name(node)

    def label_name(self, label: LabelId) -> str:
        return self.labels.name(label)

    def check_node(self, node: NodeId) -> None:
        if not 0 <= node < len(self.nodes):
            raise UnknownNodeError(node)

    def label_id(self, name: str) -> LabelId:
        return self.labels.lookup(name)

    def successors(self, node: NodeId, label: LabelId) -> Tuple[NodeId, ...]:
        return self.out_index.get((node, label), ())


class UnlabelledGraph:
    """Directed graph G=(V,E) with E a set of node pairs"""

    def __init__(self, nodes: Interner, edges: Set[Tuple[NodeId, NodeId]]):
        self.nodes = nodes
        self.edges = frozenset(edges)
        out_index: List[List[NodeId]] = [[] for _ in range(len(nodes))]
        for source, target in self.edges:
            out_index[source].append(target)
        self.out_index: Tuple[Tuple[NodeId, ...], ...] = tuple(tuple(sorted(successors)) for successors in out_index)

    @classmethod
    def from_pairs(cls, pairs: Iterable[Tuple[str, str]]) -> "UnlabelledGraph":
        nodes = Interner()
        edges = {(nodes.intern(source), nodes.intern(target)) for source, target in pairs}
        return cls(nodes, edges)

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    def node_id(self, name: str) -> NodeId:
        return self.nodes.lookup(name)

    def node_name(self, node: NodeId) -> str:
        return self.nodes.name(node)

    def check_node(self, node: NodeId) -> None:
        if not 0 <= node < len(self.nodes):
            raise UnknownNodeError(node)


def load_labelled_graph(source: Iterable[str]) -> LabelledGraph:
    """
    Load a graph from `src<TAB>label<TAB>dst` lines

    Blank lines and lines starting with '#' are skipped. Duplicate triples
    collapse to one edge. Labels may not contain a back-quote, which quotes
    labels in regex text.

    Raises:
        GraphParseError: a line does not have exactly three non-empty fields,
            or its label contains a back-quote
    """
    nodes = Interner()
    labels = Interner(UnknownLabelError)
    edges: Set[Triple] = set()

    for line_number, raw in enumerate(source, 1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 3:
            raise GraphParseError(f"expected 3 tab-separated fields, found {len(fields)}", line_number)
        if not all(fields):
            raise GraphParseError("empty node or label name", line_number)
        source_name, label, target_name = fields
        if "`" in label:
            raise GraphParseError(f"label {label!r} contains a back-quote", line_number)
        edges.add((nodes.intern(source_name), labels.intern(label), nodes.intern(target_name)))

    graph = LabelledGraph(nodes, labels, edges)
    logger.info(f"Loaded graph with {graph.node_count} nodes, {len(labels)} labels, {graph.edge_count} edges")
    return graph


def dump_labelled_graph(graph: LabelledGraph, sink: TextIO) -> None:
    """Write the graph back in the line format, sorted by (source, label, target) ids"""
    for source, label, target in sorted(graph.edges):
        sink.write(f"{graph.node_name(source)}\t{graph.label_name(label)}\t{graph.node_name(target)}\n")


def strip_labels(graph: LabelledGraph) -> UnlabelledGraph:
    """Project away edge labels; parallel labelled edges collapse to one pair"""
    pairs = {(source, target) for source, _label, target in graph.edges}
    return UnlabelledGraph(graph.nodes, pairs)


def neighbours(graph: UnlabelledGraph, node: NodeId) -> Tuple[NodeId, ...]:
    """Successors of `node` in ascending id order"""
    graph.check_node(node)
    return graph.out_index[node]
