"""
Tests for RPQ evaluation: product neighbours, reachability, single path,
all shortest paths and counting
"""

import os
import sys

import numpy as np
import pytest

# Add the project root to the Python path for imports
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from src.database.graph_store import Interner, LabelledGraph  # noqa: E402
from src.query.automaton import determinize, glushkov  # noqa: E402
from src.query.regex_parser import parse_regex  # noqa: E402
from src.search.all_shortest import all_shortest_search  # noqa: E402
from src.search.path_dag import dag_stats  # noqa: E402
from src.search.path_enumerator import enumerate_paths  # noqa: E402
from src.search.rpq_engine import (  # noqa: E402
    bind_rpq,
    compile_rpq,
    eval_all_shortest,
    eval_count,
    eval_reach,
    eval_single_path,
    product_neighbours,
)
from src.utils.errors import RegexSyntaxError, UnknownLabelError, UnknownNodeError  # noqa: E402
from tests.graph_scenarios import diamond_chain, random_unlabelled_graph, worked_example  # noqa: E402


def graph_of(*triples):
    return LabelledGraph.from_triples(triples)


def all_shortest(graph, source, regex):
    """node name -> (depth, [paths as name lists])"""
    answers = {}

    def collect(node, depth, handle):
        assert graph.node_name(node) not in answers, "answer delivered twice"
        answers[graph.node_name(node)] = (depth, [[graph.node_name(n) for n in p.nodes] for p in handle])

    eval_all_shortest(graph, compile_rpq(graph, source, regex), collect)
    return answers


def counts(graph, source, regex):
    result = []
    eval_count(graph, compile_rpq(graph, source, regex), lambda n, d, c: result.append((graph.node_name(n), d, c)))
    return result


class TestCompileRpq:

    def test_unknown_source(self):
        with pytest.raises(UnknownNodeError):
            compile_rpq(worked_example(), "nowhere", "e*")

    def test_bad_regex(self):
        with pytest.raises(RegexSyntaxError):
            compile_rpq(worked_example(), "v", "e |")

    def test_labels_absent_from_graph_are_dropped(self):
        query = compile_rpq(worked_example(), "v", "e | f")
        assert query.dfa.alphabet == {0}

    def test_bind_reuses_compiled_automaton(self):
        graph = worked_example()
        ast = parse_regex("e e")
        query = bind_rpq(graph, graph.node_id("n1"), ast, determinize(glushkov(ast)))
        assert eval_reach(graph, query) == {graph.node_id("n5")}


class TestProductNeighbours:

    def test_single_transition(self):
        graph = graph_of(("v", "a", "x"))
        query = compile_rpq(graph, "v", "a")
        result = product_neighbours(graph, query.dfa, (0, query.dfa.initial))
        assert result == [((1, query.dfa.step(0, 0)), 0)]

    def test_disjoint_labels(self):
        graph = graph_of(("v", "b", "x"), ("y", "a", "v"))
        query = compile_rpq(graph, "v", "a")
        assert product_neighbours(graph, query.dfa, (0, query.dfa.initial)) == []

    def test_filters_other_labels(self):
        graph = graph_of(("v", "a", "x"), ("v", "a", "y"), ("v", "b", "z"))
        query = compile_rpq(graph, "v", "a")
        result = product_neighbours(graph, query.dfa, (0, 0))
        assert [(graph.node_name(n), label) for (n, _q), label in result] == [("x", 0), ("y", 0)]

    def test_both_iteration_orders_agree(self):
        # y carries extra labels so the wide query has more moves than v has edges
        graph = graph_of(*[("v", f"l{i}", f"x{i}") for i in range(6)], ("v", "l0", "y"), ("y", "l6", "v"), ("y", "l7", "v"))
        narrow = compile_rpq(graph, "v", "l0 | l3")
        wide = compile_rpq(graph, "v", "l0 | l1 | l2 | l3 | l4 | l5 | l6 | l7")
        expected = [graph.node_id(name) for name in ["x0", "y", "x1", "x2", "x3", "x4", "x5"]]
        wide_result = product_neighbours(graph, wide.dfa, (0, 0))
        assert [n for (n, _q), _label in wide_result] == expected
        assert [label for _pstate, label in wide_result] == [0, 0, 1, 2, 3, 4, 5]
        narrow_result = product_neighbours(graph, narrow.dfa, (0, 0))
        assert [n for (n, _q), _label in narrow_result] == [graph.node_id(name) for name in ["x0", "y", "x3"]]


class TestEvalReach:

    def test_star(self):
        graph = graph_of(("v", "a", "x"), ("x", "a", "y"))
        assert eval_reach(graph, compile_rpq(graph, "v", "a*")) == {0, 1, 2}

    def test_empty_language(self):
        graph = graph_of(("v", "a", "x"))
        assert eval_reach(graph, compile_rpq(graph, "v", "b")) == set()

    def test_no_matching_edges(self):
        graph = graph_of(("v", "b", "x"), ("x", "a", "y"))
        assert eval_reach(graph, compile_rpq(graph, "v", "a")) == set()


class TestEvalSinglePath:

    def test_worked_example_takes_first_branch(self):
        graph = worked_example()
        found = []
        eval_single_path(graph, compile_rpq(graph, "v", "e e e"), lambda n, p: found.append(p))
        assert len(found) == 1
        assert [graph.node_name(n) for n in found[0].nodes] == ["v", "n1", "n4", "n5"]
        assert found[0].labels == (0, 0, 0)

    def test_nullable_emits_source_first(self):
        graph = worked_example()
        found = []
        eval_single_path(graph, compile_rpq(graph, "v", "e*"), lambda n, p: found.append((n, p.length)))
        assert found[0] == (graph.node_id("v"), 0)
        assert [length for _n, length in found] == sorted(length for _n, length in found)

    def test_single_edge(self):
        graph = graph_of(("v", "a", "x"))
        found = []
        eval_single_path(graph, compile_rpq(graph, "v", "a"), lambda n, p: found.append((n, p.nodes, p.labels)))
        assert found == [(1, (0, 1), (0,))]


class TestEvalAllShortest:

    def test_worked_example(self):
        answers = all_shortest(worked_example(), "v", "e*")
        assert answers["v"] == (0, [["v"]])
        assert answers["n1"] == (1, [["v", "n1"]])
        assert answers["n4"][0] == 2
        assert len(answers["n4"][1]) == 3
        assert answers["n5"] == (3, [
            ["v", "n1", "n4", "n5"],
            ["v", "n2", "n4", "n5"],
            ["v", "n3", "n4", "n5"],
        ])

    def test_worked_example_dag(self):
        graph = worked_example()
        dag = eval_all_shortest(graph, compile_rpq(graph, "v", "e*"))
        assert dag_stats(dag) == (6, 7)
        n4 = next(entry for entry in dag.entries if entry.node == graph.node_id("n4"))
        assert len(n4.prev_list) == 3

    def test_parallel_labels(self):
        graph = graph_of(("v", "a", "x"), ("v", "b", "x"))
        assert all_shortest(graph, "v", "a|b") == {"x": (1, [["v", "x"], ["v", "x"]])}

    def test_longer_match_is_not_delivered(self):
        graph = graph_of(("v", "a", "x"), ("x", "b", "y"), ("v", "b", "y"))
        assert all_shortest(graph, "v", "(a b)|b") == {"y": (1, [["v", "y"]])}

    def test_later_final_state_is_suppressed(self):
        # y is answered at depth 1; reaching it again via `a b` at depth 2 is discarded
        graph = graph_of(("v", "a", "y"), ("v", "a", "x"), ("x", "b", "y"))
        assert all_shortest(graph, "v", "a | a b") == {"y": (1, [["v", "y"]]), "x": (1, [["v", "x"]])}

    def test_final_states_at_same_depth_are_grouped(self):
        graph = graph_of(("v", "a", "x"), ("x", "b", "t"), ("v", "c", "y"), ("y", "d", "t"))
        answers = all_shortest(graph, "v", "a b | c d")
        assert answers == {"t": (2, [["v", "x", "t"], ["v", "y", "t"]])}
        assert counts(graph, "v", "a b | c d") == [("t", 2, 2)]

    def test_non_nullable_cycle_back_to_source(self):
        graph = graph_of(("v", "x", "w"), ("w", "y", "v"))
        assert all_shortest(graph, "v", "x y") == {"v": (2, [["v", "w", "v"]])}
        assert all_shortest(graph, "v", "(x y)+") == {"v": (2, [["v", "w", "v"]])}

    def test_non_nullable_without_cycle_skips_source(self):
        graph = graph_of(("v", "x", "w"))
        assert "v" not in all_shortest(graph, "v", "x*x")

    def test_answers_in_nondecreasing_depth(self):
        depths = [depth for depth, _ in all_shortest(diamond_chain(4), "d0", "e*").values()]
        assert depths == sorted(depths)

    def test_diamond_chain_compact(self):
        k = 20
        graph = diamond_chain(k)
        dag = eval_all_shortest(graph, compile_rpq(graph, "d0", "e*"))
        assert dag_stats(dag) == (3 * k + 1, 4 * k)


class TestEvalCount:

    def test_worked_example(self):
        result = counts(worked_example(), "v", "e*")
        assert result == [("v", 0, 1), ("n1", 1, 1), ("n2", 1, 1), ("n3", 1, 1), ("n4", 2, 3), ("n5", 3, 3)]

    def test_nullable_counts_empty_path(self):
        assert counts(worked_example(), "n5", "e?") == [("n5", 0, 1)]

    def test_diamond_chain(self):
        k = 20
        result = dict((name, c) for name, _d, c in counts(diamond_chain(k), "d0", "e*"))
        assert result[f"d{k}"] == 2 ** 20 == 1048576

    def test_count_matches_enumeration(self):
        graph = diamond_chain(6)
        enumerated = {node: len(paths) for node, (_d, paths) in all_shortest(graph, "d0", "(e e)*").items()}
        counted = {node: c for node, _d, c in counts(graph, "d0", "(e e)*")}
        assert enumerated == counted


def with_single_label(plain):
    labels = Interner(UnknownLabelError)
    labels.intern("e")
    return LabelledGraph(plain.nodes, labels, {(source, 0, target) for source, target in plain.edges})


@pytest.mark.parametrize("seed", range(300))
def test_single_label_star_reproduces_unlabelled_search(seed):
    rng = np.random.default_rng(30_000 + seed)
    plain = random_unlabelled_graph(rng)
    source = int(rng.integers(0, plain.node_count))
    graph = with_single_label(plain)

    product = []
    eval_all_shortest(
        graph, compile_rpq(graph, source, "e*"),
        lambda node, depth, handle: product.append((node, depth, {p.nodes for p in handle})),
    )

    popped = []
    dag = all_shortest_search(plain, source, lambda node, depth, entry_id: popped.append((node, depth, entry_id)))
    unlabelled = [(node, depth, {p.nodes for p in enumerate_paths(dag, entry_id)}) for node, depth, entry_id in popped]

    assert product == unlabelled
