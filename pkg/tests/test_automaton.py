"""
Tests for Glushkov construction, subset construction and acceptance
"""

import io
import itertools
import os
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

# Add the project root to the Python path for imports
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from src.query.automaton import Dfa, Nfa, accepts, determinize, dump_automaton, glushkov  # noqa: E402
from src.query.regex_parser import Symbol, parse_regex  # noqa: E402
from src.utils.oracle import brute_regex_membership  # noqa: E402
from tests.graph_scenarios import random_regex  # noqa: E402


def words(alphabet, max_length):
    for length in range(max_length + 1):
        yield from itertools.product(alphabet, repeat=length)


def compile_regex(text: str) -> Dfa:
    return determinize(glushkov(parse_regex(text)))


class TestGlushkov:

    def test_single_symbol(self):
        nfa = glushkov(Symbol("a"))
        assert nfa.state_count == 2
        assert nfa.transitions == {(0, "a", 1)}
        assert nfa.finals == {1}
        assert nfa.initial == 0

    def test_star(self):
        nfa = glushkov(parse_regex("a*"))
        assert nfa.state_count == 2
        assert nfa.transitions == {(0, "a", 1), (1, "a", 1)}
        assert nfa.finals == {0, 1}

    def test_one_state_per_symbol_occurrence(self):
        nfa = glushkov(parse_regex("a b | a c"))
        assert nfa.state_count == 5
        assert nfa.step({0}, "a") == {1, 3}

    def test_no_epsilon_transitions(self):
        nfa = glushkov(parse_regex("(() | a)* ()"))
        assert all(symbol == "a" for _s, symbol, _t in nfa.transitions)
        assert nfa.finals == {0, 1}

    def test_epsilon_only(self):
        nfa = glushkov(parse_regex("()"))
        assert nfa.state_count == 1
        assert nfa.transitions == frozenset()
        assert nfa.finals == {0}

    def test_long_concatenation(self):
        nfa = glushkov(parse_regex(" ".join(["e"] * 5000)))
        assert nfa.state_count == 5001
        assert nfa.finals == {5000}
        assert nfa.step({4999}, "e") == {5000}
        dfa = determinize(nfa)
        assert accepts(dfa, ["e"] * 5000)
        assert not accepts(dfa, ["e"] * 4999)


class TestDeterminize:

    def test_merges_shared_prefix(self):
        dfa = compile_regex("a b | a c")
        assert dfa.state_count == 4
        for word in words("abc", 4):
            assert accepts(dfa, word) == (word in {("a", "b"), ("a", "c")})

    def test_classic_nfa(self):
        dfa = compile_regex("(a|b)* a")
        assert dfa.state_count == 3
        assert dfa.finals == {1}
        for word in words("ab", 6):
            assert accepts(dfa, word) == (len(word) > 0 and word[-1] == "a")

    def test_deterministic_input_keeps_structure(self):
        nfa = Nfa(3, 0, frozenset({2}), frozenset({(0, "a", 1), (1, "b", 2), (2, "a", 1)}))
        dfa = determinize(nfa)
        assert dfa.state_count == 3
        assert len(dfa.transitions) == 3

    def test_empty_language(self):
        nfa = Nfa(2, 0, frozenset(), frozenset({(0, "a", 1)}))
        dfa = determinize(nfa)
        assert dfa.finals == frozenset()
        assert not accepts(dfa, ["a"])

    def test_at_most_one_run(self):
        dfa = compile_regex("(a|b)* a (a|b)")
        for state in range(dfa.state_count):
            moves = [symbol for symbol, _target in dfa.outgoing(state)]
            assert len(moves) == len(set(moves))

    def test_numbering_is_reproducible(self):
        assert compile_regex("(a b | c)* d?") == compile_regex("(a b | c)* d?")


class TestAccepts:

    def test_nullable_accepts_empty_word(self):
        assert accepts(compile_regex("a*"), [])

    def test_concat(self):
        dfa = compile_regex("a b")
        assert accepts(dfa, "ab")
        assert not accepts(dfa, "a")
        assert not accepts(dfa, "abb")

    def test_unknown_symbol_rejects(self):
        assert not accepts(compile_regex("a*"), ["z"])

    def test_double_star_equals_star(self):
        double, single = compile_regex("a**"), compile_regex("a*")
        for word in words("ab", 5):
            assert accepts(double, word) == accepts(single, word)


class TestRelabelAndDump:

    def test_relabel_drops_unmapped_symbols(self):
        dfa = compile_regex("a | b")
        bound = dfa.relabel({"a": 7})
        assert bound.alphabet == {7}
        assert bound.state_count == dfa.state_count
        assert bound.finals == dfa.finals

    def test_dump_format(self):
        sink = io.StringIO()
        dump_automaton(compile_regex("a b*"), sink)
        assert sink.getvalue() == "# states 3\n# initial 0\n# finals 1 2\n0\ta\t1\n1\tb\t2\n2\tb\t2\n"

    def test_dump_nfa(self):
        sink = io.StringIO()
        dump_automaton(glushkov(parse_regex("a*")), sink)
        assert sink.getvalue() == "# states 2\n# initial 0\n# finals 0 1\n0\ta\t1\n1\ta\t1\n"


@pytest.mark.parametrize("seed", range(500))
def test_automaton_agrees_with_brute_membership(seed):
    rng = np.random.default_rng(seed)
    alphabet = ["a", "b", "c"][: int(rng.integers(1, 4))]
    ast = random_regex(rng, alphabet, int(rng.integers(1, 9)))
    dfa = determinize(glushkov(ast))
    for word in words(alphabet, 6):
        assert accepts(dfa, word) == brute_regex_membership(ast, word), word


@settings(max_examples=100, deadline=None)
@given(st.text(alphabet="ab", max_size=6))
def test_plus_is_one_or_more(word):
    assert accepts(compile_regex("(a b?)+"), word) == brute_regex_membership(parse_regex("(a b?)+"), word)
