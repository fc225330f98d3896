"""
Query Pipeline - LangGraph workflow behind the rpq command
Loads a graph, compiles the query automaton, evaluates and renders the answers
"""

import io
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import islice
from typing import Any, Dict, List, Optional, TypedDict

from langgraph.graph import END, START, StateGraph

from ..database.graph_store import LabelledGraph, NodeId, load_labelled_graph
from ..query.automaton import Dfa, determinize, dump_automaton, glushkov
from ..query.regex_parser import RegexAst, parse_regex
from ..search.path_dag import Path
from ..search.rpq_engine import Rpq, bind_rpq, eval_all_shortest, eval_count, eval_reach, eval_single_path
from ..utils.errors import GraphParseError, RegexSyntaxError, RpqError, UnknownNodeError
from .query_config import CliConfig

EXIT_OK = 0
EXIT_RUNTIME_ERROR = 1
EXIT_USAGE_ERROR = 2


@dataclass
class QueryAnswer:
    """One answer node for one source, as handed to the renderer"""

    source: NodeId
    node: NodeId
    depth: Optional[int] = None
    paths: Optional[List[Path]] = None
    count: Optional[int] = None
    truncated: bool = False


class QueryState(TypedDict, total=False):
    """
    LangGraph state for one rpq invocation
    Every node reads what earlier nodes produced and adds its own results
    """
    # Request
    config: CliConfig

    # Loaded artifacts
    graph: Optional[LabelledGraph]
    ast: Optional[RegexAst]
    query_dfa: Optional[Dfa]
    automaton_dump: Optional[str]
    source_ids: List[NodeId]

    # Results
    answers: List[QueryAnswer]
    output_lines: List[str]

    # Workflow control
    current_step: str
    error_message: Optional[str]
    exit_status: int


class QueryPipeline:
    """
    Orchestrates one query as a LangGraph workflow

    WORKFLOW NODES:
    1. load_graph - read and intern the graph file
    2. compile_query - parse the regex, build and determinize the automaton
    3. resolve_sources - map the source name (or every node) to node ids
    4. evaluate - run the selected engine mode for every source
    5. format_results - render text or jsonl lines

    Any node that fails records error_message and exit_status; the router
    then ends the run.
    """

    STEPS = ["load_graph", "compile_query", "resolve_sources", "evaluate", "format_results"]

    def __init__(self):
        self.logger = logging.getLogger(__name__)
        self.graph = self._build_graph()
        self.compiled_graph = self.graph.compile()

    def _build_graph(self) -> StateGraph:
        workflow = StateGraph(QueryState)

        workflow.add_node("load_graph", self._load_graph_node)
        workflow.add_node("compile_query", self._compile_query_node)
        workflow.add_node("resolve_sources", self._resolve_sources_node)
        workflow.add_node("evaluate", self._evaluate_node)
        workflow.add_node("format_results", self._format_results_node)

        workflow.add_edge(START, "load_graph")
        for step, next_step in zip(self.STEPS, self.STEPS[1:]):
            workflow.add_conditional_edges(step, self._route_to(next_step), [next_step, END])
        workflow.add_edge("format_results", END)

        return workflow

    # =============================================================================
    # LANGGRAPH NODE IMPLEMENTATIONS
    # =============================================================================

    def _load_graph_node(self, state: QueryState) -> QueryState:
        config = state["config"]
        self.logger.info(f"Loading graph from {config.graph_path}")

        try:
            with open(config.graph_path, "r", encoding="utf-8") as handle:
                state["graph"] = load_labelled_graph(handle)
            state["current_step"] = "graph_loaded"
        except GraphParseError as e:
            self._fail(state, f"{config.graph_path}: {e}", EXIT_USAGE_ERROR)
        except (OSError, UnicodeDecodeError) as e:
            self._fail(state, f"cannot read graph file: {e}", EXIT_RUNTIME_ERROR)

        return state

    def _compile_query_node(self, state: QueryState) -> QueryState:
        config = state["config"]

        try:
            text = config.regex if config.regex is not None else self._read_query_file(config.query_file)
            ast = parse_regex(text)
            query_dfa = determinize(glushkov(ast))
            state.update({"ast": ast, "query_dfa": query_dfa, "current_step": "query_compiled"})

            if config.dump_automaton:
                dump = io.StringIO()
                dump_automaton(query_dfa, dump)
                state["automaton_dump"] = dump.getvalue()

            self.logger.info(f"Query automaton has {query_dfa.state_count} states, {len(query_dfa.finals)} final")
        except RegexSyntaxError as e:
            self._fail(state, f"regex syntax error: {e}", EXIT_USAGE_ERROR)
        except RecursionError:
            self._fail(state, "regex too deeply nested to compile", EXIT_USAGE_ERROR)
        except (OSError, UnicodeDecodeError) as e:
            self._fail(state, f"cannot read query file: {e}", EXIT_RUNTIME_ERROR)

        return state

    def _resolve_sources_node(self, state: QueryState) -> QueryState:
        config = state["config"]
        graph = state["graph"]

        try:
            if config.all_sources:
                state["source_ids"] = list(range(graph.node_count))
            else:
                state["source_ids"] = [graph.node_id(config.source)]
            state["current_step"] = "sources_resolved"
        except UnknownNodeError as e:
            self._fail(state, f"source node not in graph: {e.node}", EXIT_RUNTIME_ERROR)

        return state

    def _evaluate_node(self, state: QueryState) -> QueryState:
        config = state["config"]
        graph = state["graph"]
        sources = state["source_ids"]
        self.logger.info(f"Evaluating mode '{config.mode}' from {len(sources)} source(s)")

        try:
            def run(source: NodeId) -> List[QueryAnswer]:
                query = bind_rpq(graph, source, state["ast"], state["query_dfa"])
                return evaluate_source(graph, query, config.mode, config.limit)

            if config.max_workers > 1 and len(sources) > 1:
                with ThreadPoolExecutor(max_workers=config.max_workers) as executor:
                    per_source = list(executor.map(run, sources))
            else:
                per_source = [run(source) for source in sources]

            state["answers"] = [answer for answers in per_source for answer in answers]
            state["current_step"] = "evaluated"
            self.logger.info(f"Evaluation finished with {len(state['answers'])} answers")
        except RpqError as e:
            self._fail(state, f"evaluation failed: {e}", EXIT_RUNTIME_ERROR)

        return state

    def _format_results_node(self, state: QueryState) -> QueryState:
        config = state["config"]
        graph = state["graph"]
        render = render_jsonl if config.output_format == "jsonl" else render_text

        lines: List[str] = []
        for answer in state["answers"]:
            lines.extend(render(graph, answer, config.mode, config.all_sources))
        state["output_lines"] = lines
        state["current_step"] = "formatted"
        return state

    # =============================================================================
    # ROUTING AND HELPERS
    # =============================================================================

    def _route_to(self, next_step: str):
        def route(state: QueryState) -> str:
            if state.get("error_message"):
                return END
            return next_step
        return route

    def _fail(self, state: QueryState, message: str, exit_status: int) -> None:
        self.logger.error(message)
        state["error_message"] = message
        state["exit_status"] = exit_status
        state["current_step"] = "error"

    @staticmethod
    def _read_query_file(path: str) -> str:
        with open(path, "r", encoding="utf-8") as handle:
            lines = [line.strip() for line in handle if line.strip() and not line.lstrip().startswith("#")]
        return " ".join(lines)

    # =============================================================================
    # PUBLIC INTERFACE METHODS
    # =============================================================================

    def process_query(self, config: CliConfig) -> Dict[str, Any]:
        """
        Run one query through the workflow

        Returns:
            Dict with success flag, exit status, rendered lines, optional
            automaton dump and the final workflow state
        """
        initial_state = QueryState(
            config=config,
            graph=None,
            ast=None,
            query_dfa=None,
            automaton_dump=None,
            source_ids=[],
            answers=[],
            output_lines=[],
            current_step="initialized",
            error_message=None,
            exit_status=EXIT_OK,
        )

        final_state = self.compiled_graph.invoke(initial_state)
        self.logger.info(f"Workflow completed - Status: {final_state['current_step']}")

        return {
            "success": not final_state.get("error_message"),
            "exit_status": final_state.get("exit_status", EXIT_OK),
            "output_lines": final_state.get("output_lines", []),
            "automaton_dump": final_state.get("automaton_dump"),
            "error_message": final_state.get("error_message"),
            "state": final_state,
        }


def evaluate_source(graph: LabelledGraph, query: Rpq, mode: str, limit: Optional[int]) -> List[QueryAnswer]:
    """Run one engine mode for one compiled query and collect its answers in emission order"""
    answers: List[QueryAnswer] = []
    source = query.source

    if mode == "reach":
        answers = [QueryAnswer(source, node) for node in sorted(eval_reach(graph, query))]
    elif mode == "one":
        eval_single_path(
            graph, query,
            lambda node, path: answers.append(QueryAnswer(source, node, path.length, paths=[path])),
        )
    elif mode == "count":
        eval_count(
            graph, query,
            lambda node, depth, count: answers.append(QueryAnswer(source, node, depth, count=count)),
        )
    elif mode == "all":
        def collect(node: NodeId, depth: int, handle) -> None:
            if limit is None:
                answers.append(QueryAnswer(source, node, depth, paths=list(handle)))
                return
            paths = list(islice(handle, limit + 1))
            answers.append(QueryAnswer(source, node, depth, paths=paths[:limit], truncated=len(paths) > limit))

        eval_all_shortest(graph, query, collect)
    else:
        raise ValueError(f"unknown mode: {mode}")

    return answers


def format_path(graph: LabelledGraph, path: Path) -> str:
    """`n1 -a-> n2 -b-> n3`; the empty path is just its node"""
    parts = [graph.node_name(path.nodes[0])]
    for label, node in zip(path.labels, path.nodes[1:]):
        parts.append(f"-{graph.label_name(label)}-> {graph.node_name(node)}")
    return " ".join(parts)


def render_text(graph: LabelledGraph, answer: QueryAnswer, mode: str, with_source: bool) -> List[str]:
    prefix = f"{graph.node_name(answer.source)}\t" if with_source else ""
    node = graph.node_name(answer.node)
    if mode == "reach":
        return [f"{prefix}{node}"]
    if mode == "count":
        return [f"{prefix}{node}\t{answer.depth}\t{answer.count}"]
    return [f"{prefix}{node}\t{answer.depth}\t{format_path(graph, path)}" for path in answer.paths]


def render_jsonl(graph: LabelledGraph, answer: QueryAnswer, mode: str, with_source: bool) -> List[str]:
    record: Dict[str, Any] = {}
    if with_source:
        record["source"] = graph.node_name(answer.source)
    record["node"] = graph.node_name(answer.node)
    if mode == "reach":
        return [json.dumps(record, ensure_ascii=False)]
    record["depth"] = answer.depth
    if mode == "count":
        record["count"] = answer.count
    else:
        record["paths"] = [
            {
                "nodes": [graph.node_name(node) for node in path.nodes],
                "labels": [graph.label_name(label) for label in path.labels],
            }
            for path in answer.paths
        ]
        if mode == "all":
            record["truncated"] = answer.truncated
    return [json.dumps(record, ensure_ascii=False)]
