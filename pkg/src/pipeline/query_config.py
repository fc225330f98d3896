"""
Query configuration model shared by the command line and the query workflow
"""

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

Mode = Literal["reach", "one", "all", "count"]
OutputFormat = Literal["text", "jsonl"]


class CliConfig(BaseModel):
    """
    One invocation: which graph, which source(s), which regex, which mode

    Exactly one of `source` / `all_sources` and exactly one of `regex` /
    `query_file` must be given.
    """

    model_config = ConfigDict(extra="forbid")

    graph_path: str
    source: Optional[str] = None
    all_sources: bool = False
    regex: Optional[str] = None
    query_file: Optional[str] = None
    mode: Mode = "all"
    limit: Optional[int] = Field(default=None, ge=1)
    output_format: OutputFormat = "text"
    dump_automaton: bool = False
    max_workers: int = Field(default=1, ge=1)

    @model_validator(mode="after")
    def _check_exclusive_choices(self) -> "CliConfig":
        if (self.source is None) == (not self.all_sources):
            raise ValueError("give exactly one of --source or --all-sources")
        if (self.regex is None) == (self.query_file is None):
            raise ValueError("give exactly one of --regex or --query-file")
        return self
