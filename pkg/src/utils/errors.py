"""
Exception hierarchy for the RPQ engine

Library modules raise these; the query workflow catches them and maps them
to exit statuses.
"""

from typing import Optional


class RpqError(Exception):
    """Base class for every error raised by the engine"""


class GraphParseError(RpqError):
    """Malformed line in a graph file"""

    def __init__(self, message: str, line_number: int):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class UnknownNodeError(RpqError, LookupError):
    """Node id or node name not present in the graph"""

    def __init__(self, node):
        super().__init__(f"unknown node: {node!r}")
        self.node = node


class UnknownLabelError(RpqError, LookupError):
    """Label name or label id not present in the graph"""

    def __init__(self, label):
        super().__init__(f"unknown label: {label!r}")
        self.label = label


class UnknownEntryError(RpqError, LookupError):
    """Entry identifier not present in a path DAG"""

    def __init__(self, entry_id):
        super().__init__(f"unknown DAG entry: {entry_id!r}")
        self.entry_id = entry_id


class RegexSyntaxError(RpqError):
    """Invalid regular expression text"""

    def __init__(self, message: str, position: int, text: Optional[str] = None):
        super().__init__(f"{message} at position {position}")
        self.position = position
        self.text = text


class OracleSizeError(RpqError):
    """Instance too large for the brute-force reference implementations"""
