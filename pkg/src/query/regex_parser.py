"""
Regular Expression Parser for RPQs
Parses textual regular expressions over edge labels into a syntax tree

GRAMMAR (lowest to highest precedence):
    alternation   := concatenation ('|' concatenation)*
    concatenation := postfix (['.'] postfix)*
    postfix       := atom ('*' | '+' | '?')*
    atom          := IDENT | `quoted label` | '(' alternation ')' | '(' ')'

IDENT is [A-Za-z0-9_]+, back-quoted labels may contain anything except a
back-quote, and '()' is the empty word.
"""

import re
from dataclasses import dataclass
from typing import Callable, List, Tuple, TypeVar, Union as TypingUnion

from ..utils.errors import RegexSyntaxError


@dataclass(frozen=True)
class Symbol:
    label: str


@dataclass(frozen=True)
class Epsilon:
    pass


@dataclass(frozen=True)
class Concat:
    left: "RegexAst"
    right: "RegexAst"


@dataclass(frozen=True)
class Union:
    left: "RegexAst"
    right: "RegexAst"


@dataclass(frozen=True)
class Star:
    child: "RegexAst"


@dataclass(frozen=True)
class Plus:
    child: "RegexAst"


@dataclass(frozen=True)
class Optional:
    child: "RegexAst"


RegexAst = TypingUnion[Symbol, Epsilon, Concat, Union, Star, Plus, Optional]

_IDENT = re.compile(r"[A-Za-z0-9_]+")
_POSTFIX = {"*": Star, "+": Plus, "?": Optional}

Token = Tuple[str, str, int]  # (kind, value, position)
T = TypeVar("T")


def _tokenize(text: str) -> List[Token]:
    tokens: List[Token] = []
    pos = 0
    while pos < len(text):
        char = text[pos]
        if char.isspace():
            pos += 1
        elif char in "|.()*+?":
            tokens.append((char, char, pos))
            pos += 1
        elif char == "`":
            end = text.find("`", pos + 1)
            if end < 0:
                raise RegexSyntaxError("unterminated quoted label", pos, text)
            if end == pos + 1:
                raise RegexSyntaxError("empty quoted label", pos, text)
            tokens.append(("label", text[pos + 1:end], pos))
            pos = end + 1
        else:
            match = _IDENT.match(text, pos)
            if match is None:
                raise RegexSyntaxError(f"unexpected character {char!r}", pos, text)
            tokens.append(("label", match.group(0), pos))
            pos = match.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    """Recursive-descent parser over the token list"""

    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.index = 0

    def peek(self) -> Token:
        return self.tokens[self.index]

    def advance(self) -> Token:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def error(self, message: str, token: Token) -> RegexSyntaxError:
        return RegexSyntaxError(message, token[2], self.text)

    def parse(self) -> RegexAst:
        ast = self.alternation()
        token = self.peek()
        if token[0] == ")":
            raise self.error("unbalanced ')'", token)
        if token[0] != "eof":
            raise self.error(f"unexpected {token[1]!r}", token)
        return ast

    def alternation(self) -> RegexAst:
        ast = self.concatenation()
        while self.peek()[0] == "|":
            self.advance()
            ast = Union(ast, self.concatenation())
        return ast

    def concatenation(self) -> RegexAst:
        token = self.peek()
        if token[0] in ("|", ")", "eof"):
            raise self.error("empty alternation branch", token)
        ast = self.postfix()
        while True:
            token = self.peek()
            if token[0] == ".":
                self.advance()
                ast = Concat(ast, self.postfix())
            elif token[0] in ("label", "("):
                ast = Concat(ast, self.postfix())
            else:
                return ast

    def postfix(self) -> RegexAst:
        ast = self.atom()
        while self.peek()[0] in _POSTFIX:
            ast = _POSTFIX[self.advance()[0]](ast)
        return ast

    def atom(self) -> RegexAst:
        token = self.advance()
        kind = token[0]
        if kind == "label":
            return Symbol(token[1])
        if kind == "(":
            if self.peek()[0] == ")":
                self.advance()
                return Epsilon()
            ast = self.alternation()
            closing = self.advance()
            if closing[0] != ")":
                raise self.error("unbalanced '('", token)
            return ast
        if kind in _POSTFIX:
            raise self.error(f"dangling postfix operator {kind!r}", token)
        if kind == "eof":
            raise self.error("unexpected end of expression", token)
        raise self.error(f"unexpected {token[1]!r}", token)


def parse_regex(text: str) -> RegexAst:
    """
    Parse regex text into a RegexAst

    Raises:
        RegexSyntaxError: unbalanced parentheses, dangling postfix operator,
            empty alternation branch, unknown character or parentheses nested
            deeper than the parser's recursion allows (carries position)
    """
    parser = _Parser(text)
    try:
        return parser.parse()
    except RecursionError:
        token = parser.tokens[min(parser.index, len(parser.tokens) - 1)]
        raise parser.error("parentheses nested too deeply", token) from None


def children(ast: RegexAst) -> Tuple[RegexAst, ...]:
    if isinstance(ast, (Concat, Union)):
        return (ast.left, ast.right)
    if isinstance(ast, (Star, Plus, Optional)):
        return (ast.child,)
    return ()


def fold_ast(ast: RegexAst, visit: Callable[[RegexAst, List[T]], T]) -> T:
    """
    Bottom-up evaluation of `visit` over the tree, children left to right

    Runs on an explicit stack: the parser builds left-deep trees for long
    concatenations, far deeper than the interpreter's recursion limit.
    """
    stack: List[Tuple[RegexAst, bool]] = [(ast, False)]
    results: List[T] = []
    while stack:
        node, expanded = stack.pop()
        kids = children(node)
        if not kids:
            results.append(visit(node, []))
        elif expanded:
            values = results[-len(kids):]
            del results[-len(kids):]
            results.append(visit(node, values))
        else:
            stack.append((node, True))
            stack.extend((child, False) for child in reversed(kids))
    return results[0]


def _nullable_step(node: RegexAst, values: List[bool]) -> bool:
    if isinstance(node, Symbol):
        return False
    if isinstance(node, (Epsilon, Star, Optional)):
        return True
    if isinstance(node, Concat):
        return values[0] and values[1]
    if isinstance(node, Union):
        return values[0] or values[1]
    if isinstance(node, Plus):
        return values[0]
    raise TypeError(f"not a regex node: {node!r}")


def nullable(ast: RegexAst) -> bool:
    """True iff the empty word belongs to the language of `ast`"""
    return fold_ast(ast, _nullable_step)


def ast_size(ast: RegexAst) -> int:
    """Number of nodes in the tree"""
    return fold_ast(ast, lambda _node, values: 1 + sum(values))


_PRECEDENCE = {Union: 1, Concat: 2, Star: 3, Plus: 3, Optional: 3}
_POSTFIX_TEXT = {Star: "*", Plus: "+", Optional: "?"}


def _precedence(ast: RegexAst) -> int:
    return _PRECEDENCE.get(type(ast), 4)


def _wrap(child: RegexAst, text: str, minimum: int) -> str:
    return text if _precedence(child) >= minimum else f"({text})"


def _text_step(node: RegexAst, values: List[str]) -> str:
    if isinstance(node, Symbol):
        if _IDENT.fullmatch(node.label):
            return node.label
        if "`" in node.label:
            raise ValueError(f"label {node.label!r} contains a back-quote and has no regex spelling")
        return f"`{node.label}`"
    if isinstance(node, Epsilon):
        return "()"
    if isinstance(node, Union):
        return f"{_wrap(node.left, values[0], 1)} | {_wrap(node.right, values[1], 2)}"
    if isinstance(node, Concat):
        return f"{_wrap(node.left, values[0], 2)} {_wrap(node.right, values[1], 3)}"
    return _wrap(node.child, values[0], 3) + _POSTFIX_TEXT[type(node)]


def to_text(ast: RegexAst) -> str:
    """Canonical printer; parse_regex(to_text(ast)) == ast"""
    return fold_ast(ast, _text_step)
