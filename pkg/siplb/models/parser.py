# siplb/models/parser.py
"""
Expression parser.

Grammar (see docs/instance_format.md for the full EBNF):

    expr    := term   (("+" | "-") term)*
    term    := power  (("*" | "/") power)*
    power   := unary  ("^" INTEGER)*
    unary   := "-" unary | primary
    primary := NUMBER | VARIABLE | FUNCTION "(" expr ")" | "(" expr ")"

Unary minus binds tighter than "^", so ``-x1^2`` reads ``(-x1)^2``. All
binary operators are left-associative. Whitespace is ignored.
"""

import re
from dataclasses import dataclass
from typing import List, Optional

from siplb.core.exceptions import ParseError, UnknownFunctionError
from siplb.models.expression import FUNCTIONS, VARIABLE_PATTERN, Expression

_NUMBER = re.compile(r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")
_IDENTIFIER = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_INTEGER = re.compile(r"\d+")
_OPERATORS = "+-*/^()"


@dataclass(frozen=True)
class Token:
    kind: str  # "number", "ident", an operator character, or "end"
    text: str
    offset: int


def _byte_offset(text: str, index: int) -> int:
    return len(text[:index].encode("utf-8"))


def tokenize(text: str) -> List[Token]:
    """Split expression text into tokens, each tagged with its byte offset."""
    tokens: List[Token] = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c in _OPERATORS:
            tokens.append(Token(c, c, _byte_offset(text, i)))
            i += 1
            continue
        match = _NUMBER.match(text, i)
        if match:
            tokens.append(Token("number", match.group(), _byte_offset(text, i)))
            i = match.end()
            continue
        match = _IDENTIFIER.match(text, i)
        if match:
            tokens.append(Token("ident", match.group(), _byte_offset(text, i)))
            i = match.end()
            continue
        raise ParseError(_byte_offset(text, i), f"Unexpected character {c!r}")
    tokens.append(Token("end", "", _byte_offset(text, len(text))))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        token = self.tokens[self.pos]
        if token.kind != "end":
            self.pos += 1
        return token

    def accept(self, kind: str) -> Optional[Token]:
        if self.current.kind == kind:
            return self.advance()
        return None

    def expect(self, kind: str, what: str) -> Token:
        token = self.current
        if token.kind != kind:
            raise ParseError(token.offset, f"Expected {what}, found {self._describe(token)}")
        return self.advance()

    @staticmethod
    def _describe(token: Token) -> str:
        return "end of input" if token.kind == "end" else repr(token.text)

    def parse(self) -> Expression:
        result = self.expr()
        if self.current.kind != "end":
            raise ParseError(self.current.offset, f"Unexpected {self._describe(self.current)}")
        return result

    def expr(self) -> Expression:
        node = self.term()
        while self.current.kind in ("+", "-"):
            op = self.advance().kind
            node = Expression.create(op, node, self.term())
        return node

    def term(self) -> Expression:
        node = self.power()
        while self.current.kind in ("*", "/"):
            op = self.advance().kind
            node = Expression.create(op, node, self.power())
        return node

    def power(self) -> Expression:
        node = self.unary()
        while self.accept("^"):
            token = self.current
            if token.kind != "number" or not _INTEGER.fullmatch(token.text):
                raise ParseError(
                    token.offset,
                    f"Exponent must be a non-negative integer literal, found {self._describe(token)}",
                )
            self.advance()
            node = Expression.create("^", node, int(token.text))
        return node

    def unary(self) -> Expression:
        if self.accept("-"):
            return Expression.create("neg", self.unary())
        return self.primary()

    def primary(self) -> Expression:
        token = self.current
        if token.kind == "number":
            self.advance()
            try:
                return Expression.create("const", float(token.text))
            except ValueError as exc:
                raise ParseError(token.offset, f"Invalid number {token.text!r}") from exc
        if token.kind == "ident":
            self.advance()
            if self.current.kind == "(":
                if token.text not in FUNCTIONS:
                    raise UnknownFunctionError(token.offset, token.text)
                self.advance()
                argument = self.expr()
                self.expect(")", "')'")
                return Expression.create(token.text, argument)
            if VARIABLE_PATTERN.match(token.text):
                return Expression.create("var", token.text)
            if token.text in FUNCTIONS:
                raise ParseError(self.current.offset, f"Expected '(' after function '{token.text}'")
            raise ParseError(token.offset, f"Unknown identifier '{token.text}' (expected x<k> or y<k>)")
        if token.kind == "(":
            self.advance()
            node = self.expr()
            self.expect(")", "')'")
            return node
        if token.kind == "end":
            raise ParseError(token.offset, "Unexpected end of input")
        raise ParseError(token.offset, f"Unexpected {self._describe(token)}")


def parse(text: str) -> Expression:
    """
    Parse expression text into an AST.

    Raises:
        ParseError: For malformed input, with the byte offset of the problem
        UnknownFunctionError: For calls to functions other than sin, cos, exp
    """
    return _Parser(text).parse()
