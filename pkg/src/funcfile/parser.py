"""
Recursive descent parser for polynomial function files (.pvf).

Grammar (one statement per line, '#' starts a comment):

    program   := vars_line func_line+
    vars_line := "vars:" ident+
    func_line := ident "=" expr
    expr      := ["-"] term (("+"|"-") term)*
    term      := factor ("*" factor)*
    factor    := number | ident ["^" posint] | "(" expr ")"
    number    := integer | integer "/" integer | integer "." digits

Expressions are expanded into canonical Polynomials while parsing.
"""
import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from src.errors import (
    DivisionUnsupported,
    DuplicateName,
    FunctionSyntaxError,
    NonIntegerExponent,
    UnknownVariable,
)
from src.funcfile.polynomial import Polynomial, VectorField

logger = logging.getLogger(__name__)

IDENT_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*")
NUMBER_RE = re.compile(r"\d+(?:/\d+|\.\d+)?", re.ASCII)
VARS_RE = re.compile(r"^(\s*)vars\s*:")
OPERATORS = "+-*^()=/"


@dataclass(frozen=True)
class Token:
    kind: str  # 'number', 'ident', 'op', 'end'
    text: str
    line: int
    column: int


def tokenize_line(text: str, line: int) -> List[Token]:
    """Split one (comment-free) line into tokens; columns are 1-based."""
    tokens = []
    pos = 0
    while pos < len(text):
        char = text[pos]
        if char.isspace():
            pos += 1
            continue
        match = NUMBER_RE.match(text, pos)
        if match:
            tokens.append(Token("number", match.group(0), line, pos + 1))
            pos = match.end()
            # '2.5.1' or '2.' style leftovers
            if pos < len(text) and text[pos] == ".":
                raise FunctionSyntaxError(f"malformed number near '{text[match.start():pos + 1]}'", line, pos + 1)
            continue
        match = IDENT_RE.match(text, pos)
        if match:
            tokens.append(Token("ident", match.group(0), line, pos + 1))
            pos = match.end()
            continue
        if char in OPERATORS:
            tokens.append(Token("op", char, line, pos + 1))
            pos += 1
            continue
        raise FunctionSyntaxError(f"unexpected character '{char}'", line, pos + 1)
    tokens.append(Token("end", "", line, len(text) + 1))
    return tokens


def _number_value(token: Token) -> Fraction:
    if "/" in token.text:
        numerator, denominator = token.text.split("/")
        if int(denominator) == 0:
            raise FunctionSyntaxError("zero denominator in fraction literal", token.line, token.column)
        return Fraction(int(numerator), int(denominator))
    return Fraction(token.text)


class ExpressionParser:
    """Parses the right-hand side of one function line into a Polynomial."""

    def __init__(self, tokens: List[Token], variables: Sequence[str]):
        self.tokens = tokens
        self.variables = tuple(variables)
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def at_op(self, ops: str) -> bool:
        token = self.peek()
        return token.kind == "op" and token.text in ops

    def expect_op(self, op: str) -> Token:
        token = self.peek()
        if token.kind == "op" and token.text == "/":
            raise DivisionUnsupported(token.line, token.column)
        if not (token.kind == "op" and token.text == op):
            found = token.text or "end of line"
            raise FunctionSyntaxError(f"expected '{op}', found '{found}'", token.line, token.column)
        return self.advance()

    def parse(self) -> Polynomial:
        result = self.expr()
        token = self.peek()
        if token.kind != "end":
            self._unexpected(token)
        return result

    def expr(self) -> Polynomial:
        negate = False
        if self.at_op("-"):
            self.advance()
            negate = True
        result = self.term()
        if negate:
            result = -result
        while self.at_op("+-"):
            op = self.advance().text
            rhs = self.term()
            result = result + rhs if op == "+" else result - rhs
        return result

    def term(self) -> Polynomial:
        result = self.factor()
        while self.at_op("*"):
            self.advance()
            result = result * self.factor()
        token = self.peek()
        if token.kind in ("number", "ident") or (token.kind == "op" and token.text == "("):
            raise FunctionSyntaxError(
                f"implicit multiplication before '{token.text}'; write '*' explicitly",
                token.line,
                token.column,
            )
        if token.kind == "op" and token.text == "/":
            raise DivisionUnsupported(token.line, token.column)
        if token.kind == "op" and token.text == "^":
            raise FunctionSyntaxError("exponents apply to variables only", token.line, token.column)
        return result

    def factor(self) -> Polynomial:
        token = self.peek()
        if token.kind == "number":
            self.advance()
            return Polynomial.constant(self.variables, _number_value(token))
        if token.kind == "ident":
            self.advance()
            if token.text not in self.variables:
                raise UnknownVariable(token.text, token.line, token.column)
            base = Polynomial.variable(self.variables, token.text)
            if self.at_op("^"):
                self.advance()
                return base.power(self._exponent())
            return base
        if token.kind == "op" and token.text == "(":
            self.advance()
            inner = self.expr()
            self.expect_op(")")
            return inner
        self._unexpected(token)

    def _exponent(self) -> int:
        token = self.peek()
        if token.kind == "op" and token.text == "-":
            following = self.tokens[self.pos + 1]
            raise NonIntegerExponent("-" + following.text, token.line, token.column)
        if token.kind != "number":
            found = token.text or "end of line"
            raise FunctionSyntaxError(f"expected exponent, found '{found}'", token.line, token.column)
        self.advance()
        if not token.text.isdigit() or int(token.text) == 0:
            raise NonIntegerExponent(token.text, token.line, token.column)
        return int(token.text)

    def _unexpected(self, token: Token):
        if token.kind == "op" and token.text == "/":
            raise DivisionUnsupported(token.line, token.column)
        found = token.text or "end of line"
        raise FunctionSyntaxError(f"unexpected '{found}'", token.line, token.column)


def _strip_comment(line: str) -> str:
    index = line.find("#")
    return line if index < 0 else line[:index]


def _parse_vars_line(text: str, line: int) -> Tuple[str, ...]:
    match = VARS_RE.match(text)
    names = []
    pos = match.end()
    for item in re.finditer(r"\S+", text[pos:]):
        name = item.group(0)
        column = pos + item.start() + 1
        if not IDENT_RE.fullmatch(name):
            raise FunctionSyntaxError(f"invalid variable name '{name}'", line, column)
        if name in names:
            raise DuplicateName(name, line)
        names.append(name)
    if not names:
        raise FunctionSyntaxError("'vars:' declares no variables", line, match.end() + 1)
    return tuple(names)


def parse_function_file(text: str) -> VectorField:
    """
    Parse a function file into a canonical VectorField.

    Args:
        text: Function file contents

    Returns:
        VectorField with every function expanded to canonical form

    Raises:
        FunctionSyntaxError, UnknownVariable, NonIntegerExponent,
        DivisionUnsupported, DuplicateName
    """
    variables: Optional[Tuple[str, ...]] = None
    functions: List[Tuple[str, Polynomial]] = []
    seen = set()

    for number, raw in enumerate(text.splitlines(), start=1):
        body = _strip_comment(raw)
        if not body.strip():
            continue
        if VARS_RE.match(body):
            if variables is not None:
                raise FunctionSyntaxError("second 'vars:' line", number, 1)
            variables = _parse_vars_line(body, number)
            continue
        if variables is None:
            raise FunctionSyntaxError("expected 'vars:' line before functions", number, 1)

        tokens = tokenize_line(body, number)
        name = tokens[0]
        if name.kind != "ident":
            raise FunctionSyntaxError("expected function name", name.line, name.column)
        if len(tokens) < 2 or not (tokens[1].kind == "op" and tokens[1].text == "="):
            token = tokens[1]
            raise FunctionSyntaxError(f"expected '=' after '{name.text}'", token.line, token.column)
        if name.text in seen:
            raise DuplicateName(name.text, number)
        seen.add(name.text)

        poly = ExpressionParser(tokens[2:], variables).parse()
        functions.append((name.text, poly))

    if variables is None:
        raise FunctionSyntaxError("missing 'vars:' line", 1, 1)
    if not functions:
        raise FunctionSyntaxError("expected at least one function definition", 1, 1)

    logger.debug(f"Parsed {len(functions)} functions over {len(variables)} variables")
    return VectorField(variables, tuple(functions))
