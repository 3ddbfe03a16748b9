"""Deterministic arithmetic expression evaluation.

Tokenizer + recursive-descent parser + evaluator used by both agents to
audit numerical claims. Semantics follow the teaching language the course
materials are written in: `/` always yields a real, `//` is floor division,
`%` takes the sign of the divisor, and integer arithmetic is exact
(arbitrary precision) until a `/` or a float literal introduces a real.
`^` is accepted as a synonym for `**` since prompts and materials often
write powers in mathematical notation.

Grammar (precedence high to low):

    atom    := NUMBER | '(' expr ')'
    power   := atom ('**' unary)?          # right-associative
    unary   := '-' unary | power
    term    := unary (('*'|'/'|'//'|'%') unary)*
    expr    := term (('+'|'-') term)*
"""

import math
from dataclasses import dataclass
from enum import Enum

from .errors import CodequizError

# Cap for exact-integer exponentiation; larger exponents are an Overflow.
MAX_EXACT_EXPONENT = 4096


class ArithError(CodequizError):
    """Base class for tokenizer/parser/evaluator failures."""


class UnexpectedCharacter(ArithError):
    def __init__(self, char: str, position: int):
        super().__init__(f"unexpected character {char!r} at offset {position}")
        self.char = char
        self.position = position


class ParseError(ArithError):
    def __init__(self, position: int, expected: str):
        super().__init__(f"expected {expected} at offset {position}")
        self.position = position
        self.expected = expected


class DivisionByZero(ArithError):
    def __init__(self, position: int = -1):
        super().__init__("division by zero")
        self.position = position


class Overflow(ArithError):
    def __init__(self, detail: str = "result out of range"):
        super().__init__(detail)


class TokenKind(Enum):
    NUMBER = "number"
    PLUS = "plus"
    MINUS = "minus"
    STAR = "star"
    SLASH = "slash"
    DOUBLE_SLASH = "double_slash"
    PERCENT = "percent"
    POWER = "power"
    LPAREN = "lparen"
    RPAREN = "rparen"


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    lexeme: str
    position: int


_SINGLE_CHAR = {
    "+": TokenKind.PLUS,
    "-": TokenKind.MINUS,
    "%": TokenKind.PERCENT,
    "^": TokenKind.POWER,
    "(": TokenKind.LPAREN,
    ")": TokenKind.RPAREN,
}


def tokenize(expr: str) -> list[Token]:
    """Lex an expression into tokens; whitespace is skipped.

    Both `**` and `^` lex as power, `//` as double_slash.
    """
    tokens: list[Token] = []
    i = 0
    n = len(expr)
    while i < n:
        ch = expr[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit() or (ch == "." and i + 1 < n and expr[i + 1].isdigit()):
            start = i
            while i < n and expr[i].isdigit():
                i += 1
            if i < n and expr[i] == ".":
                i += 1
                while i < n and expr[i].isdigit():
                    i += 1
            tokens.append(Token(TokenKind.NUMBER, expr[start:i], start))
            continue
        if ch == "*":
            if i + 1 < n and expr[i + 1] == "*":
                tokens.append(Token(TokenKind.POWER, "**", i))
                i += 2
            else:
                tokens.append(Token(TokenKind.STAR, "*", i))
                i += 1
            continue
        if ch == "/":
            if i + 1 < n and expr[i + 1] == "/":
                tokens.append(Token(TokenKind.DOUBLE_SLASH, "//", i))
                i += 2
            else:
                tokens.append(Token(TokenKind.SLASH, "/", i))
                i += 1
            continue
        if ch in _SINGLE_CHAR:
            tokens.append(Token(_SINGLE_CHAR[ch], ch, i))
            i += 1
            continue
        raise UnexpectedCharacter(ch, i)
    return tokens


Number = int | float


class _Parser:
    def __init__(self, tokens: list[Token], source_len: int):
        self.tokens = tokens
        self.pos = 0
        self.source_len = source_len

    def _peek(self) -> Token | None:
        if self.pos < len(self.tokens):
            return self.tokens[self.pos]
        return None

    def _next_position(self) -> int:
        tok = self._peek()
        return tok.position if tok is not None else self.source_len

    def _match(self, *kinds: TokenKind) -> Token | None:
        tok = self._peek()
        if tok is not None and tok.kind in kinds:
            self.pos += 1
            return tok
        return None

    def parse(self) -> Number:
        value = self.expr()
        if self.pos != len(self.tokens):
            raise ParseError(self._next_position(), "end of expression")
        return value

    def expr(self) -> Number:
        value = self.term()
        while True:
            tok = self._match(TokenKind.PLUS, TokenKind.MINUS)
            if tok is None:
                return value
            rhs = self.term()
            value = self._apply(tok, value, rhs)

    def term(self) -> Number:
        value = self.unary()
        while True:
            tok = self._match(
                TokenKind.STAR,
                TokenKind.SLASH,
                TokenKind.DOUBLE_SLASH,
                TokenKind.PERCENT,
            )
            if tok is None:
                return value
            rhs = self.unary()
            value = self._apply(tok, value, rhs)

    def unary(self) -> Number:
        if self._match(TokenKind.MINUS):
            return self._check_finite(-self.unary())
        return self.power()

    def power(self) -> Number:
        base = self.atom()
        tok = self._match(TokenKind.POWER)
        if tok is None:
            return base
        # recursing into unary makes `**` right-associative and lets the
        # exponent carry its own sign, e.g. 2 ** -3
        exponent = self.unary()
        return self._pow(tok, base, exponent)

    def atom(self) -> Number:
        tok = self._match(TokenKind.NUMBER)
        if tok is not None:
            if "." in tok.lexeme:
                return float(tok.lexeme)
            return int(tok.lexeme)
        if self._match(TokenKind.LPAREN):
            value = self.expr()
            if self._match(TokenKind.RPAREN) is None:
                raise ParseError(self._next_position(), "')'")
            return value
        raise ParseError(self._next_position(), "a number or '('")

    def _apply(self, tok: Token, lhs: Number, rhs: Number) -> Number:
        try:
            if tok.kind is TokenKind.PLUS:
                value = lhs + rhs
            elif tok.kind is TokenKind.MINUS:
                value = lhs - rhs
            elif tok.kind is TokenKind.STAR:
                value = lhs * rhs
            elif tok.kind is TokenKind.SLASH:
                value = lhs / rhs
            elif tok.kind is TokenKind.DOUBLE_SLASH:
                value = lhs // rhs
            else:
                value = lhs % rhs
        except ZeroDivisionError:
            raise DivisionByZero(tok.position) from None
        except OverflowError:
            raise Overflow() from None
        return self._check_finite(value)

    def _pow(self, tok: Token, base: Number, exponent: Number) -> Number:
        if isinstance(base, int) and isinstance(exponent, int):
            if abs(exponent) > MAX_EXACT_EXPONENT:
                raise Overflow(f"exponent magnitude exceeds {MAX_EXACT_EXPONENT}")
        try:
            value = base**exponent
        except ZeroDivisionError:
            raise DivisionByZero(tok.position) from None
        except OverflowError:
            raise Overflow() from None
        return self._check_finite(value)

    @staticmethod
    def _check_finite(value: Number) -> Number:
        if isinstance(value, complex):
            # host ** yields complex for a negative base and fractional
            # exponent; the tool only reports reals
            raise Overflow("complex result")
        if isinstance(value, float) and not math.isfinite(value):
            raise Overflow("non-finite result")
        return value


def evaluate_expression(expr: str) -> Number:
    """Evaluate an arithmetic expression under standard precedence.

    Returns an exact int when no `/` or float literal is involved, a float
    otherwise.
    """
    return _Parser(tokenize(expr), len(expr)).parse()


def is_exact(value: Number) -> bool:
    return isinstance(value, int)


def render_value(value: Number) -> str:
    """Render a result the way the tool reports it: ints without a decimal
    point, floats via their shortest repr."""
    return str(value)
