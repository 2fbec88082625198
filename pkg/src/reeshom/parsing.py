"""Tokenizer and recursive-descent polynomial parser, shared with the task-file reader.

Grammar (whitespace insignificant, '#' starts a line comment):

    poly   := '-'? term (('+'|'-') term)*
    term   := coef ('*' factor)* | factor ('*' factor)*
    factor := ident ('^' nat)? | '(' poly ')'
    coef   := int ('/' nat)?
"""
from __future__ import annotations

from .errors import TaskError, ValidationError
from .poly import GradedRing, Polynomial

MAX_EXPONENT = 10**6
MAX_NESTING = 100

_SYMBOLS = "+-*/^()[]{},=:;"


class Token:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind, text, line, col):
        self.kind = kind  # 'int' | 'ident' | one of _SYMBOLS | 'eof'
        self.text = text
        self.line = line
        self.col = col

    def __repr__(self):
        return f"Token({self.kind!r}, {self.text!r}, {self.line}:{self.col})"


def tokenize(text: str):
    tokens = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(Token("int", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(Token("ident", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch in _SYMBOLS:
            tokens.append(Token(ch, ch, line, col))
            i += 1
            col += 1
            continue
        raise TaskError(f"unexpected character {ch!r}", line, col)
    tokens.append(Token("eof", "", line, col))
    return tokens


class TokenStream:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def accept(self, kind) -> Token | None:
        if self.tokens[self.pos].kind == kind:
            return self.next()
        return None

    def expect(self, kind, what=None) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            shown = tok.text or "end of input"
            raise TaskError(f"unexpected {shown!r}", tok.line, tok.col, [what or kind])
        return self.next()

    def error(self, message, expected=None):
        tok = self.peek()
        raise TaskError(message, tok.line, tok.col, expected)


def parse_nat(stream: TokenStream, limit=None) -> int:
    tok = stream.expect("int", "number")
    value = int(tok.text)
    if limit is not None and value > limit:
        raise TaskError(f"number {value} exceeds limit {limit}", tok.line, tok.col)
    return value


def parse_int(stream: TokenStream) -> int:
    sign = -1 if stream.accept("-") else 1
    return sign * parse_nat(stream)


class PolyParser:
    """Parses the polynomial grammar against a fixed ring."""

    def __init__(self, ring: GradedRing):
        self.ring = ring
        self.index = {name: i for i, name in enumerate(ring.names)}
        self._depth = 0

    def parse(self, stream: TokenStream) -> Polynomial:
        self._depth += 1
        if self._depth > MAX_NESTING:
            tok = stream.peek()
            raise TaskError("expression nested too deeply", tok.line, tok.col)
        try:
            result = self._term(stream, negate=bool(stream.accept("-")))
            while True:
                if stream.accept("+"):
                    result = result + self._term(stream, negate=False)
                elif stream.accept("-"):
                    result = result + self._term(stream, negate=True)
                else:
                    return result
        finally:
            self._depth -= 1

    def parse_string(self, text: str) -> Polynomial:
        stream = TokenStream(tokenize(text))
        p = self.parse(stream)
        stream.expect("eof", "end of input")
        return p

    def _term(self, stream: TokenStream, negate: bool) -> Polynomial:
        tok = stream.peek()
        if tok.kind == "int":
            part = self._coef(stream)
        elif tok.kind in ("ident", "("):
            part = self._factor(stream)
        else:
            stream.error("expected a term", ["number", "variable", "'('"])
        while stream.accept("*"):
            part = part * self._factor(stream)
        return -part if negate else part

    def _coef(self, stream: TokenStream) -> Polynomial:
        tok = stream.expect("int", "number")
        num = int(tok.text)
        if stream.accept("/"):
            den_tok = stream.expect("int", "number")
            den = int(den_tok.text)
            if den == 0:
                raise TaskError("zero denominator", den_tok.line, den_tok.col)
            try:
                value = self.ring.field.fraction(num, den)
            except ValidationError as exc:
                raise TaskError(str(exc), den_tok.line, den_tok.col) from None
        else:
            value = self.ring.field.from_int(num)
        return self.ring.constant(value)

    def _factor(self, stream: TokenStream) -> Polynomial:
        tok = stream.peek()
        if tok.kind == "ident":
            stream.next()
            i = self.index.get(tok.text)
            if i is None:
                raise TaskError(f"unknown identifier {tok.text!r}", tok.line, tok.col)
            base = self.ring.variable(i)
            if stream.accept("^"):
                return base ** parse_nat(stream, limit=MAX_EXPONENT)
            return base
        if tok.kind == "(":
            stream.next()
            inner = self.parse(stream)
            stream.expect(")", "')'")
            return inner
        stream.error("expected a factor", ["variable", "'('"])


def parse_polynomial(text: str, ring: GradedRing) -> Polynomial:
    return PolyParser(ring).parse_string(text)
