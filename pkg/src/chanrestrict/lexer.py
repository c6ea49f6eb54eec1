"""Tiny shared tokenizer for the text formats (``.gt``, ``.bmsc``, ``.hmsc``, ``.csm``)."""
from __future__ import annotations

import re
from typing import NamedTuple

_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r\n]+)|(?P<comment>#[^\n]*)|(?P<sym>->|[:;{}=.()+!?,])"
    r"|(?P<num>[0-9]+(?![A-Za-z_]))|(?P<id>[A-Za-z_][A-Za-z0-9_]*)"
)


class ParseError(ValueError):
    def __init__(self, msg: str, line: int | None = None, col: int | None = None):
        self.line, self.col = line, col
        self.msg = msg
        where = f"{line}:{col}: " if line is not None else ""
        super().__init__(where + msg)


class Token(NamedTuple):
    kind: str  # id, num, sym, eof
    text: str
    line: int
    col: int


def tokenize(text: str, error=ParseError) -> list[Token]:
    toks = []
    pos, line, col = 0, 1, 1
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise error(f"unexpected character {text[pos]!r}", line, col)
        kind, s = m.lastgroup, m.group()
        if kind not in ("ws", "comment"):
            toks.append(Token(kind, s, line, col))
        nl = s.count("\n")
        if nl:
            line += nl
            col = len(s) - s.rfind("\n")
        else:
            col += len(s)
        pos = m.end()
    toks.append(Token("eof", "", line, col))
    return toks


class TokenStream:
    def __init__(self, text: str, error=ParseError):
        self.error_cls = error
        self.toks = tokenize(text, error)
        self.i = 0

    def peek(self, off: int = 0) -> Token:
        return self.toks[min(self.i + off, len(self.toks) - 1)]

    def at(self, text: str, off: int = 0) -> bool:
        tok = self.peek(off)
        return tok.kind in ("sym", "id") and tok.text == text

    def error(self, msg: str, tok: Token | None = None):
        tok = tok or self.peek()
        raise self.error_cls(msg, tok.line, tok.col)

    def describe(self, tok: Token) -> str:
        return repr(tok.text) if tok.kind != "eof" else "end of input"

    def expect(self, text: str) -> Token:
        tok = self.peek()
        if tok.text != text or tok.kind == "eof":
            self.error(f"expected {text!r}, found {self.describe(tok)}")
        self.i += 1
        return tok

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.i += 1
            return True
        return False

    def ident(self, what: str, reserved=()) -> Token:
        tok = self.peek()
        if tok.kind != "id" or tok.text in reserved:
            self.error(f"expected {what}, found {self.describe(tok)}")
        self.i += 1
        return tok

    def number(self, what: str) -> Token:
        tok = self.peek()
        if tok.kind != "num":
            self.error(f"expected {what}, found {self.describe(tok)}")
        self.i += 1
        return tok

    def at_eof(self) -> bool:
        return self.peek().kind == "eof"
