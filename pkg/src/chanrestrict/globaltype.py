"""Global types of multiparty session types.

Concrete syntax::

    G ::= end | t | rec t . G | P->Q:m . G | ( P->Q1:m1 . G1 + ... + P->Qn:mn . Gn )

A message prefix ``P->Q:m . G`` is a choice with a single branch.  ``.``
binds to the right; whitespace is insignificant.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .events import Event, Lasso, receive, send
from .lexer import ParseError, TokenStream

_RESERVED = ("rec", "end")


@dataclass(frozen=True)
class End:
    pass


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Rec:
    var: str
    body: "GlobalType"


@dataclass(frozen=True)
class Branch:
    receiver: str
    msg: str
    cont: "GlobalType"


@dataclass(frozen=True)
class Choice:
    sender: str
    branches: tuple[Branch, ...]


GlobalType = Union[End, Var, Rec, Choice]

END = End()


def exchange(sender: str, receiver: str, msg: str, cont: GlobalType) -> Choice:
    return Choice(sender, (Branch(receiver, msg, cont),))


class GlobalTypeError(ParseError):
    pass


# -- parser -----------------------------------------------------------------------

class _Parser(TokenStream):
    def __init__(self, text: str):
        super().__init__(text, GlobalTypeError)
        self.binders: set[str] = set()

    def parse(self) -> GlobalType:
        g = self.term(frozenset(), frozenset())
        if not self.at_eof():
            self.error(f"unexpected {self.peek().text!r} after global type")
        return g

    def term(self, bound: frozenset, unguarded: frozenset) -> GlobalType:
        tok = self.peek()
        if tok.kind == "id" and tok.text == "end":
            self.i += 1
            return END
        if tok.kind == "id" and tok.text == "rec":
            self.i += 1
            var = self.ident("recursion variable", _RESERVED)
            if var.text in self.binders:
                self.error(f"recursion variable {var.text!r} bound twice", var)
            self.binders.add(var.text)
            self.expect(".")
            body = self.term(bound | {var.text}, unguarded | {var.text})
            return Rec(var.text, body)
        if self.at("("):
            return self.sum(bound, unguarded)
        if tok.kind == "id":
            if self.at("->", 1):
                return self.prefix(bound)
            self.i += 1
            if tok.text not in bound:
                self.error(f"unbound recursion variable {tok.text!r}", tok)
            if tok.text in unguarded:
                self.error(f"unguarded recursion on {tok.text!r}", tok)
            return Var(tok.text)
        self.error(f"unexpected {self.describe(tok)}")

    def prefix(self, bound: frozenset) -> Choice:
        p = self.ident("sender", _RESERVED)
        self.expect("->")
        q = self.ident("receiver", _RESERVED)
        self.expect(":")
        m = self.ident("message")
        if p.text == q.text:
            self.error(f"process {p.text!r} sends to itself", q)
        self.expect(".")
        cont = self.term(bound, frozenset())
        return exchange(p.text, q.text, m.text, cont)

    def sum(self, bound: frozenset, unguarded: frozenset) -> GlobalType:
        self.expect("(")
        alts = [(self.peek(), self.term(bound, unguarded))]
        while self.accept("+"):
            alts.append((self.peek(), self.term(bound, unguarded)))
        self.expect(")")
        if len(alts) == 1:
            return alts[0][1]
        sender = None
        branches: list[Branch] = []
        for tok, alt in alts:
            if not isinstance(alt, Choice) or len(alt.branches) != 1:
                self.error("every alternative of a choice must start with a message", tok)
            if sender is None:
                sender = alt.sender
            elif alt.sender != sender:
                self.error(f"choice mixes senders {sender!r} and {alt.sender!r}", tok)
            br = alt.branches[0]
            if any((b.receiver, b.msg) == (br.receiver, br.msg) for b in branches):
                self.error(f"duplicate branch {sender}->{br.receiver}:{br.msg}", tok)
            branches.append(br)
        return Choice(sender, tuple(branches))


def parse_global_type(text: str) -> GlobalType:
    return _Parser(text).parse()


def check_well_formed(g: GlobalType) -> None:
    """Raise :class:`GlobalTypeError` unless ``g`` obeys the structural rules."""
    binders: set[str] = set()

    def go(t, bound, unguarded):
        if isinstance(t, End):
            return
        if isinstance(t, Var):
            if t.name not in bound:
                raise GlobalTypeError(f"unbound recursion variable {t.name!r}")
            if t.name in unguarded:
                raise GlobalTypeError(f"unguarded recursion on {t.name!r}")
            return
        if isinstance(t, Rec):
            if t.var in binders:
                raise GlobalTypeError(f"recursion variable {t.var!r} bound twice")
            binders.add(t.var)
            go(t.body, bound | {t.var}, unguarded | {t.var})
            return
        if not t.branches:
            raise GlobalTypeError("choice without branches")
        labels = set()
        for br in t.branches:
            if br.receiver == t.sender:
                raise GlobalTypeError(f"process {t.sender!r} sends to itself")
            if (br.receiver, br.msg) in labels:
                raise GlobalTypeError(f"duplicate branch {t.sender}->{br.receiver}:{br.msg}")
            labels.add((br.receiver, br.msg))
            go(br.cont, bound, frozenset())

    go(g, frozenset(), frozenset())


# -- printing ---------------------------------------------------------------------

def format_global_type(g: GlobalType) -> str:
    if isinstance(g, End):
        return "end"
    if isinstance(g, Var):
        return g.name
    if isinstance(g, Rec):
        return f"rec {g.var} . {format_global_type(g.body)}"
    parts = [f"{g.sender}->{b.receiver}:{b.msg} . {format_global_type(b.cont)}" for b in g.branches]
    if len(parts) == 1:
        return parts[0]
    return "( " + " + ".join(parts) + " )"


# -- structure ------------------------------------------------------------------------

def subterms(g: GlobalType) -> list[GlobalType]:
    """Distinct syntactic subterms of ``g`` (``g`` first, then preorder)."""
    out: dict[GlobalType, None] = {}

    def go(t):
        if t in out:
            return
        out[t] = None
        if isinstance(t, Rec):
            go(t.body)
        elif isinstance(t, Choice):
            for b in t.branches:
                go(b.cont)

    go(g)
    return list(out)


def binders(g: GlobalType) -> dict[str, Rec]:
    return {t.var: t for t in subterms(g) if isinstance(t, Rec)}


def processes_of(g: GlobalType) -> set[str]:
    out = set()
    for t in subterms(g):
        if isinstance(t, Choice):
            out.add(t.sender)
            out.update(b.receiver for b in t.branches)
    return out


def exchange_events(sender: str, receiver: str, msg: str) -> tuple[Event, Event]:
    return send(sender, receiver, msg), receive(sender, receiver, msg)


# -- language -------------------------------------------------------------------------

@dataclass
class TypeLanguage:
    finite: set
    lassos: set


def type_language(g: GlobalType, max_len: int) -> TypeLanguage:
    """Maximal finite words of length <= max_len, plus one lasso per cycle.

    Each exchange contributes its send immediately followed by its receive.
    A lasso arises at every variable occurrence: the cycle runs from the
    binder to the variable, the stem from the root to the binder.
    """
    bind = binders(g)
    finite: set = set()

    def walk(t, word):
        while True:
            if isinstance(t, End):
                finite.add(word)
                return
            if isinstance(t, Var):
                t = bind[t.name].body
            elif isinstance(t, Rec):
                t = t.body
            else:
                break
        for b in t.branches:
            w2 = word + exchange_events(t.sender, b.receiver, b.msg)
            if len(w2) <= max_len:
                walk(b.cont, w2)

    walk(g, ())

    lassos: set = set()

    def tree(t, word, entry: dict):
        if isinstance(t, Var):
            start = entry[t.name]
            lassos.add(Lasso(word[:start], word[start:]))
        elif isinstance(t, Rec):
            tree(t.body, word, {**entry, t.var: len(word)})
        elif isinstance(t, Choice):
            for b in t.branches:
                tree(b.cont, word + exchange_events(t.sender, b.receiver, b.msg), entry)

    tree(g, (), {})
    return TypeLanguage(finite, lassos)
