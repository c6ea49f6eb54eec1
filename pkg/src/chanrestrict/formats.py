"""Readers and writers for the ``.bmsc``, ``.hmsc``, ``.csm`` and ``.gt`` text formats.

Layout of the chart format::

    bmsc name {
      msg 1 : P -> Q : m ;
      P : !1 ;
      Q : ?1 ;
    }

``!k`` sits on the sender's row exactly once, ``?k`` on the receiver's row
at most once (a missing ``?k`` leaves the send unmatched).  Row order is
the process order.  Inside an HMSC the chart is written without a name.
"""
from __future__ import annotations

from pathlib import Path
from typing import Union

from .csm import Csm, StateMachine, Transition
from .events import Event, receive, send
from .globaltype import GlobalType, format_global_type, parse_global_type
from .hmsc import Hmsc
from .lexer import ParseError, Token, TokenStream
from .msc import PrefixMsc

KINDS = ("gt", "bmsc", "hmsc", "csm")


class FormatError(ParseError):
    pass


class _Reader(TokenStream):
    def __init__(self, text: str):
        super().__init__(text, FormatError)

    def name(self, what: str) -> Token:
        tok = self.peek()
        if tok.kind not in ("id", "num"):
            self.error(f"expected {what}, found {self.describe(tok)}")
        self.i += 1
        return tok

    def finish(self):
        if not self.at_eof():
            self.error(f"unexpected {self.describe(self.peek())} after the closing brace")

    # -- charts --------------------------------------------------------------------

    def bmsc_body(self) -> PrefixMsc:
        self.expect("{")
        msgs: dict[int, tuple[str, str, str]] = {}
        rows: dict[str, list[tuple[str, int, Token]]] = {}
        while not self.accept("}"):
            if self.at("msg") and self.peek(1).kind == "num":
                self.i += 1
                ktok = self.number("message number")
                k = int(ktok.text)
                if k in msgs:
                    self.error(f"message {k} declared twice", ktok)
                self.expect(":")
                p = self.ident("sender").text
                self.expect("->")
                q = self.ident("receiver")
                if q.text == p:
                    self.error(f"process {p!r} sends to itself", q)
                self.expect(":")
                m = self.ident("message").text
                self.expect(";")
                msgs[k] = (p, q.text, m)
                continue
            ptok = self.ident("process or 'msg'")
            if ptok.text in rows:
                self.error(f"row for process {ptok.text!r} given twice", ptok)
            self.expect(":")
            row = []
            while not self.accept(";"):
                tok = self.peek()
                if not (self.at("!") or self.at("?")):
                    self.error(f"expected '!k', '?k' or ';', found {self.describe(tok)}")
                self.i += 1
                k = int(self.number("message number").text)
                row.append((tok.text, k, tok))
            rows[ptok.text] = row
        return self._build_chart(msgs, rows)

    def _build_chart(self, msgs, rows) -> PrefixMsc:
        labels: list[Event] = []
        node_rows: dict[str, list[int]] = {}
        sends: dict[int, int] = {}
        recvs: dict[int, int] = {}
        for p, q, _ in msgs.values():
            node_rows.setdefault(p, [])
            node_rows.setdefault(q, [])
        for proc, row in rows.items():
            node_rows.setdefault(proc, [])
            for kind, k, tok in row:
                if k not in msgs:
                    self.error(f"message {k} is not declared", tok)
                p, q, m = msgs[k]
                seen, owner = (sends, p) if kind == "!" else (recvs, q)
                if proc != owner:
                    self.error(f"{kind}{k} must be on the row of {owner}, not {proc}", tok)
                if k in seen:
                    self.error(f"{kind}{k} occurs twice", tok)
                seen[k] = len(labels)
                node_rows[proc].append(len(labels))
                labels.append(send(p, q, m) if kind == "!" else receive(p, q, m))
        for k in sorted(msgs):
            if k not in sends:
                self.error(f"message {k} is declared but never sent")
        match = {sends[k]: recvs[k] for k in recvs}
        return PrefixMsc(labels, node_rows, match)

    def bmsc_file(self) -> tuple[str, PrefixMsc]:
        self.expect("bmsc")
        name = self.name("chart name").text
        m = self.bmsc_body()
        self.finish()
        return name, m

    # -- HMSCs ---------------------------------------------------------------------

    def hmsc_file(self) -> Hmsc:
        self.expect("hmsc")
        name = self.name("HMSC name").text
        self.expect("{")
        initial = None
        terminals: list[Token] = []
        vertices: dict[str, PrefixMsc] = {}
        edges: list[tuple[Token, Token]] = []
        while not self.accept("}"):
            tok = self.peek()
            if self.accept("initial"):
                if initial is not None:
                    self.error("initial vertex given twice", tok)
                initial = self.name("vertex")
            elif self.accept("terminal"):
                terminals.append(self.name("vertex"))
                while not self.at(";"):
                    terminals.append(self.name("vertex"))
            elif self.accept("vertex"):
                v = self.name("vertex")
                if v.text in vertices:
                    self.error(f"vertex {v.text!r} declared twice", v)
                self.expect("=")
                self.expect("bmsc")
                vertices[v.text] = self.bmsc_body()
            elif self.accept("edge"):
                a = self.name("vertex")
                self.expect("->")
                edges.append((a, self.name("vertex")))
            else:
                self.error(f"expected 'initial', 'terminal', 'vertex' or 'edge', found {self.describe(tok)}")
            self.expect(";")
        self.finish()
        if initial is None:
            self.error("missing 'initial' declaration")
        for tok in [initial, *terminals, *(t for e in edges for t in e)]:
            if tok.text not in vertices:
                self.error(f"vertex {tok.text!r} is not declared", tok)
        return Hmsc(
            list(vertices),
            [(a.text, b.text) for a, b in edges],
            initial.text,
            {t.text for t in terminals},
            dict(vertices),
            name,
        )

    # -- CSMs ----------------------------------------------------------------------

    def csm_file(self) -> Csm:
        self.expect("csm")
        name = self.name("CSM name").text
        self.expect("{")
        machines: dict[str, StateMachine] = {}
        while not self.accept("}"):
            self.expect("machine")
            ptok = self.ident("process")
            if ptok.text in machines:
                self.error(f"machine {ptok.text!r} given twice", ptok)
            machines[ptok.text] = self.machine(ptok.text)
        self.finish()
        return Csm(machines, name)

    def machine(self, p: str) -> StateMachine:
        self.expect("{")
        initial = None
        finals: list[str] = []
        trans: list[Transition] = []
        while not self.accept("}"):
            tok = self.peek()
            if self.accept("initial"):
                if initial is not None:
                    self.error("initial state given twice", tok)
                initial = self.name("state").text
            elif self.accept("final"):
                while not self.at(";"):
                    finals.append(self.name("state").text)
            else:
                src = self.name("state, 'initial' or 'final'").text
                self.expect("->")
                dst = self.name("state").text
                self.expect(":")
                trans.append(Transition(src, self.action(p), dst))
            self.expect(";")
        if initial is None:
            self.error(f"machine {p} has no initial state")
        return StateMachine(p, initial, set(finals), trans)

    def action(self, p: str) -> Event | None:
        if self.accept("eps"):
            return None
        tok = self.peek()
        if not (self.at("!") or self.at("?")):
            self.error(f"expected '!', '?' or 'eps', found {self.describe(tok)}")
        self.i += 1
        peer = self.ident("peer process")
        if peer.text == p:
            self.error(f"machine {p} cannot talk to itself", peer)
        m = self.ident("message").text
        return send(p, peer.text, m) if tok.text == "!" else receive(peer.text, p, m)


def parse_bmsc(text: str) -> tuple[str, PrefixMsc]:
    return _Reader(text).bmsc_file()


def parse_hmsc(text: str) -> Hmsc:
    return _Reader(text).hmsc_file()


def parse_csm(text: str) -> Csm:
    return _Reader(text).csm_file()


# -- printing ------------------------------------------------------------------------

def _chart_lines(m: PrefixMsc) -> list[str]:
    number: dict[int, int] = {}
    lines = []
    for p, row in m.rows.items():
        for v in row:
            if m.labels[v].is_send:
                number[v] = len(number) + 1
                e = m.labels[v]
                lines.append(f"msg {number[v]} : {e.sender} -> {e.receiver} : {e.msg} ;")
    for p, row in m.rows.items():
        items = []
        for v in row:
            if m.labels[v].is_send:
                items.append(f"!{number[v]}")
            else:
                s = m.match_inv.get(v)
                if s is None:
                    raise ValueError(f"cannot write receive node {v} without a matching send")
                items.append(f"?{number[s]}")
        lines.append(f"{p} : {' '.join(items)} ;" if items else f"{p} : ;")
    return lines


def format_bmsc(m: PrefixMsc, name: str = "M") -> str:
    body = "".join(f"  {line}\n" for line in _chart_lines(m))
    return f"bmsc {name} {{\n{body}}}\n"


def format_hmsc(h: Hmsc) -> str:
    out = [f"hmsc {h.name} {{", f"  initial {h.initial} ;"]
    out += [f"  terminal {v} ;" for v in h.vertices if v in h.terminals]
    for v in h.vertices:
        lines = _chart_lines(h.labels[v])
        inner = " ".join(lines)
        out.append(f"  vertex {v} = bmsc {{ {inner} }} ;" if inner else f"  vertex {v} = bmsc {{ }} ;")
    out += [f"  edge {a} -> {b} ;" for a, b in h.edges]
    out.append("}")
    return "\n".join(out) + "\n"


def _format_action(e: Event | None) -> str:
    if e is None:
        return "eps"
    if e.is_send:
        return f"! {e.receiver} {e.msg}"
    return f"? {e.sender} {e.msg}"


def format_csm(a: Csm) -> str:
    out = [f"csm {a.name} {{"]
    for p in a.processes:
        sm = a.machines[p]
        head = f"    initial {sm.initial} ;"
        finals = [s for s in sm.states if s in sm.finals]
        if finals:
            head += f" final {' '.join(finals)} ;"
        out += [f"  machine {p} {{", head]
        out += [f"    {t.src} -> {t.dst} : {_format_action(t.action)} ;" for t in sm.transitions]
        out.append("  }")
    out.append("}")
    return "\n".join(out) + "\n"


# -- files ---------------------------------------------------------------------------

Model = Union[GlobalType, PrefixMsc, Hmsc, Csm]


def kind_of(path: str | Path) -> str:
    suffix = Path(path).suffix.lstrip(".")
    if suffix not in KINDS:
        raise FormatError(f"cannot infer input kind from extension {Path(path).suffix!r}; use --kind")
    return suffix


def parse_model(text: str, kind: str) -> Model:
    if kind == "gt":
        return parse_global_type(text)
    if kind == "bmsc":
        return parse_bmsc(text)[1]
    if kind == "hmsc":
        return parse_hmsc(text)
    if kind == "csm":
        return parse_csm(text)
    raise FormatError(f"unknown input kind {kind!r}")


def format_model(model: Model, name: str = "M") -> str:
    if isinstance(model, PrefixMsc):
        return format_bmsc(model, name)
    if isinstance(model, Hmsc):
        return format_hmsc(model)
    if isinstance(model, Csm):
        return format_csm(model)
    return format_global_type(model) + "\n"
