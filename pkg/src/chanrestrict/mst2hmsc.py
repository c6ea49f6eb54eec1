"""Translation of global types into HMSCs, with a bounded language check.

Every subterm becomes a vertex, and every branch ``j`` of a choice gets its
own vertex carrying the one-message chart of that branch.  All other
vertices carry the empty chart.  Edges follow the syntax: a binder points
to its body, a variable back to its binder, a choice to each of its branch
vertices and a branch vertex to its continuation.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from .events import format_word
from .globaltype import Choice, End, GlobalType, Rec, TypeLanguage, Var, binders, check_well_formed, format_global_type, subterms, type_language
from .hmsc import Hmsc, hmsc_language
from .indist import closure
from .msc import PrefixMsc, bmsc_from_rows, empty_msc

Origin = Union[GlobalType, tuple[Choice, int]]


def exchange_bmsc(sender: str, receiver: str, msg: str) -> PrefixMsc:
    return bmsc_from_rows({sender: f"{sender}>{receiver}!{msg}", receiver: f"{sender}>{receiver}?{msg}"})


@dataclass
class TranslationOutput:
    hmsc: Hmsc
    vertex_map: dict[str, Origin]

    def describe_map(self) -> dict[str, str]:
        """Vertex name -> printable origin (subterm text, or branch marker)."""
        out = {}
        for v, origin in self.vertex_map.items():
            if isinstance(origin, tuple):
                choice, j = origin
                out[v] = f"branch {j} of {format_global_type(choice)}"
            else:
                out[v] = format_global_type(origin)
        return out


def translate(g: GlobalType, name: str = "H") -> TranslationOutput:
    check_well_formed(g)
    subs = subterms(g)
    ids = {t: f"v{i}" for i, t in enumerate(subs)}
    bind = binders(g)
    vertices: list[str] = []
    vertex_map: dict[str, Origin] = {}
    labels: dict[str, PrefixMsc] = {}
    edges: list[tuple[str, str]] = []
    for t in subs:
        v = ids[t]
        vertices.append(v)
        vertex_map[v] = t
        labels[v] = empty_msc()
        if isinstance(t, Rec):
            edges.append((v, ids[t.body]))
        elif isinstance(t, Var):
            edges.append((v, ids[bind[t.name]]))
        elif isinstance(t, Choice):
            for j, br in enumerate(t.branches, start=1):
                bv = f"{v}_b{j}"
                vertices.append(bv)
                vertex_map[bv] = (t, j)
                labels[bv] = exchange_bmsc(t.sender, br.receiver, br.msg)
                edges.append((v, bv))
                edges.append((bv, ids[br.cont]))
    terminals = {ids[t] for t in subs if isinstance(t, End)}
    return TranslationOutput(Hmsc(vertices, edges, ids[g], terminals, labels, name), vertex_map)


@dataclass
class TranslationReport:
    max_len: int
    inclusion: bool
    closure_equal: bool
    strict: bool
    type_words: int
    hmsc_words: int
    counterexample: str | None = None
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.inclusion and self.closure_equal

    def as_dict(self) -> dict:
        return {
            "max_len": self.max_len,
            "inclusion": self.inclusion,
            "closure_equal": self.closure_equal,
            "strict_inclusion": self.strict,
            "type_words": self.type_words,
            "hmsc_words": self.hmsc_words,
            "counterexample": self.counterexample,
        }


def _first(words) -> str:
    return format_word(min(words, key=lambda w: (len(w), format_word(w))))


def verify_translation(g: GlobalType, max_len: int, budget: int = 200_000) -> TranslationReport:
    """Check the type language against the HMSC language at length <= max_len.

    (a) every maximal type word is a word of the HMSC;
    (b) both languages have the same closure under indistinguishability.
    """
    lang: TypeLanguage = type_language(g, max_len)
    h = translate(g).hmsc
    hl = hmsc_language(h, max_len, budget)
    missing = lang.finite - hl
    c_type = closure(lang.finite, budget=budget)
    c_h = closure(hl, budget=budget)
    rep = TranslationReport(
        max_len, not missing, c_type == c_h, lang.finite < hl, len(lang.finite), len(hl)
    )
    if missing:
        rep.counterexample = _first(missing)
        rep.detail = "type word missing from HMSC language"
    elif c_type != c_h:
        rep.counterexample = _first(c_type ^ c_h)
        rep.detail = "closures differ"
    return rep
