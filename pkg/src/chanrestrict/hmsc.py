"""High-level MSCs: graphs of basic MSCs, their paths, languages and restriction checks."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Mapping

from .events import Event, format_word
from .msc import (
    Issue,
    PrefixMsc,
    ValidationReport,
    concat,
    concat_all,
    empty_msc,
    linearizations,
    validate,
)
from .restrictions import (
    EXIST_BOUNDED,
    HALF_DUPLEX,
    SYNCHRONISABLE,
    RestrictionVerdict,
    half_duplex_violation,
    is_k_synchronous,
    min_existential_bound,
    min_sync_k,
    violation_prefix,
)


class LanguageBudgetExceeded(RuntimeError):
    pass


@dataclass
class Hmsc:
    """``(V, E, v_I, V_T, mu)``; vertex order is kept for deterministic output."""

    vertices: list[str]
    edges: list[tuple[str, str]]
    initial: str
    terminals: set[str]
    labels: dict[str, PrefixMsc]
    name: str = "H"

    def __post_init__(self):
        self.vertices = list(dict.fromkeys(self.vertices))
        self.edges = sorted(set(self.edges), key=lambda e: (self._index(e[0]), self._index(e[1])))
        self.terminals = set(self.terminals)
        for v in self.vertices:
            self.labels.setdefault(v, empty_msc())

    def _index(self, v):
        try:
            return self.vertices.index(v)
        except ValueError:
            return len(self.vertices)

    def successors(self, v: str) -> list[str]:
        return [b for a, b in self.edges if a == v]

    def reachable(self) -> set[str]:
        seen = {self.initial}
        todo = [self.initial]
        while todo:
            v = todo.pop()
            for u in self.successors(v):
                if u not in seen:
                    seen.add(u)
                    todo.append(u)
        return seen


def single_vertex_hmsc(m: PrefixMsc, name: str = "H") -> Hmsc:
    return Hmsc(["v0"], [], "v0", {"v0"}, {"v0": m}, name)


def validate_hmsc(h: Hmsc) -> ValidationReport:
    rep = ValidationReport()
    vs = set(h.vertices)
    if h.initial not in vs:
        rep.issues.append(Issue("initial", f"initial vertex {h.initial!r} is not a vertex"))
        return rep
    for t in sorted(h.terminals - vs):
        rep.issues.append(Issue("terminal", f"terminal {t!r} is not a vertex"))
    for a, b in h.edges:
        if a not in vs or b not in vs:
            rep.issues.append(Issue("edge", f"edge {a}->{b} mentions an unknown vertex"))
    reach = h.reachable()
    for v in h.vertices:
        if v not in reach:
            rep.issues.append(Issue("unreachable", f"vertex {v!r} is not reachable from {h.initial!r}"))
    for v in h.vertices:
        # with finitely many vertices, every path extends to a maximal one iff
        # no non-terminal vertex is a dead end
        if v not in h.terminals and not h.successors(v):
            rep.issues.append(Issue("incompletable", f"non-terminal vertex {v!r} has no successor"))
    for v in h.vertices:
        m = h.labels[v]
        if not m.is_total:
            rep.issues.append(Issue("label", f"vertex {v!r}: chart has unmatched sends"))
        for iss in validate(m).issues:
            rep.issues.append(Issue("label", f"vertex {v!r}: {iss.code}: {iss.detail}"))
    return rep


# -- paths ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HmscPath:
    """Finite path, or lasso ``stem . cycle^omega`` when ``cycle`` is non-empty."""

    stem: tuple[str, ...]
    cycle: tuple[str, ...] = ()

    @property
    def is_lasso(self) -> bool:
        return bool(self.cycle)

    def vertices(self, unroll: int = 1) -> tuple[str, ...]:
        return self.stem + self.cycle * unroll

    def __str__(self) -> str:
        if self.is_lasso:
            return " ".join(self.stem) + " (" + " ".join(self.cycle) + ")^ω"
        return " ".join(self.stem)


def paths(h: Hmsc, max_vertices: int) -> Iterator[HmscPath]:
    """Finite maximal paths of at most ``max_vertices`` vertices, then the
    lassos obtained by closing a simple path with a back edge."""
    stack: list[str] = [h.initial]

    def finite():
        v = stack[-1]
        if v in h.terminals:
            yield HmscPath(tuple(stack))
        if len(stack) < max_vertices:
            for u in h.successors(v):
                stack.append(u)
                yield from finite()
                stack.pop()

    def lassos():
        v = stack[-1]
        for u in h.successors(v):
            if u in stack:
                j = stack.index(u)
                yield HmscPath(tuple(stack[:j]), tuple(stack[j:]))
            elif len(stack) < max_vertices:
                stack.append(u)
                yield from lassos()
                stack.pop()

    if max_vertices < 1:
        return
    yield from finite()
    yield from lassos()


def msc_of_path(h: Hmsc, p: HmscPath, unroll: int = 1) -> PrefixMsc:
    return concat_all([h.labels[v] for v in p.vertices(unroll)])


def path_mscs(h: Hmsc, max_len: int) -> list[PrefixMsc]:
    """MSCs of finite maximal paths with at most ``max_len`` events, deduplicated."""
    out: dict = {}
    seen = set()
    start = h.labels[h.initial]
    if len(start) > max_len:
        return []
    todo = [(h.initial, start)]
    seen.add((h.initial, start.canonical()))
    while todo:
        v, m = todo.pop()
        if v in h.terminals:
            out.setdefault(m.canonical(), m)
        for u in h.successors(v):
            m2 = concat(m, h.labels[u])
            if len(m2) > max_len:
                continue
            key = (u, m2.canonical())
            if key not in seen:
                seen.add(key)
                todo.append((u, m2))
    return [out[k] for k in sorted(out, key=repr)]


def hmsc_language(h: Hmsc, max_len: int, budget: int = 500_000) -> set[tuple[Event, ...]]:
    """Words of length <= max_len from finite maximal paths."""
    words: set = set()
    for m in path_mscs(h, max_len):
        for w in linearizations(m):
            words.add(w)
            if len(words) > budget:
                raise LanguageBudgetExceeded(f"HMSC language exceeds {budget} words")
    return words


def lasso_prefix_words(h: Hmsc, max_vertices: int, unroll: int = 2, budget: int = 100_000):
    """Linearisations of unrolled lasso paths; each is only a prefix of a
    word of the language, never a maximal word itself."""
    words: set = set()
    for p in paths(h, max_vertices):
        if not p.is_lasso:
            continue
        for w in linearizations(msc_of_path(h, p, unroll)):
            words.add(w)
            if len(words) > budget:
                raise LanguageBudgetExceeded(f"lasso prefixes exceed {budget} words")
    return words


# -- restriction checks ----------------------------------------------------------------

def hmsc_k_synchronisable(h: Hmsc, k: int) -> RestrictionVerdict:
    """Holds iff every vertex chart is k-synchronous."""
    for v in h.vertices:
        if is_k_synchronous(h.labels[v], k) is None:
            return RestrictionVerdict(SYNCHRONISABLE, False, k, witness={"vertex": v})
    return RestrictionVerdict(SYNCHRONISABLE, True, k)


def hmsc_min_sync_k(h: Hmsc) -> RestrictionVerdict:
    """Least k making every vertex k-synchronous (k-synchrony is monotone in k)."""
    worst = 1
    for v in h.vertices:
        dec = min_sync_k(h.labels[v])
        if dec is None:
            return RestrictionVerdict(
                SYNCHRONISABLE, False, None, witness={"vertex": v}, note="not k-synchronous for any k"
            )
        worst = max(worst, dec.k)
    return RestrictionVerdict(SYNCHRONISABLE, True, worst)


def hmsc_existential_bound(h: Hmsc) -> int:
    """Maximum over vertices of the least existential bound of their charts.

    An upper bound for the HMSC: scheduling each vertex chart with its own
    optimal schedule empties every channel between vertices.
    """
    bound = 0
    for v in h.vertices:
        m = h.labels[v]
        res = min_existential_bound(m, max(1, len(m.sends)))
        bound = max(bound, res.bound)
    return bound


def hmsc_half_duplex(h: Hmsc) -> RestrictionVerdict:
    """Holds iff no vertex chart has two opposite messages in flight at once.

    Across vertices this cannot happen: if P->Q is in an earlier vertex and
    Q->P in a later one, Q performs the receive before its later send.
    """
    for v in h.vertices:
        m = h.labels[v]
        viol = half_duplex_violation(m)
        if viol is not None:
            return RestrictionVerdict(
                HALF_DUPLEX,
                False,
                witness={
                    "vertex": v,
                    "messages": [str(m.labels[viol.send1]), str(m.labels[viol.send2])],
                    "prefix": format_word(violation_prefix(m, viol)),
                },
            )
    return RestrictionVerdict(HALF_DUPLEX, True)


def classify_hmsc(h: Hmsc) -> list[RestrictionVerdict]:
    b = hmsc_existential_bound(h)
    exb = RestrictionVerdict(EXIST_BOUNDED, True, b, note="upper bound: maximum over vertex charts")
    return [hmsc_half_duplex(h), exb, hmsc_min_sync_k(h)]
