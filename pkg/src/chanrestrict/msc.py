"""Prefix message sequence charts.

Nodes are the integers ``0..n-1``.  Each node carries an :class:`Event`
label; the acting process of the label decides which process row the node
belongs to.  ``match`` links send nodes to receive nodes; sends missing from
it are unmatched (allowed in prefix MSCs, not in basic MSCs).

The happens-before order is kept as one bitmask of strict predecessors per
node, computed once on construction.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Mapping, NamedTuple, Sequence

from .events import Event, SEND, as_word, is_channel_compliant, matching


class MscError(ValueError):
    pass


class UndefinedMscError(MscError):
    """msc(w) is undefined because w is not channel-compliant."""


class Issue(NamedTuple):
    code: str
    detail: str


@dataclass
class ValidationReport:
    issues: list[Issue] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.issues

    def codes(self) -> set[str]:
        return {i.code for i in self.issues}

    def __bool__(self) -> bool:
        return self.ok


class PrefixMsc:
    """Finite prefix MSC ``(N, p, f, l, (<=_P))``.

    ``rows`` maps each process to its nodes in process order.  Processes
    with empty rows are kept so that projections know about them.
    """

    def __init__(
        self,
        labels: Sequence[Event],
        rows: Mapping[str, Sequence[int]],
        match: Mapping[int, int],
    ):
        self.labels: tuple[Event, ...] = tuple(labels)
        self.rows: dict[str, tuple[int, ...]] = {p: tuple(rows[p]) for p in sorted(rows)}
        self.match: dict[int, int] = dict(sorted(match.items()))
        self._check_structure()

    def _check_structure(self) -> None:
        n = len(self.labels)
        seen = [False] * n
        for p, row in self.rows.items():
            for v in row:
                if not 0 <= v < n:
                    raise MscError(f"row {p} mentions unknown node {v}")
                if seen[v]:
                    raise MscError(f"node {v} appears twice in the process rows")
                seen[v] = True
                if self.labels[v].process != p:
                    raise MscError(
                        f"node {v} ({self.labels[v]}) placed in row {p}, "
                        f"but is performed by {self.labels[v].process}"
                    )
        missing = [v for v in range(n) if not seen[v]]
        if missing:
            raise MscError(f"nodes {missing} belong to no process row")
        targets = set()
        for s, r in self.match.items():
            if not (0 <= s < n and 0 <= r < n):
                raise MscError(f"matching {s}->{r} mentions unknown nodes")
            if not self.labels[s].is_send or not self.labels[r].is_receive:
                raise MscError(f"matching {s}->{r} must link a send to a receive")
            if r in targets:
                raise MscError(f"receive node {r} matched twice")
            targets.add(r)

    # -- basic structure -----------------------------------------------------

    def __len__(self) -> int:
        return len(self.labels)

    def __repr__(self) -> str:
        rows = "; ".join(
            f"{p}: " + " ".join(str(self.labels[v]) for v in row) for p, row in self.rows.items()
        )
        return f"PrefixMsc({rows})"

    @property
    def processes(self) -> list[str]:
        return list(self.rows)

    @cached_property
    def sends(self) -> tuple[int, ...]:
        return tuple(v for v in range(len(self)) if self.labels[v].is_send)

    @cached_property
    def receives(self) -> tuple[int, ...]:
        return tuple(v for v in range(len(self)) if self.labels[v].is_receive)

    @cached_property
    def match_inv(self) -> dict[int, int]:
        return {r: s for s, r in self.match.items()}

    @property
    def is_total(self) -> bool:
        """Every send is matched (the chart is an MSC rather than a prefix)."""
        return all(s in self.match for s in self.sends)

    def position(self, v: int) -> int:
        return self._position[v]

    @cached_property
    def _position(self) -> dict[int, int]:
        return {v: i for row in self.rows.values() for i, v in enumerate(row)}

    @cached_property
    def direct_preds(self) -> tuple[tuple[int, ...], ...]:
        """Covering predecessors: previous node on the row and, for a receive, its send."""
        preds: list[list[int]] = [[] for _ in range(len(self))]
        for row in self.rows.values():
            for a, b in zip(row, row[1:]):
                preds[b].append(a)
        for s, r in self.match.items():
            preds[r].append(s)
        return tuple(tuple(sorted(p)) for p in preds)

    @cached_property
    def pred_mask(self) -> tuple[int, ...]:
        """Bitmask of all strict <=_M predecessors of each node.

        On a cyclic relation a node ends up among its own predecessors.
        """
        n = len(self)
        masks = [0] * n
        for v in range(n):
            for u in self.direct_preds[v]:
                masks[v] |= 1 << u
        changed = True
        while changed:
            changed = False
            for v in range(n):
                m = masks[v]
                acc = m
                rest = m
                while rest:
                    low = rest & -rest
                    u = low.bit_length() - 1
                    acc |= masks[u]
                    rest ^= low
                if acc != m:
                    masks[v] = acc
                    changed = True
        return tuple(masks)

    @cached_property
    def direct_mask(self) -> tuple[int, ...]:
        return tuple(sum(1 << u for u in ps) for ps in self.direct_preds)

    @property
    def is_acyclic(self) -> bool:
        return all(not (self.pred_mask[v] >> v) & 1 for v in range(len(self)))

    def leq(self, a: int, b: int) -> bool:
        return a == b or bool((self.pred_mask[b] >> a) & 1)

    def lt(self, a: int, b: int) -> bool:
        return a != b and bool((self.pred_mask[b] >> a) & 1)

    # -- identity ---------------------------------------------------------------

    def canonical(self):
        """Isomorphism-invariant form: label rows plus matching by row positions."""
        rows = tuple((p, tuple(self.labels[v] for v in row)) for p, row in self.rows.items() if row)
        pos = self._position
        links = tuple(
            sorted(
                ((self.labels[s].process, pos[s]), (self.labels[r].process, pos[r]))
                for s, r in self.match.items()
            )
        )
        return rows, links

    def isomorphic(self, other: "PrefixMsc") -> bool:
        return self.canonical() == other.canonical()

    def word_of(self, order: Sequence[int]) -> tuple[Event, ...]:
        return tuple(self.labels[v] for v in order)


Bmsc = PrefixMsc


def empty_msc(processes: Sequence[str] = ()) -> PrefixMsc:
    return PrefixMsc((), {p: () for p in processes}, {})


def bmsc_from_rows(rows: Mapping[str, Sequence], extra_processes: Sequence[str] = ()) -> PrefixMsc:
    """Build a chart from per-process event rows, matching each channel FIFO.

    Row entries may be :class:`Event` or ``P>Q!m`` strings.  The n-th send on
    a channel is linked to the n-th receive on that channel; surplus sends
    stay unmatched.
    """
    labels: list[Event] = []
    node_rows: dict[str, list[int]] = {p: [] for p in extra_processes}
    for p in sorted(rows):
        node_rows.setdefault(p, [])
        for e in as_word(rows[p]) if isinstance(rows[p], str) else rows[p]:
            if isinstance(e, str):
                e = as_word(e)[0]
            node_rows[p].append(len(labels))
            labels.append(e)
    by_channel_s: dict = defaultdict(list)
    by_channel_r: dict = defaultdict(list)
    for p in sorted(node_rows):
        for v in node_rows[p]:
            e = labels[v]
            (by_channel_s if e.is_send else by_channel_r)[e.channel].append(v)
    match = {}
    for ch, rs in by_channel_r.items():
        ss = by_channel_s[ch]
        if len(rs) > len(ss):
            raise MscError(f"channel {ch[0]}->{ch[1]} has more receives than sends")
        for s, r in zip(ss, rs):
            match[s] = r
    return PrefixMsc(labels, node_rows, match)


# -- validation ------------------------------------------------------------------

def validate(m: PrefixMsc) -> ValidationReport:
    """Check the prefix-MSC conditions and FIFO order; report every violation."""
    rep = ValidationReport()
    for s, r in m.match.items():
        ls, lr = m.labels[s], m.labels[r]
        if ls.channel != lr.channel or ls.msg != lr.msg:
            rep.issues.append(Issue("label", f"node {s} ({ls}) matched to node {r} ({lr})"))
    for r in m.receives:
        if r not in m.match_inv:
            rep.issues.append(Issue("unmatched-receive", f"receive node {r} ({m.labels[r]}) has no send"))
    cyc = [v for v in range(len(m)) if (m.pred_mask[v] >> v) & 1]
    if cyc:
        rep.issues.append(Issue("cycle", f"happens-before is cyclic through nodes {cyc}"))

    # degenerate: equal-labelled sends of one process received in swapped order
    for p, row in m.rows.items():
        for i, a in enumerate(row):
            for b in row[i + 1 :]:
                if m.labels[a] != m.labels[b] or not m.labels[a].is_send:
                    continue
                if a in m.match and b in m.match:
                    ra, rb = m.match[a], m.match[b]
                    if m.position(rb) <= m.position(ra):
                        rep.issues.append(Issue("degenerate", f"sends {a},{b} received as {rb},{ra}"))

    # FIFO: per channel, matched sends form a prefix and map order-preservingly
    sends_on: dict = defaultdict(list)
    recvs_on: dict = defaultdict(list)
    for row in m.rows.values():
        for v in row:
            e = m.labels[v]
            (sends_on if e.is_send else recvs_on)[e.channel].append(v)
    for ch, ss in sorted(sends_on.items()):
        flags = [s in m.match for s in ss]
        if any(not a and b for a, b in zip(flags, flags[1:])):
            rep.issues.append(Issue("fifo", f"channel {ch[0]}->{ch[1]}: matched send after an unmatched one"))
            continue
        images = [m.match[s] for s in ss if s in m.match]
        expected = [r for r in recvs_on.get(ch, []) if r in m.match_inv]
        if images != expected:
            rep.issues.append(Issue("fifo", f"channel {ch[0]}->{ch[1]}: receives out of send order"))
    return rep


def is_valid(m: PrefixMsc) -> bool:
    return validate(m).ok


def is_bmsc(m: PrefixMsc) -> bool:
    return m.is_total and validate(m).ok


# -- construction from words -------------------------------------------------------

def msc_of(w) -> PrefixMsc:
    """The unique prefix MSC having ``w`` as a linearisation."""
    w = as_word(w)
    if not is_channel_compliant(w):
        raise UndefinedMscError("msc(w) is undefined: word is not channel-compliant")
    rows: dict[str, list[int]] = defaultdict(list)
    for i, e in enumerate(w):
        rows[e.process].append(i)
        rows.setdefault(e.receiver if e.is_send else e.sender, [])
    match = {s - 1: r - 1 for s, r in matching(w).items()}
    return PrefixMsc(w, rows, match)


# -- linearisations ----------------------------------------------------------------

def node_linearizations(m: PrefixMsc, limit: int | None = None) -> Iterator[tuple[int, ...]]:
    """Topological orders of <=_M, lexicographic by node id."""
    n = len(m)
    full = (1 << n) - 1
    direct = m.direct_mask
    order: list[int] = []
    produced = 0

    def rec(cut: int):
        nonlocal produced
        if cut == full:
            produced += 1
            yield tuple(order)
            return
        for v in range(n):
            if (cut >> v) & 1 or direct[v] & ~cut:
                continue
            order.append(v)
            yield from rec(cut | (1 << v))
            order.pop()
            if limit is not None and produced >= limit:
                return

    if limit is not None and limit <= 0:
        return
    yield from rec(0)


def linearizations(m: PrefixMsc, limit: int | None = None) -> Iterator[tuple[Event, ...]]:
    """Words of the chart's language, up to ``limit`` of them.

    Distinct node orders give distinct words (each process row is totally
    ordered), so no deduplication is needed.
    """
    for order in node_linearizations(m, limit):
        yield m.word_of(order)


def count_linearizations(m: PrefixMsc) -> int:
    n = len(m)
    full = (1 << n) - 1
    direct = m.direct_mask
    memo: dict[int, int] = {}

    def rec(cut: int) -> int:
        if cut == full:
            return 1
        hit = memo.get(cut)
        if hit is not None:
            return hit
        total = 0
        for v in range(n):
            if not (cut >> v) & 1 and not direct[v] & ~cut:
                total += rec(cut | (1 << v))
        memo[cut] = total
        return total

    return rec(0)


# -- concatenation -------------------------------------------------------------------

def concat(m1: PrefixMsc, m2: PrefixMsc) -> PrefixMsc:
    """``m1 . m2``: every process finishes its part of ``m1`` before ``m2``."""
    if not m1.is_total:
        raise MscError("left operand of concatenation must be a complete MSC")
    off = len(m1)
    labels = m1.labels + m2.labels
    procs = set(m1.rows) | set(m2.rows)
    rows = {p: tuple(m1.rows.get(p, ())) + tuple(v + off for v in m2.rows.get(p, ())) for p in procs}
    match = dict(m1.match)
    match.update({s + off: r + off for s, r in m2.match.items()})
    return PrefixMsc(labels, rows, match)


def concat_all(ms: Sequence[PrefixMsc]) -> PrefixMsc:
    out = empty_msc()
    for m in ms:
        out = concat(out, m)
    return out


# -- causal delivery -------------------------------------------------------------------

def _causal_delivery_holds(m: PrefixMsc, order: Sequence[int]) -> bool:
    w = m.word_of(order)
    wm = matching(w)
    node_match = {order[i - 1]: order[j - 1] for i, j in wm.items()}
    sends = [v for v in order if m.labels[v].kind == SEND]
    for a in sends:
        for b in sends:
            if a == b or m.labels[a].channel != m.labels[b].channel or not m.leq(a, b):
                continue
            if b not in node_match:
                continue
            if a not in node_match or not m.leq(node_match[a], node_match[b]):
                return False
    return True


def satisfies_causal_delivery(m: PrefixMsc, limit: int | None = None) -> bool:
    """Some linearisation delivers causally ordered same-channel sends in order."""
    for order in node_linearizations(m, limit):
        if _causal_delivery_holds(m, order):
            return True
    return False
