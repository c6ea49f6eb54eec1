"""Half-duplex, existential B-bound and k-synchronous analyses of prefix MSCs.

All searches run over cuts (downward-closed node sets, as bitmasks) of the
happens-before order rather than over linearisations.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Any, NamedTuple, Sequence

from .events import (
    Event,
    as_word,
    format_word,
    half_duplex_violation_index,
    is_channel_compliant,
)
from .msc import PrefixMsc, UndefinedMscError, msc_of

HALF_DUPLEX = "half-duplex"
EXIST_BOUNDED = "exist-bounded"
SYNCHRONISABLE = "k-synchronisable"


@dataclass
class RestrictionVerdict:
    """Outcome of one restriction check.

    ``parameter`` is the bound B or the exchange size k the verdict talks
    about (the minimal one found, or the one asked for).  ``bounded_claim``
    is set when a positive answer only holds up to exploration bounds.
    """

    prop: str
    holds: bool
    parameter: int | None = None
    witness: Any = None
    bounded_claim: bool = False
    note: str = ""

    def key(self) -> tuple:
        return (self.prop, self.holds, self.parameter)


# -- small helpers ---------------------------------------------------------------

def _channel_masks(m: PrefixMsc):
    chans: dict[tuple[str, str], int] = {}
    for v in range(len(m)):
        chans.setdefault(m.labels[v].channel, len(chans))
    send_masks = [0] * len(chans)
    recv_masks = [0] * len(chans)
    for v in range(len(m)):
        c = chans[m.labels[v].channel]
        if m.labels[v].is_send:
            send_masks[c] |= 1 << v
        else:
            recv_masks[c] |= 1 << v
    node_chan = [chans[m.labels[v].channel] for v in range(len(m))]
    return node_chan, send_masks, recv_masks


def _occupancy(cut: int, c: int, send_masks, recv_masks) -> int:
    return bin(cut & send_masks[c]).count("1") - bin(cut & recv_masks[c]).count("1")


def topo_sorted(m: PrefixMsc, nodes) -> tuple[int, ...]:
    """Order ``nodes`` consistently with <=_M, smallest id first among ties."""
    pending = sorted(nodes)
    mask = sum(1 << v for v in pending)
    out: list[int] = []
    done = 0
    while pending:
        for i, v in enumerate(pending):
            if not (m.pred_mask[v] & mask & ~done):
                out.append(v)
                done |= 1 << v
                del pending[i]
                break
        else:
            raise ValueError("nodes are cyclically ordered")
    return tuple(out)


# -- existential bound ---------------------------------------------------------------

class ExistentialBound(NamedTuple):
    bound: int
    witness: tuple[Event, ...]


def min_existential_bound(m: PrefixMsc, max_b: int | None = None) -> ExistentialBound | None:
    """Smallest B such that some linearisation of ``m`` is B-bounded.

    Bottleneck shortest path over cuts: the cost of a path is the largest
    channel occupancy met along it.  The witness is the lexicographically
    least (by node id) B-bounded linearisation.  Returns None when the
    minimum exceeds ``max_b`` (default: number of sends).
    """
    n = len(m)
    if max_b is None:
        max_b = max(1, len(m.sends))
    full = (1 << n) - 1
    direct = m.direct_mask
    node_chan, send_masks, recv_masks = _channel_masks(m)

    best = {0: 0}
    heap = [(0, 0)]
    while heap:
        cost, cut = heapq.heappop(heap)
        if cut == full:
            break
        if best.get(cut, cost) < cost:
            continue
        for v in range(n):
            if (cut >> v) & 1 or direct[v] & ~cut:
                continue
            nxt = cut | (1 << v)
            c2 = max(cost, _occupancy(nxt, node_chan[v], send_masks, recv_masks))
            if c2 < best.get(nxt, 1 << 30):
                best[nxt] = c2
                heapq.heappush(heap, (c2, nxt))
    bound = best.get(full)
    if bound is None or bound > max_b:
        return None
    return ExistentialBound(bound, m.word_of(_bounded_schedule(m, bound)))


def _bounded_schedule(m: PrefixMsc, bound: int) -> list[int]:
    n = len(m)
    full = (1 << n) - 1
    direct = m.direct_mask
    node_chan, send_masks, recv_masks = _channel_masks(m)

    def moves(cut):
        for v in range(n):
            if (cut >> v) & 1 or direct[v] & ~cut:
                continue
            nxt = cut | (1 << v)
            if _occupancy(nxt, node_chan[v], send_masks, recv_masks) <= bound:
                yield v, nxt

    @lru_cache(maxsize=None)
    def completable(cut: int) -> bool:
        return cut == full or any(completable(nxt) for _, nxt in moves(cut))

    order = []
    cut = 0
    while cut != full:
        v, cut = next((v, nxt) for v, nxt in moves(cut) if completable(nxt))
        order.append(v)
    return order


# -- k-synchronous decompositions ----------------------------------------------------

@dataclass
class ExchangeDecomposition:
    """A linearisation cut into k-exchanges: sends first, then receives."""

    k: int
    segments: list[tuple[tuple[int, ...], tuple[int, ...]]] = field(default_factory=list)

    def order(self) -> list[int]:
        return [v for sends, recvs in self.segments for v in sends + recvs]

    def words(self, m: PrefixMsc) -> list[str]:
        return [format_word(m.word_of(s + r)) for s, r in self.segments]


def check_decomposition(m: PrefixMsc, dec: ExchangeDecomposition) -> list[str]:
    """Independent validation of a decomposition; returns a list of problems."""
    problems = []
    order = dec.order()
    if sorted(order) != list(range(len(m))):
        problems.append("segments do not cover every node exactly once")
        return problems
    seen = 0
    for v in order:
        if m.pred_mask[v] & ~seen:
            problems.append(f"node {v} placed before one of its predecessors")
        seen |= 1 << v
    where = {}
    for i, (sends, recvs) in enumerate(dec.segments):
        if len(sends) > dec.k or len(recvs) > dec.k:
            problems.append(f"segment {i} exceeds k={dec.k}")
        if not all(m.labels[v].is_send for v in sends) or not all(m.labels[v].is_receive for v in recvs):
            problems.append(f"segment {i} is not sends followed by receives")
        for v in sends + recvs:
            where[v] = i
    for s, r in m.match.items():
        if where[s] != where[r]:
            problems.append(f"matched pair {s}->{r} split across segments {where[s]} and {where[r]}")
    return problems


def _lex_subsets(items: Sequence[int], k: int):
    subsets = [c for size in range(1, k + 1) for c in combinations(items, size)]
    subsets.sort()
    return subsets


def is_k_synchronous(m: PrefixMsc, k: int) -> ExchangeDecomposition | None:
    """A decomposition of ``m`` into k-exchanges, or None if there is none.

    Depth-first search over cuts.  Each step picks a set of at most k sends
    whose predecessors are executed or in the set, closes it under the
    matching, and checks that no picked receive has to precede a picked
    send.  Unmatched sends may sit in any send phase.
    """
    if k < 1:
        raise ValueError("k must be positive")
    n = len(m)
    full = (1 << n) - 1
    pred = m.pred_mask
    sends = m.sends
    send_all = sum(1 << s for s in sends)
    failed: set[int] = set()

    def search(cut: int):
        if cut == full:
            return []
        if cut in failed:
            return None
        remaining = send_all & ~cut
        cands = [s for s in sends if (remaining >> s) & 1 and not pred[s] & ~(cut | remaining)]
        for pick in _lex_subsets(cands, k):
            smask = sum(1 << s for s in pick)
            if any(pred[s] & ~(cut | smask) for s in pick):
                continue
            recvs = [m.match[s] for s in pick if s in m.match]
            rmask = sum(1 << r for r in recvs)
            if any(pred[r] & ~(cut | smask | rmask) for r in recvs):
                continue
            rest = search(cut | smask | rmask)
            if rest is not None:
                return [(topo_sorted(m, pick), topo_sorted(m, recvs))] + rest
        failed.add(cut)
        return None

    segs = search(0)
    if segs is None:
        return None
    dec = ExchangeDecomposition(k, segs)
    problems = check_decomposition(m, dec)
    if problems:
        raise AssertionError(f"internal error, invalid decomposition: {problems}")
    return dec


def min_sync_k(m: PrefixMsc) -> ExchangeDecomposition | None:
    """Decomposition for the smallest workable k (k=1 for the empty chart).

    Exchanges never need more than ``len(m.sends)`` sends, so None means the
    chart is not k-synchronous for any k.
    """
    for k in range(1, max(1, len(m.sends)) + 1):
        dec = is_k_synchronous(m, k)
        if dec is not None:
            return dec
    return None


# -- half-duplex -----------------------------------------------------------------------

class HalfDuplexViolation(NamedTuple):
    send1: int
    send2: int

    def receives(self, m: PrefixMsc):
        return m.match.get(self.send1), m.match.get(self.send2)


def half_duplex_violation(m: PrefixMsc) -> HalfDuplexViolation | None:
    """Two opposite-direction messages that can be in flight simultaneously.

    Messages s1 (P to Q) and s2 (Q to P) are both pending after executing
    the ideal generated by {s1, s2} unless one receive precedes the other
    send.  An unmatched send stays pending forever.
    """
    for s1 in m.sends:
        e1 = m.labels[s1]
        r1 = m.match.get(s1)
        for s2 in m.sends:
            if s2 <= s1:
                continue
            e2 = m.labels[s2]
            if e2.channel != (e1.receiver, e1.sender):
                continue
            r2 = m.match.get(s2)
            if (r1 is None or not m.leq(r1, s2)) and (r2 is None or not m.leq(r2, s1)):
                return HalfDuplexViolation(s1, s2)
    return None


def violation_prefix(m: PrefixMsc, v: HalfDuplexViolation) -> tuple[Event, ...]:
    """A linearisation prefix ending with both messages in flight."""
    ideal = m.pred_mask[v.send1] | m.pred_mask[v.send2] | (1 << v.send1) | (1 << v.send2)
    return m.word_of(topo_sorted(m, [u for u in range(len(m)) if (ideal >> u) & 1]))


# -- verdict builders -----------------------------------------------------------------

def exist_bound_verdict(m: PrefixMsc, max_b: int | None = None) -> RestrictionVerdict:
    res = min_existential_bound(m, max_b)
    if res is None:
        return RestrictionVerdict(EXIST_BOUNDED, False, max_b, note=f"no B <= {max_b}")
    return RestrictionVerdict(EXIST_BOUNDED, True, res.bound, witness=format_word(res.witness))


def sync_verdict(m: PrefixMsc, k: int | None = None) -> RestrictionVerdict:
    if k is None:
        dec = min_sync_k(m)
        if dec is None:
            return RestrictionVerdict(SYNCHRONISABLE, False, None, note="not k-synchronous for any k")
        return RestrictionVerdict(SYNCHRONISABLE, True, dec.k, witness=dec.words(m))
    dec = is_k_synchronous(m, k)
    if dec is None:
        return RestrictionVerdict(SYNCHRONISABLE, False, k, note=f"not {k}-synchronous")
    return RestrictionVerdict(SYNCHRONISABLE, True, k, witness=dec.words(m))


def half_duplex_verdict(m: PrefixMsc) -> RestrictionVerdict:
    v = half_duplex_violation(m)
    if v is None:
        return RestrictionVerdict(HALF_DUPLEX, True)
    return RestrictionVerdict(
        HALF_DUPLEX,
        False,
        witness={
            "messages": [str(m.labels[v.send1]), str(m.labels[v.send2])],
            "prefix": format_word(violation_prefix(m, v)),
        },
    )


def classify_msc(m: PrefixMsc, max_b: int | None = None) -> list[RestrictionVerdict]:
    return [half_duplex_verdict(m), exist_bound_verdict(m, max_b), sync_verdict(m)]


def classify_word(w, max_b: int | None = None) -> list[RestrictionVerdict]:
    """Half-duplex of ``w`` itself; B-bound and synchronisability of msc(w)."""
    w = as_word(w)
    if not is_channel_compliant(w):
        raise UndefinedMscError("msc(w) is undefined: word is not channel-compliant")
    idx = half_duplex_violation_index(w)
    if idx is None:
        hd = RestrictionVerdict(HALF_DUPLEX, True)
    else:
        hd = RestrictionVerdict(HALF_DUPLEX, False, witness={"prefix": format_word(w[:idx])})
    m = msc_of(w)
    return [hd, exist_bound_verdict(m, max_b), sync_verdict(m)]
