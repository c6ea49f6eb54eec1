"""Brute-force reference implementations used to cross-check the analyses.

Nothing here shares code with the optimised searches beyond the data types.
Every oracle works on explicit linearisations and word-level definitions,
so they are only usable on small inputs.
"""
from __future__ import annotations

from itertools import permutations
from typing import Iterable, Iterator

from .events import (
    Event,
    half_duplex_violation_index,
    is_channel_compliant,
    matching,
    max_occupancy,
    of_process,
    project,
    receive,
    send,
)
from .globaltype import Branch, Choice, End, Rec, Var
from .msc import PrefixMsc


def _constraints(m: PrefixMsc) -> list[tuple[int, int]]:
    pairs = []
    for row in m.rows.values():
        pairs.extend(zip(row, row[1:]))
    pairs.extend(m.match.items())
    return pairs


def permutation_filter(m: PrefixMsc) -> list[tuple[int, ...]]:
    """All node orders respecting the chart, by filtering every permutation."""
    pairs = _constraints(m)
    out = []
    for perm in permutations(range(len(m))):
        pos = {v: i for i, v in enumerate(perm)}
        if all(pos[a] < pos[b] for a, b in pairs):
            out.append(perm)
    return out


def brute_linearizations(m: PrefixMsc) -> Iterator[tuple[int, ...]]:
    """Same set as :func:`permutation_filter`, pruning violated prefixes early."""
    pairs = _constraints(m)
    before: dict[int, list[int]] = {v: [] for v in range(len(m))}
    for a, b in pairs:
        before[b].append(a)
    used: list[int] = []
    used_set: set[int] = set()

    def rec():
        if len(used) == len(m):
            yield tuple(used)
            return
        for v in range(len(m)):
            if v in used_set or any(a not in used_set for a in before[v]):
                continue
            used.append(v)
            used_set.add(v)
            yield from rec()
            used.pop()
            used_set.discard(v)

    yield from rec()


def brute_words(m: PrefixMsc) -> list[tuple[Event, ...]]:
    return [m.word_of(o) for o in brute_linearizations(m)]


def oracle_min_bound(m: PrefixMsc) -> int:
    return min(max_occupancy(w) for w in brute_words(m))


def splits_into_exchanges(w, k: int) -> bool:
    """Can ``w`` be cut into blocks of <=k sends then <=k receives, keeping
    every matched pair (by word-level FIFO matching) inside one block?"""
    n = len(w)
    partner = {}
    for i, j in matching(w).items():
        partner[i - 1] = j - 1
        partner[j - 1] = i - 1

    def ok_block(a: int, b: int) -> bool:
        kinds = [w[i].is_send for i in range(a, b)]
        nsend = sum(kinds)
        if nsend > k or len(kinds) - nsend > k:
            return False
        if kinds != sorted(kinds, reverse=True):
            return False
        return all(a <= partner.get(i, i) < b for i in range(a, b))

    reach = [False] * (n + 1)
    reach[0] = True
    for b in range(1, n + 1):
        reach[b] = any(reach[a] and ok_block(a, b) for a in range(b))
    return reach[n]


def oracle_k_synchronous(m: PrefixMsc, k: int) -> bool:
    return any(splits_into_exchanges(w, k) for w in brute_words(m))


def oracle_half_duplex_violated(m: PrefixMsc) -> bool:
    return any(half_duplex_violation_index(w) is not None for w in brute_words(m))


def same_per_process(w1, w2, procs: Iterable[str]) -> bool:
    return all(project(w1, of_process(p)) == project(w2, of_process(p)) for p in procs)


def oracle_closure_of_word(w) -> set[tuple[Event, ...]]:
    """Rearrangements of ``w`` that keep every process's event sequence and
    stay channel-compliant."""
    w = tuple(w)
    procs = {e.process for e in w}
    out = set()
    for perm in set(permutations(w)):
        if same_per_process(perm, w, procs) and is_channel_compliant(perm):
            out.add(perm)
    return out


def _substitute(g, name: str, by):
    if isinstance(g, Var):
        return by if g.name == name else g
    if isinstance(g, Rec):
        return g if g.var == name else Rec(g.var, _substitute(g.body, name, by))
    if isinstance(g, Choice):
        return Choice(g.sender, tuple(Branch(b.receiver, b.msg, _substitute(b.cont, name, by)) for b in g.branches))
    return g


def oracle_type_words(g, max_len: int) -> set[tuple[Event, ...]]:
    """Maximal finite type words of length <= max_len, by unfolding each
    binder through substitution of the whole recursive term."""
    out: set = set()

    def go(t, word):
        if isinstance(t, End):
            out.add(word)
        elif isinstance(t, Rec):
            go(_substitute(t.body, t.var, t), word)
        elif isinstance(t, Choice):
            for b in t.branches:
                w2 = word + (send(t.sender, b.receiver, b.msg), receive(t.sender, b.receiver, b.msg))
                if len(w2) <= max_len:
                    go(b.cont, w2)

    go(g, ())
    return out
