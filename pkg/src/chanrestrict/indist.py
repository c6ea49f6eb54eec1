"""The indistinguishability relation on finite words and its closure.

Two words are one step apart when they differ by swapping one adjacent
pair of events that no FIFO point-to-point observer can order:

1. two sends by different processes;
2. two receives by different processes;
3. a send and a receive by different processes on different channels;
4. a send and a receive on the same channel when that channel already held
   a message before the pair (so the receive cannot consume that send).

The rules are stated for the orientation "left event, right event" and
the relation is symmetric, so a swap is legal if either orientation of the
pair satisfies a rule.
"""
from __future__ import annotations

from collections import deque
from typing import Iterable, NamedTuple

from .events import Event, SEND, as_word


class ClosureBudgetExceeded(RuntimeError):
    pass


class SwapRule(NamedTuple):
    rule_id: int
    position: int  # 1-based index of the left event of the swapped pair


def _rule(a: Event, b: Event, backlog: int) -> int | None:
    """Rule number licensing ``a b ~ b a`` with ``a`` first, else None.

    ``backlog`` is the number of in-flight messages on ``a``'s channel in
    the prefix before the pair.
    """
    if a.kind == SEND and b.kind == SEND:
        return 1 if a.sender != b.sender else None
    if a.kind != SEND and b.kind != SEND:
        return 2 if a.receiver != b.receiver else None
    if a.kind == SEND:
        p, q = a.sender, a.receiver
        r, s = b.sender, b.receiver
        if p != s and (p != r or q != s):
            return 3
        if (p, q) == (r, s) and backlog > 0:
            return 4
    return None


def swap_rule(w, i: int, backlog: int | None = None) -> int | None:
    """Rule allowing the swap of positions ``i`` and ``i+1`` (0-based)."""
    a, b = w[i], w[i + 1]
    if backlog is None:
        ch = (a if a.kind == SEND else b).channel
        backlog = sum(1 if e.kind == SEND else -1 for e in w[:i] if e.channel == ch)
    if a.kind == SEND or b.kind != SEND:
        return _rule(a, b, backlog)
    # receive followed by send: check the rule for the swapped orientation
    return _rule(b, a, backlog)


def applicable_swaps(w) -> list[SwapRule]:
    w = as_word(w)
    occ: dict[tuple[str, str], int] = {}
    out = []
    for i in range(len(w) - 1):
        a, b = w[i], w[i + 1]
        send_ev = a if a.kind == SEND else b
        rid = swap_rule(w, i, occ.get(send_ev.channel, 0))
        if rid is not None:
            out.append(SwapRule(rid, i + 1))
        occ[a.channel] = occ.get(a.channel, 0) + (1 if a.kind == SEND else -1)
    return out


def one_step_neighbors(w) -> set[tuple[Event, ...]]:
    w = as_word(w)
    out = set()
    for sw in applicable_swaps(w):
        i = sw.position - 1
        out.add(w[:i] + (w[i + 1], w[i]) + w[i + 2 :])
    return out


def closure(words: Iterable, max_len: int | None = None, budget: int = 200_000) -> set[tuple[Event, ...]]:
    """All words reachable from ``words`` by legal swaps.

    Swaps preserve length; ``max_len`` only guards the input.  Raises
    :class:`ClosureBudgetExceeded` once more than ``budget`` words are seen.
    """
    seen: set[tuple[Event, ...]] = set()
    todo: deque = deque()
    for w in words:
        w = as_word(w)
        if max_len is not None and len(w) > max_len:
            raise ValueError(f"word longer than max_len={max_len}")
        if w not in seen:
            seen.add(w)
            todo.append(w)
    while todo:
        w = todo.popleft()
        for u in one_step_neighbors(w):
            if u not in seen:
                seen.add(u)
                if len(seen) > budget:
                    raise ClosureBudgetExceeded(f"closure exceeds {budget} words")
                todo.append(u)
    return seen


def equiv_mod_indist(l1: Iterable, l2: Iterable, budget: int = 200_000) -> bool:
    return closure(l1, budget=budget) == closure(l2, budget=budget)


def indistinguishable(w1, w2, budget: int = 200_000) -> bool:
    w1, w2 = as_word(w1), as_word(w2)
    if sorted(w1) != sorted(w2):
        return False
    return w2 in closure([w1], budget=budget)
