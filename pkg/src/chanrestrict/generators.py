"""Seeded random models for property tests and the acceptance suite."""
from __future__ import annotations

import random

from .events import Event, receive, send
from .globaltype import END, Branch, Choice, GlobalType, Rec, Var
from .hmsc import Hmsc
from .msc import PrefixMsc, empty_msc, msc_of

PROCS = ("P", "Q", "R", "S")
MSGS = ("a", "b")


def random_word(rng: random.Random, max_len: int, procs=PROCS[:3], msgs=MSGS, complete: bool = False) -> tuple[Event, ...]:
    """A channel-compliant word; ``complete`` drains every channel at the end
    (the drain counts towards ``max_len``)."""
    n = rng.randint(0, max_len)
    w: list[Event] = []
    queues: dict = {}
    while len(w) < n:
        backlog = sum(len(q) for q in queues.values())
        if complete and len(w) + backlog >= n:
            break
        ready = [ch for ch, q in sorted(queues.items()) if q]
        if ready and rng.random() < 0.5:
            ch = rng.choice(ready)
            w.append(receive(ch[0], ch[1], queues[ch].pop(0)))
        else:
            p, q = rng.sample(procs, 2)
            m = rng.choice(msgs)
            queues.setdefault((p, q), []).append(m)
            w.append(send(p, q, m))
    if complete:
        order = {ch: list(q) for ch, q in queues.items() if q}
        while order:
            ch = rng.choice(sorted(order))
            w.append(receive(ch[0], ch[1], order[ch].pop(0)))
            if not order[ch]:
                del order[ch]
    return tuple(w)


def random_prefix_msc(rng: random.Random, max_nodes: int = 8, procs=PROCS[:3]) -> PrefixMsc:
    """Every valid prefix MSC has a linearisation, so sampling words reaches all of them."""
    return msc_of(random_word(rng, max_nodes, procs))


def random_bmsc(rng: random.Random, max_nodes: int = 6, procs=PROCS[:3]) -> PrefixMsc:
    w = random_word(rng, max_nodes, procs, complete=True)
    return msc_of(w) if w else empty_msc()


def random_hmsc(rng: random.Random, max_vertices: int = 5, max_nodes: int = 6) -> Hmsc:
    n = rng.randint(1, max_vertices)
    vs = [f"v{i}" for i in range(n)]
    labels = {v: (random_bmsc(rng, max_nodes) if rng.random() < 0.8 else empty_msc()) for v in vs}
    edges = {(vs[rng.randrange(i)], vs[i]) for i in range(1, n)}
    for _ in range(rng.randint(0, n)):
        edges.add((rng.choice(vs), rng.choice(vs)))
    has_succ = {a for a, _ in edges}
    terminals = {v for v in vs if v not in has_succ or rng.random() < 0.3}
    return Hmsc(vs, sorted(edges), "v0", terminals, labels)


def random_global_type(rng: random.Random, depth: int = 5, procs=PROCS, max_branches: int = 3) -> GlobalType:
    """Well-formed type: guarded recursion, distinct binders, sender-driven choice."""
    counter = [0]

    def choice(d: int, bound: tuple) -> Choice:
        sender = rng.choice(procs)
        others = [p for p in procs if p != sender]
        labels = [(q, m) for q in others for m in MSGS]
        picked = rng.sample(labels, rng.randint(1, min(max_branches, len(labels))))
        return Choice(sender, tuple(Branch(q, m, cont(d - 1, bound)) for q, m in picked))

    def cont(d: int, bound: tuple) -> GlobalType:
        if d <= 0:
            return Var(rng.choice(bound)) if bound and rng.random() < 0.5 else END
        r = rng.random()
        if r < 0.15:
            return END
        if bound and r < 0.35:
            return Var(rng.choice(bound))
        if r < 0.55:
            counter[0] += 1
            t = f"t{counter[0]}"
            return Rec(t, choice(d, bound + (t,)))
        return choice(d, bound)

    return cont(depth, ())
