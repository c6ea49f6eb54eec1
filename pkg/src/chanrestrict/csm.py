"""Communicating state machines over reliable point-to-point FIFO channels.

Exploration is bounded (by trace depth and by channel capacity).  Positive
verdicts derived from it therefore only hold up to those bounds, while
violations found along the way are definitive.  One exception is the
pumping witness: a cycle that can be repeated forever while one channel
only grows proves unboundedness for every B.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import NamedTuple

from .events import Event, Lasso, format_word, half_duplex_violation_index
from .msc import Issue, PrefixMsc, ValidationReport, msc_of
from .restrictions import (
    EXIST_BOUNDED,
    HALF_DUPLEX,
    SYNCHRONISABLE,
    RestrictionVerdict,
    is_k_synchronous,
    min_existential_bound,
    min_sync_k,
)


class CsmError(ValueError):
    pass


class NoSuchTransition(CsmError):
    pass


class BlockedReceive(CsmError):
    pass


class Transition(NamedTuple):
    src: str
    action: Event | None  # None is an epsilon move
    dst: str


@dataclass
class StateMachine:
    process: str
    initial: str
    finals: set[str]
    transitions: list[Transition]
    states: list[str] = field(default_factory=list)

    def __post_init__(self):
        self.transitions = [Transition(*t) for t in self.transitions]
        seen = dict.fromkeys(self.states)
        seen.setdefault(self.initial)
        for t in self.transitions:
            seen.setdefault(t.src)
            seen.setdefault(t.dst)
        for f in sorted(self.finals):
            seen.setdefault(f)
        self.states = list(seen)
        self.finals = set(self.finals)
        for t in self.transitions:
            a = t.action
            if a is not None and a.process != self.process:
                raise CsmError(f"machine {self.process}: action {a} belongs to {a.process}")

    def outgoing(self, state: str) -> list[Transition]:
        return [t for t in self.transitions if t.src == state]


@dataclass
class Csm:
    machines: dict[str, StateMachine]
    name: str = "A"

    @property
    def processes(self) -> list[str]:
        return sorted(self.machines)


def validate_csm(a: Csm) -> ValidationReport:
    rep = ValidationReport()
    if len(a.machines) < 2:
        rep.issues.append(Issue("processes", "a CSM needs at least two machines"))
    for p, sm in a.machines.items():
        if sm.process != p:
            rep.issues.append(Issue("owner", f"machine keyed {p!r} belongs to {sm.process!r}"))
        for t in sm.transitions:
            if t.action is not None:
                peer = t.action.receiver if t.action.is_send else t.action.sender
                if peer not in a.machines:
                    rep.issues.append(Issue("peer", f"machine {p}: {t.action} talks to unknown process {peer!r}"))
    return rep


class Configuration(NamedTuple):
    """Local states (in sorted process order) and non-empty channel queues."""

    states: tuple[str, ...]
    queues: tuple[tuple[tuple[str, str], tuple[str, ...]], ...]

    def queue(self, ch: tuple[str, str]) -> tuple[str, ...]:
        for c, q in self.queues:
            if c == ch:
                return q
        return ()

    def queue_dict(self) -> dict[tuple[str, str], tuple[str, ...]]:
        return dict(self.queues)

    def describe(self, processes) -> dict:
        return {
            "states": dict(zip(processes, self.states)),
            "queues": {f"{p}>{q}": list(ms) for (p, q), ms in self.queues},
        }


def initial_configuration(a: Csm) -> Configuration:
    return Configuration(tuple(a.machines[p].initial for p in a.processes), ())


def _with_queue(c: Configuration, ch, q) -> tuple:
    d = dict(c.queues)
    if q:
        d[ch] = q
    else:
        d.pop(ch, None)
    return tuple(sorted(d.items()))


def _fire(a: Csm, c: Configuration, idx: int, t: Transition) -> Configuration:
    states = c.states[:idx] + (t.dst,) + c.states[idx + 1 :]
    e = t.action
    if e is None:
        return Configuration(states, c.queues)
    ch = e.channel
    q = c.queue(ch)
    if e.is_send:
        return Configuration(states, _with_queue(c, ch, q + (e.msg,)))
    return Configuration(states, _with_queue(c, ch, q[1:]))


def _enabled(c: Configuration, t: Transition) -> bool:
    e = t.action
    if e is None or e.is_send:
        return True
    q = c.queue(e.channel)
    return bool(q) and q[0] == e.msg


def enabled_moves(a: Csm, c: Configuration) -> list[tuple[int, Transition]]:
    """Enabled transitions in canonical order (process, then declaration)."""
    out = []
    for i, p in enumerate(a.processes):
        for t in a.machines[p].outgoing(c.states[i]):
            if _enabled(c, t):
                out.append((i, t))
    return out


def step(a: Csm, c: Configuration, action: Event | None, process: str | None = None, target: str | None = None) -> Configuration:
    """Fire ``action`` (an event, or None for an epsilon move of ``process``)."""
    if action is not None:
        process = action.process
    if process not in a.machines:
        raise NoSuchTransition(f"unknown process {process!r}")
    idx = a.processes.index(process)
    cands = [
        t
        for t in a.machines[process].outgoing(c.states[idx])
        if t.action == action and (target is None or t.dst == target)
    ]
    label = str(action) if action is not None else "eps"
    if not cands:
        raise NoSuchTransition(f"{process} has no {label} transition from {c.states[idx]!r}")
    t = cands[0]
    if not _enabled(c, t):
        q = c.queue(action.channel)
        head = q[0] if q else "empty"
        raise BlockedReceive(f"{label} blocked: head of {action.sender}>{action.receiver} is {head}")
    return _fire(a, c, idx, t)


def all_final(a: Csm, c: Configuration) -> bool:
    return all(s in a.machines[p].finals for p, s in zip(a.processes, c.states))


# -- exploration -----------------------------------------------------------------------

@dataclass(frozen=True)
class PumpingWitness:
    """A lasso whose cycle can repeat forever while ``channel`` only grows."""

    lasso: Lasso
    channel: tuple[str, str]
    growth: int

    def as_dict(self) -> dict:
        return {
            "lasso": str(self.lasso),
            "channel": f"{self.channel[0]}>{self.channel[1]}",
            "growth_per_cycle": self.growth,
            "argument": "the cycle returns to the same local states and leaves every channel it reads unchanged, "
            "so it can be repeated forever; each repetition adds messages to a channel that is never read",
        }


@dataclass
class ExplorationResult:
    configurations: set
    maximal: dict  # trace -> final configuration (all machines final)
    lassos: set
    pumping: list
    depth_hit: bool = False
    cap_hit: bool = False
    truncated: bool = False

    @property
    def maximal_traces(self) -> list[tuple[Event, ...]]:
        return sorted(self.maximal, key=lambda w: (len(w), format_word(w)))

    @property
    def complete_traces(self) -> list[tuple[Event, ...]]:
        return [w for w in self.maximal_traces if not self.maximal[w].queues]

    def sorted_lassos(self) -> list[Lasso]:
        return sorted(self.lassos, key=lambda l: (len(l.stem) + len(l.cycle), str(l)))

    @property
    def boundary_hit(self) -> bool:
        return self.depth_hit or self.cap_hit or self.truncated


def _fair(a: Csm, now: Configuration, cycle_moves: list[tuple[int, Transition]]) -> bool:
    """Reject cycles during which an idle machine could always receive.

    Enabledness is judged on a second repetition of the cycle, from which
    on every later repetition looks the same (growing channels keep their
    head, read channels replay identically).
    """
    cycle_confs = [now]
    for idx, t in cycle_moves[:-1]:
        cycle_confs.append(_fire(a, cycle_confs[-1], idx, t))
    moved = {idx for idx, _ in cycle_moves}
    for i, p in enumerate(a.processes):
        if i in moved:
            continue
        sm = a.machines[p]
        if all(
            any(t.action is not None and t.action.is_receive and _enabled(c, t) for t in sm.outgoing(c.states[i]))
            for c in cycle_confs
        ):
            return False
    return True


def _pump(c_then: Configuration, c_now: Configuration, cycle: tuple[Event, ...]):
    """None if the cycle cannot be repeated forever from ``c_now``; else the
    per-channel growth of one repetition (possibly empty)."""
    if c_then.states != c_now.states or not cycle:
        return None
    read = {e.channel for e in cycle if e.is_receive}
    for ch in read:
        if c_then.queue(ch) != c_now.queue(ch):
            return None
    growth: dict = {}
    for e in cycle:
        if e.is_send and e.channel not in read:
            growth[e.channel] = growth.get(e.channel, 0) + 1
    return growth


def explore(a: Csm, depth: int, channel_cap: int, budget: int = 200_000) -> ExplorationResult:
    """Depth-first enumeration of runs with at most ``depth`` steps.

    A run whose machines are all final gives a maximal finite trace and is
    still extended.  Runs stop at a boundary, or when they repeat a
    configuration without producing any event in between (a pure epsilon
    loop adds nothing).  Repeating local states along a run where the cycle
    leaves its read channels unchanged yields a lasso; fair lassos are kept
    as infinite maximal traces.
    """
    res = ExplorationResult(set(), {}, set(), [])
    pumping: dict = {}
    c0 = initial_configuration(a)
    confs = [c0]
    trace: list[Event] = []
    trace_pos = [0]  # trace length at each configuration on the run
    moves: list[tuple[int, Transition]] = []
    steps = 0

    def rec():
        nonlocal steps
        c = confs[-1]
        res.configurations.add(c)
        if all_final(a, c):
            res.maximal.setdefault(tuple(trace), c)
        if len(confs) - 1 >= depth:
            res.depth_hit = True
            return
        for idx, t in enabled_moves(a, c):
            steps += 1
            if steps > budget:
                res.truncated = True
                return
            c2 = _fire(a, c, idx, t)
            if any(len(q) > channel_cap for _, q in c2.queues):
                res.cap_hit = True
                res.configurations.add(c2)
                continue
            if t.action is not None:
                trace.append(t.action)
            confs.append(c2)
            trace_pos.append(len(trace))
            moves.append((idx, t))
            if not _record_lassos():
                rec()
            confs.pop()
            trace_pos.pop()
            moves.pop()
            if t.action is not None:
                trace.pop()
            if res.truncated:
                return

    def _record_lassos() -> bool:
        """Record the lasso closing at the latest matching configuration;
        True when the run just went round an event-free loop."""
        now = confs[-1]
        for j in range(len(confs) - 2, -1, -1):
            then = confs[j]
            if then.states != now.states:
                continue
            cycle = tuple(trace[trace_pos[j] :])
            growth = _pump(then, now, cycle)
            if growth is None:
                if then == now:
                    return True  # same configuration, empty cycle
                continue
            if _fair(a, now, moves[j:]):
                lasso = Lasso(tuple(trace[: trace_pos[j]]), cycle)
                res.lassos.add(lasso)
                for ch, g in sorted(growth.items()):
                    pumping.setdefault(ch, PumpingWitness(lasso, ch, g))
            return False
        return False

    rec()
    res.pumping = [pumping[ch] for ch in sorted(pumping)]
    return res


def check_deadlock(a: Csm, depth: int, channel_cap: int) -> Configuration | None:
    """First reachable (breadth-first) stuck configuration that is not a
    successful termination (all machines final and all channels empty)."""
    c0 = initial_configuration(a)
    seen = {c0}
    todo = deque([(c0, 0)])
    while todo:
        c, d = todo.popleft()
        moves = enabled_moves(a, c)
        if not moves:
            if not (all_final(a, c) and not c.queues):
                return c
            continue
        if d >= depth:
            continue
        for idx, t in moves:
            c2 = _fire(a, c, idx, t)
            if any(len(q) > channel_cap for _, q in c2.queues) or c2 in seen:
                continue
            seen.add(c2)
            todo.append((c2, d + 1))
    return None


def project_bmsc(m: PrefixMsc, name: str = "A") -> Csm:
    """One linear machine per process, following its row of ``m``."""
    machines = {}
    for p, row in m.rows.items():
        trans = [Transition(f"{p}{i}", m.labels[v], f"{p}{i + 1}") for i, v in enumerate(row)]
        last = f"{p}{len(row)}"
        machines[p] = StateMachine(p, f"{p}0", {last}, trans)
    return Csm(machines, name)


# -- classification ----------------------------------------------------------------------

def classify_csm(
    a: Csm,
    depth: int = 12,
    channel_cap: int = 6,
    max_b: int | None = None,
    k: int | None = None,
    unroll: int = 3,
    result: ExplorationResult | None = None,
) -> list[RestrictionVerdict]:
    """Classify the explored part of the language of ``a``.

    Maximal finite traces and unrolled fair lassos are classified through
    their MSCs.  Charts are deduplicated up to isomorphism first, since
    the classification only depends on the chart.
    """
    res = result if result is not None else explore(a, depth, channel_cap)
    samples: list[tuple[str, tuple[Event, ...]]] = [("trace", w) for w in res.maximal_traces]
    samples += [("lasso", l.unroll(unroll)) for l in res.sorted_lassos()]
    charts: dict = {}
    hd_witness = None
    for kind, w in samples:
        if hd_witness is None:
            i = half_duplex_violation_index(w)
            if i is not None:
                hd_witness = format_word(w[:i])
        m = msc_of(w)
        charts.setdefault(m.canonical(), (kind, w, m))
    finite_charts = [(w, m) for kind, w, m in charts.values() if kind == "trace"]
    all_charts = [(w, m) for kind, w, m in charts.values()]

    bounded_note = f"explored up to depth {depth}, channel capacity {channel_cap}, lasso unrolling {unroll}"

    if hd_witness is not None:
        hd = RestrictionVerdict(HALF_DUPLEX, False, witness={"prefix": hd_witness})
    else:
        hd = RestrictionVerdict(HALF_DUPLEX, True, bounded_claim=True, note=bounded_note)

    if res.pumping:
        pw = res.pumping[0]
        exb = RestrictionVerdict(EXIST_BOUNDED, False, None, witness=pw.as_dict(), note="pumping witness: no bound B exists")
    else:
        worst, bad = 0, None
        for w, m in finite_charts:
            cap = max_b if max_b is not None else max(1, len(m.sends))
            eb = min_existential_bound(m, cap)
            if eb is None:
                bad = (w, cap)
                break
            worst = max(worst, eb.bound)
        if bad is not None:
            exb = RestrictionVerdict(
                EXIST_BOUNDED, False, bad[1], witness={"trace": format_word(bad[0])}, note=f"no linearisation is {bad[1]}-bounded"
            )
        else:
            exb = RestrictionVerdict(EXIST_BOUNDED, True, worst, bounded_claim=True, note=bounded_note)

    sync = None
    worst_k = 1
    for w, m in all_charts:
        if k is not None:
            if is_k_synchronous(m, k) is None:
                sync = RestrictionVerdict(SYNCHRONISABLE, False, k, witness={"trace": format_word(w)})
                break
        else:
            dec = min_sync_k(m)
            if dec is None:
                sync = RestrictionVerdict(
                    SYNCHRONISABLE, False, None, witness={"trace": format_word(w)}, note="not k-synchronous for any k"
                )
                break
            worst_k = max(worst_k, dec.k)
    if sync is None:
        sync = RestrictionVerdict(SYNCHRONISABLE, True, k if k is not None else worst_k, bounded_claim=True, note=bounded_note)
    return [hd, exb, sync]
