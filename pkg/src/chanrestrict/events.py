"""Send/receive events, words over them, and word-level channel predicates.

A word is a plain tuple of :class:`Event`.  Infinite, eventually periodic
words are represented by :class:`Lasso` (``stem . cycle^omega``).

Text syntax: ``P>Q!m`` is P sending ``m`` to Q, ``P>Q?m`` is Q receiving
``m`` from P.  Events are whitespace separated; ``ε`` (or an empty string)
is the empty word.
"""
from __future__ import annotations

import re
from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Callable, Iterable, NamedTuple, Sequence, Union

SEND = "!"
RECV = "?"

_IDENT = r"[A-Za-z_][A-Za-z0-9_]*"
_EVENT_RE = re.compile(rf"^({_IDENT})>({_IDENT})([!?])({_IDENT})$")
EMPTY_WORD_TEXT = "ε"


class Event(NamedTuple):
    kind: str
    sender: str
    receiver: str
    msg: str

    @property
    def is_send(self) -> bool:
        return self.kind == SEND

    @property
    def is_receive(self) -> bool:
        return self.kind == RECV

    @property
    def process(self) -> str:
        """The process performing the event."""
        return self.sender if self.kind == SEND else self.receiver

    @property
    def channel(self) -> tuple[str, str]:
        return (self.sender, self.receiver)

    def __str__(self) -> str:
        return f"{self.sender}>{self.receiver}{self.kind}{self.msg}"


def send(sender: str, receiver: str, msg: str) -> Event:
    return make_event(SEND, sender, receiver, msg)


def receive(sender: str, receiver: str, msg: str) -> Event:
    return make_event(RECV, sender, receiver, msg)


def make_event(kind: str, sender: str, receiver: str, msg: str) -> Event:
    if kind not in (SEND, RECV):
        raise ValueError(f"unknown event kind {kind!r}")
    if sender == receiver:
        raise ValueError(f"event with sender == receiver ({sender})")
    for name in (sender, receiver, msg):
        if not name:
            raise ValueError("process and message names must be non-empty")
    return Event(kind, sender, receiver, msg)


Word = tuple  # tuple[Event, ...]


class WordSyntaxError(ValueError):
    pass


def parse_event(text: str) -> Event:
    m = _EVENT_RE.match(text)
    if m is None:
        raise WordSyntaxError(f"malformed event {text!r} (expected P>Q!m or P>Q?m)")
    sender, receiver, kind, msg = m.groups()
    try:
        return make_event(kind, sender, receiver, msg)
    except ValueError as exc:
        raise WordSyntaxError(str(exc)) from None


def parse_word(text: str) -> Word:
    tokens = text.split()
    if tokens == [EMPTY_WORD_TEXT]:
        return ()
    return tuple(parse_event(tok) for tok in tokens)


def format_word(w: Iterable[Event]) -> str:
    text = " ".join(str(e) for e in w)
    return text if text else EMPTY_WORD_TEXT


def as_word(w: Union[str, Iterable[Event]]) -> Word:
    if isinstance(w, str):
        return parse_word(w)
    return tuple(w)


@dataclass(frozen=True)
class Lasso:
    """The infinite word ``stem . cycle . cycle . ...``."""

    stem: Word
    cycle: Word

    def __post_init__(self):
        object.__setattr__(self, "stem", as_word(self.stem))
        object.__setattr__(self, "cycle", as_word(self.cycle))
        if not self.cycle:
            raise ValueError("lasso cycle must be non-empty")

    def unroll(self, n: int) -> Word:
        return self.stem + self.cycle * n

    def __str__(self) -> str:
        return f"{format_word(self.stem)} ({format_word(self.cycle)})^ω"


# -- projections -------------------------------------------------------------

Selector = Callable[[Event], bool]


def of_process(p: str) -> Selector:
    return lambda e: e.process == p


def sends_on(sender: str, receiver: str) -> Selector:
    return lambda e: e.kind == SEND and e.sender == sender and e.receiver == receiver


def receives_on(sender: str, receiver: str) -> Selector:
    return lambda e: e.kind == RECV and e.sender == sender and e.receiver == receiver


def project(w: Sequence[Event], selector: Selector) -> Word:
    return tuple(e for e in w if selector(e))


def values(w: Iterable[Event]) -> tuple[str, ...]:
    return tuple(e.msg for e in w)


def processes(w: Iterable[Event]) -> set[str]:
    out = set()
    for e in w:
        out.add(e.sender)
        out.add(e.receiver)
    return out


def channels(w: Iterable[Event]) -> set[tuple[str, str]]:
    return {e.channel for e in w}


# -- channel predicates on finite words --------------------------------------

def _first_fifo_violation(w: Sequence[Event]) -> int | None:
    """Index of the first receive that is not FIFO-justified, or None."""
    pending: dict[tuple[str, str], list[str]] = defaultdict(list)
    heads: Counter = Counter()
    for i, e in enumerate(w):
        ch = e.channel
        if e.kind == SEND:
            pending[ch].append(e.msg)
        else:
            h = heads[ch]
            if h >= len(pending[ch]) or pending[ch][h] != e.msg:
                return i
            heads[ch] = h + 1
    return None


def _channel_balance(w: Iterable[Event]) -> Counter:
    bal: Counter = Counter()
    for e in w:
        bal[e.channel] += 1 if e.kind == SEND else -1
    return bal


def _unroll_depth(lasso: Lasso, unroll: int) -> int:
    # enough iterations for eventual periodicity of queue heads to show up
    return max(unroll, len(lasso.stem) + 2 * len(lasso.cycle) + 2)


def is_channel_compliant(w: Union[Sequence[Event], Lasso], unroll: int = 3) -> bool:
    if isinstance(w, Lasso):
        return _first_fifo_violation(w.unroll(_unroll_depth(w, unroll))) is None
    return _first_fifo_violation(w) is None


def is_complete(w: Union[Sequence[Event], Lasso], unroll: int = 3) -> bool:
    """Channel-compliant and either infinite or with every send received.

    Raises ``ValueError`` if ``w`` is not channel-compliant.
    """
    if not is_channel_compliant(w, unroll):
        raise ValueError("word is not channel-compliant")
    if isinstance(w, Lasso):
        return True
    return all(v == 0 for v in _channel_balance(w).values())


def matching(w: Sequence[Event]) -> dict[int, int]:
    """Map 1-based send positions to the 1-based positions of their receives.

    Matching is by FIFO counting per channel: the n-th send on a channel is
    matched by the n-th receive on that channel.  Unmatched sends are absent.
    """
    sends: dict[tuple[str, str], list[int]] = defaultdict(list)
    nrecv: Counter = Counter()
    out = {}
    for j, e in enumerate(w, start=1):
        ch = e.channel
        if e.kind == SEND:
            sends[ch].append(j)
        else:
            n = nrecv[ch]
            if n < len(sends[ch]):
                out[sends[ch][n]] = j
            nrecv[ch] = n + 1
    return out


def max_occupancy(w: Sequence[Event]) -> int:
    """Largest number of in-flight messages on any channel over all prefixes."""
    occ: Counter = Counter()
    best = 0
    for e in w:
        ch = e.channel
        occ[ch] += 1 if e.kind == SEND else -1
        if occ[ch] > best:
            best = occ[ch]
    return best


def is_b_bounded(w: Union[Sequence[Event], Lasso], bound: int, unroll: int = 3) -> bool:
    if isinstance(w, Lasso):
        if any(v > 0 for v in _channel_balance(w.cycle).values()):
            return False
        w = w.unroll(_unroll_depth(w, unroll))
    return max_occupancy(w) <= bound


def half_duplex_violation_index(w: Sequence[Event]) -> int | None:
    """Length of the shortest prefix that breaks half-duplex, or None.

    Channel emptiness is judged by comparing the value sequences of sends
    and receives, so non-compliant words are handled literally.
    """
    sent: dict[tuple[str, str], list[str]] = defaultdict(list)
    recd: dict[tuple[str, str], list[str]] = defaultdict(list)
    for i, e in enumerate(w):
        ch = e.channel
        (sent if e.kind == SEND else recd)[ch].append(e.msg)
        rev = (ch[1], ch[0])
        if sent[ch] != recd[ch] and sent[rev] != recd[rev]:
            return i + 1
    return None


def is_half_duplex_word(w: Union[Sequence[Event], Lasso], unroll: int = 3) -> bool:
    if isinstance(w, Lasso):
        w = w.unroll(_unroll_depth(w, unroll))
    return half_duplex_violation_index(w) is None
