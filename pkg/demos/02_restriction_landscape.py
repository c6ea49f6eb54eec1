"""
Three channel restrictions on four small charts
===============================================

Half-duplex, existentially bounded and k-synchronous charts, with the
witness behind each verdict.
"""

from importlib.resources import files

from chanrestrict.events import format_word
from chanrestrict.formats import parse_bmsc
from chanrestrict.restrictions import (
    half_duplex_violation,
    min_existential_bound,
    min_sync_k,
    violation_prefix,
)

FIXTURES = files("chanrestrict") / "fixtures"

for name in ("h2", "h3", "h4", "h5"):
    text = (FIXTURES / f"{name}.bmsc").read_text()
    _, m = parse_bmsc(text)
    print(f"--- {name}")
    print(text.rstrip())

    # Half-duplex: a prefix with messages in flight in both directions breaks it.
    v = half_duplex_violation(m)
    print("half-duplex:", "yes" if v is None else f"no, after {format_word(violation_prefix(m, v))}")

    # Existential bound: the best schedule and its peak channel occupancy.
    b = min_existential_bound(m)
    print(f"least bound: {b.bound} via {format_word(b.witness)}")

    # Synchronisability: cut into blocks of sends followed by their receives.
    dec = min_sync_k(m)
    if dec is None:
        print("k-synchronous: for no k")
    else:
        print(f"k-synchronous from k={dec.k}:", " | ".join(dec.words(m)))
    print()
