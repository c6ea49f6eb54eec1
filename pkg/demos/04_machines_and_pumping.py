"""
Bounded exploration of communicating machines
=============================================

Machines talk over FIFO channels.  Exploration is bounded, so a positive
verdict only holds up to depth and channel capacity.  A cycle that fills a
channel nobody reads, however, settles unboundedness for good.
"""

from importlib.resources import files

from chanrestrict.csm import check_deadlock, classify_csm, explore, initial_configuration, step
from chanrestrict.events import format_word, send
from chanrestrict.formats import parse_csm

FIXTURES = files("chanrestrict") / "fixtures"
load = lambda name: parse_csm((FIXTURES / name).read_text())  # noqa: E731

# Two machines that each send forever and never receive.
c5 = load("c5.csm")
print((FIXTURES / "c5.csm").read_text())

c = initial_configuration(c5)
for _ in range(3):
    c = step(c5, c, send("P", "Q", "m"))
print("after three sends:", c.describe(c5.processes))

res = explore(c5, 6, 3)
lassos = res.sorted_lassos()
print(f"\n{len(lassos)} lassos, shortest:", [str(l) for l in lassos[:4]])
for p in res.pumping:
    print("pumping:", p.as_dict())
print("deadlock:", check_deadlock(c5, 6, 3))

# Each exchange is trivially 1-synchronous, yet no channel bound exists.
print()
for v in classify_csm(c5):
    print(f"{v.prop}: holds={v.holds} parameter={v.parameter} bounded={v.bounded_claim}")

# The list protocol: every verdict positive, but only up to the bounds.
fig1 = load("fig1.csm")
res = explore(fig1, 8, 4)
print("\nlist protocol traces up to depth 8:")
for w in res.maximal_traces:
    print("  ", format_word(w))
for v in classify_csm(fig1):
    print(f"{v.prop}: holds={v.holds} parameter={v.parameter} bounded={v.bounded_claim}")
