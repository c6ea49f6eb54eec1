"""
From a global type to an HMSC
=============================

A global type describes a protocol from a bird's-eye view.  Translating it
into a graph of charts lets the chart checks apply, and a bounded language
comparison confirms that nothing was lost.
"""

from chanrestrict.events import format_word
from chanrestrict.formats import format_hmsc
from chanrestrict.globaltype import parse_global_type, type_language
from chanrestrict.hmsc import classify_hmsc
from chanrestrict.mst2hmsc import translate, verify_translation

# A producer sends a list, element by element, and the consumer acknowledges.
g = parse_global_type("rec t . ( P->Q:cons . t + P->Q:nil . Q->P:ack . end )")

out = translate(g, "list")
print(format_hmsc(out.hmsc))
for v, origin in out.describe_map().items():
    print(f"  {v:6} <- {origin}")

# Maximal words of the type up to length 8.
print("\ntype words:")
for w in sorted(type_language(g, 8).finite, key=len):
    print("  ", format_word(w) or "ε")

# Each vertex carries at most one message, which makes every verdict positive.
print()
for v in classify_hmsc(out.hmsc):
    print(f"{v.prop}: holds={v.holds} parameter={v.parameter}")

# Type words are HMSC words, and both sides agree after closing under swaps.
rep = verify_translation(g, 10)
print("\nbounded check:", rep.as_dict())

# Sequencing independent exchanges shows the inclusion can be strict.
g2 = parse_global_type("P->Q:m1 . R->S:m2 . end")
rep2 = verify_translation(g2, 10)
print(f"independent exchanges: {rep2.type_words} type words, {rep2.hmsc_words} HMSC words")
