"""
Words, charts and swaps
=======================

A run of a message-passing system is a word of send and receive events.
Many words describe the same exchange; a chart keeps only the causal order.
"""

from chanrestrict.events import as_word, format_word, is_channel_compliant, max_occupancy
from chanrestrict.indist import closure, one_step_neighbors
from chanrestrict.msc import count_linearizations, linearizations, msc_of

# Two independent conversations, P talking to Q and R talking to S.
w = as_word("P>Q!m1 P>Q?m1 R>S!m2 R>S?m2")
print("word:", format_word(w), "| compliant:", is_channel_compliant(w))

# Build the chart and list every order it allows.
m = msc_of(w)
print("\nnodes per process:", m.rows)
print("orders allowed by the chart:", count_linearizations(m))
for u in linearizations(m):
    print("  ", format_word(u), " peak occupancy", max_occupancy(u))

# Swapping adjacent independent events gives words no observer can tell apart.
print("\none swap away:")
for u in sorted(one_step_neighbors(w), key=format_word):
    print("  ", format_word(u))

# The full swap closure coincides with the set of orders of the chart.
print("\nclosure equals orders:", closure([w]) == set(linearizations(m)))

# A receive can never overtake its send, so this word is rejected.
print("receive first compliant:", is_channel_compliant(as_word("P>Q?m P>Q!m")))
