"""Channel restrictions for message-passing protocols.

Words, prefix MSCs, HMSCs, global types and communicating state machines,
together with checks for half-duplex communication, existential
B-boundedness and k-synchronisability.
"""

__version__ = "0.1.0"
