"""Symbolic query costs of the standard quantum primitives.

These enter recurrence derivations as auxiliary-work classes only; nothing
here executes a quantum algorithm.
"""

from __future__ import annotations

from fractions import Fraction

from ..recur import BoundClass

_ENTRIES = {
    # searching n items for a marked one
    "search": BoundClass(Fraction(1, 2), Fraction(0)),
    # minimum (or maximum) of an unsorted length-n list
    "minimum": BoundClass(Fraction(1, 2), Fraction(0)),
    # locating a length-m pattern in a length-n text, up to polylog factors
    "string_match": BoundClass(Fraction(1, 2), Fraction(0), tilde=True),
    # lexicographic comparison of two length-n strings
    "string_compare": BoundClass(Fraction(1, 2), Fraction(0)),
    # a shared value between two lists of length <= n
    "bipartite_distinctness": BoundClass(Fraction(2, 3), Fraction(0)),
}


def cost_model(entry: str, sizes=None) -> BoundClass:
    """Query-cost class of a primitive, as a function of the larger input size.

    ``sizes`` is accepted for call-site documentation; every entry is already
    expressed in the dominant size.
    """
    if entry not in _ENTRIES:
        raise KeyError(
            f"unknown primitive {entry!r}; expected one of {sorted(_ENTRIES)}"
        )
    return _ENTRIES[entry]
