"""Query-counted string access with optional value-removal filtering.

Oracles read input strings position by position; wrapping a sequence in a
QueryString counts every indexed read.  A removal filter rewrites symbols
matching a comparison against a pivot to the out-of-alphabet sentinel at
query time, leaving the underlying string untouched.  Views can be stacked;
reads propagate to (and are counted by) every layer.
"""

from __future__ import annotations

from typing import Sequence

STAR = "*"

_MODES = {
    "gt": lambda v, u: v > u,
    "ge": lambda v, u: v >= u,
    "lt": lambda v, u: v < u,
    "le": lambda v, u: v <= u,
}


class QueryString:
    """A string whose indexed reads are counted.

    ``removal`` is an optional predicate on symbol values; matching symbols
    read as the sentinel.  The sentinel itself never matches any comparison,
    which makes stacked filters idempotent.
    """

    def __init__(self, symbols, removal=None):
        if isinstance(symbols, QueryString):
            self._parent = symbols
            self._symbols = None
            self._length = len(symbols)
        else:
            self._parent = None
            self._symbols = tuple(symbols)
            self._length = len(self._symbols)
        self._removal = removal
        self.query_count = 0

    def __len__(self):
        return self._length

    def __getitem__(self, i):
        if isinstance(i, slice):
            raise TypeError("read one position at a time")
        self.query_count += 1
        sym = self._parent[i] if self._parent is not None else self._symbols[i]
        if self._removal is not None and sym != STAR and self._removal(sym):
            return STAR
        return sym

    def __iter__(self):
        for i in range(self._length):
            yield self[i]

    def snapshot(self) -> tuple:
        """Effective symbols without touching the query counters."""
        if self._parent is not None:
            base = self._parent.snapshot()
        else:
            base = self._symbols
        if self._removal is None:
            return base
        return tuple(
            STAR if (s != STAR and self._removal(s)) else s for s in base
        )


def removal_transform(x, pivot, mode: str) -> QueryString:
    """View of x where symbols compared true against ``pivot`` read as the sentinel.

    Modes: gt, ge, lt, le.  The underlying string is never modified and the
    sentinel is ignored by the comparison, so repeated application with the
    same arguments is a no-op.
    """
    if mode not in _MODES:
        raise ValueError(f"mode must be one of {sorted(_MODES)}, got {mode!r}")
    test = _MODES[mode]
    return QueryString(x, removal=lambda v: test(v, pivot))


def read_all(x) -> list:
    """Read every position once, in order."""
    return [x[i] for i in range(len(x))]


def parse_symbols(tokens: Sequence[str]) -> tuple:
    """Parse whitespace-split tokens: integers where possible, '*' kept."""
    out = []
    for tok in tokens:
        if tok == STAR:
            out.append(STAR)
            continue
        try:
            out.append(int(tok))
        except ValueError:
            out.append(tok)
    return tuple(out)
