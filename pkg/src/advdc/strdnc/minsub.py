"""Minimal-substring decisions and the rotation / suffix reductions.

The core question: is every length-l window of x lexicographically at least
y (with l = |y| = |x|/2)?  The recursive split halves both strings, and the
straddling part is decided from at most four candidate windows: the first
and last occurrences of y's quarter-length prefix in each of two overlapping
half-windows.  That four-candidate shortcut rests on a periodicity argument
that is validated empirically against the brute oracle.

Rotation and suffix minimality both reduce to this decision: rotations are
windows of the doubled string, and suffixes are padded with a below-alphabet
sentinel after an above-alphabet guard is prepended.
"""

from __future__ import annotations

from dataclasses import dataclass

from .querystring import read_all


def _tuple(x):
    return tuple(read_all(x))


def minsub_decide(x, y) -> int:
    """Brute oracle: 1 iff every length-|y| window of x is >= y."""
    xs, ys = _tuple(x), _tuple(y)
    l = len(ys)
    if l > len(xs):
        raise ValueError("pattern longer than text")
    return int(all(xs[p:p + l] >= ys for p in range(len(xs) - l + 1)))


@dataclass(frozen=True)
class PrefixOccurrences:
    """First/last starts of the quarter prefix in the two half-windows.

    Positions are 0-based absolute starts in x; None marks no occurrence.
    """

    first_left: int | None
    last_left: int | None
    first_right: int | None
    last_right: int | None

    def candidates(self) -> list[int]:
        found = [
            p
            for p in (self.first_left, self.last_left, self.first_right, self.last_right)
            if p is not None
        ]
        return sorted(set(found))


def minsub_positions(x, y) -> PrefixOccurrences:
    """Locate y's quarter prefix in the two overlapping half-windows of x.

    Window one is x[0 : n/2], window two is x[n/4 : 3n/4]; together their
    start ranges cover every start of a length-(n/2) window of x.
    """
    xs, ys = _tuple(x), _tuple(y)
    n = len(xs)
    if len(ys) * 2 != n:
        raise ValueError("need |y| = |x| / 2")
    if n % 4 != 0:
        raise ValueError("need length divisible by 4")
    q = n // 4
    prefix = ys[:q]

    def occurrences(lo, hi):
        # starts p with lo <= p <= hi and x[p : p+q] == prefix
        found = [p for p in range(lo, hi + 1) if xs[p:p + q] == prefix]
        return (found[0], found[-1]) if found else (None, None)

    first_left, last_left = occurrences(0, n // 2 - q)
    first_right, last_right = occurrences(q, n // 2)
    return PrefixOccurrences(first_left, last_left, first_right, last_right)


def minsub_cross(x, y) -> int:
    """Straddle decision from the four candidate windows (vacuously 1 if none)."""
    xs, ys = _tuple(x), _tuple(y)
    h = len(ys)
    occ = minsub_positions(xs, ys)
    return int(all(xs[p:p + h] >= ys for p in occ.candidates()))


def minsub_cross_brute(x, y) -> int:
    """Brute straddle oracle: every window starting with the quarter prefix is >= y."""
    xs, ys = _tuple(x), _tuple(y)
    h = len(ys)
    q = h // 2
    prefix = ys[:q]
    for p in range(len(xs) - h + 1):
        if xs[p:p + q] == prefix and xs[p:p + h] < ys:
            return 0
    return 1


def minsub_recursion_decide(x, y) -> int:
    """One recursion level: two half instances (brute) AND the straddle check."""
    xs, ys = _tuple(x), _tuple(y)
    n = len(xs)
    if n % 4 != 0:
        raise ValueError("need length divisible by 4")
    h, q = n // 2, n // 4
    return int(
        minsub_decide(xs[:h], ys[:q])
        and minsub_decide(xs[q:q + h], ys[:q])
        and minsub_cross(xs, ys)
    )


# ---------------------------------------------------------------------------
# Rotation and suffix minimality via the doubled-string reduction


def _ranks(xs):
    order = {s: r for r, s in enumerate(sorted(set(xs)), start=1)}
    return [order[s] for s in xs]


def rotation_decide(x, i: int) -> int:
    """1 iff the rotation starting at 0-based i is a lexicographic minimum.

    Evaluated as: every length-n window of xx is at least the rotation.
    Ties with other rotations are accepted.
    """
    xs = _tuple(x)
    n = len(xs)
    if not 0 <= i < n:
        raise ValueError("rotation start out of range")
    rot = xs[i:] + xs[:i]
    return minsub_decide(xs + xs, rot)


def rotation_brute(x, i: int) -> int:
    xs = _tuple(x)
    n = len(xs)
    rot = xs[i:] + xs[:i]
    return int(all(rot <= xs[j:] + xs[:j] for j in range(n)))


def suffix_decide(x, i: int) -> int:
    """1 iff the suffix starting at 0-based i is the strict lexicographic minimum.

    The text becomes (top, x, bottom^(n-1)) and the query becomes the suffix
    padded with the below-alphabet sentinel; padded windows then order
    exactly like variable-length suffixes, and distinct pad lengths rule out
    ties.
    """
    xs = _tuple(x)
    n = len(xs)
    if not 0 <= i < n:
        raise ValueError("suffix start out of range")
    ranks = _ranks(xs)
    bottom, top = 0, max(ranks) + 1
    text = tuple([top] + ranks + [bottom] * (n - 1))
    query = tuple(ranks[i:] + [bottom] * i)
    return minsub_decide(text, query)


def suffix_brute(x, i: int) -> int:
    xs = _tuple(x)
    n = len(xs)
    suf = xs[i:]
    return int(all(j == i or suf < xs[j:] for j in range(n)))
