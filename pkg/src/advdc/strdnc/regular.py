"""Detecting a 2 0* 2 pattern over the alphabet {0, 1, 2}.

The decision splits across the string midpoint: the pattern sits in the left
half, in the right half, or straddles the cut, and the straddling case is
decided by a two-endpoint scan whose correctness the tests check against a
brute pair enumeration.
"""

from __future__ import annotations

from .querystring import read_all

SIGMA = (0, 1, 2)


def _check_symbols(vals):
    for v in vals:
        if v not in SIGMA:
            raise ValueError(f"symbol {v!r} outside {{0, 1, 2}}")


def regular_decide(x) -> int:
    """1 iff x contains two 2s separated only by 0s.  Reads each position once."""
    has_prev_2 = False
    clean_gap = False  # only zeros since the last 2
    for i in range(len(x)):
        v = x[i]
        if v not in SIGMA:
            raise ValueError(f"symbol {v!r} outside {{0, 1, 2}}")
        if v == 2:
            if has_prev_2 and clean_gap:
                return 1
            has_prev_2 = True
            clean_gap = True
        elif v == 1:
            clean_gap = False
    return 0


def regular_brute(x) -> int:
    """Quadratic oracle: every (i, j) pair is checked directly."""
    vals = read_all(x)
    _check_symbols(vals)
    n = len(vals)
    for i in range(n):
        if vals[i] != 2:
            continue
        for j in range(i + 1, n):
            if vals[j] == 2:
                if all(vals[t] == 0 for t in range(i + 1, j)):
                    return 1
                break  # a farther 2 would contain this one in its gap
            if vals[j] != 0:
                break
    return 0


def regular_cross(x) -> int:
    """The straddling case: a match starting at i < mid and ending at j >= mid.

    Only the rightmost 2 in the left half and the leftmost 2 in the right
    half can be endpoints (any other 2 would interrupt the zero gap), so two
    scans and a gap check decide it.  Reads at most 2n positions.
    """
    n = len(x)
    mid = n // 2
    left2 = None
    for i in range(mid - 1, -1, -1):
        v = x[i]
        if v not in SIGMA:
            raise ValueError(f"symbol {v!r} outside {{0, 1, 2}}")
        if v == 2:
            left2 = i
            break
    if left2 is None:
        return 0
    right2 = None
    for j in range(mid, n):
        v = x[j]
        if v not in SIGMA:
            raise ValueError(f"symbol {v!r} outside {{0, 1, 2}}")
        if v == 2:
            right2 = j
            break
    if right2 is None:
        return 0
    return int(all(x[t] == 0 for t in range(left2 + 1, right2)))


def regular_cross_brute(x) -> int:
    """Pair enumeration restricted to matches that straddle the midpoint."""
    vals = read_all(x)
    _check_symbols(vals)
    n = len(vals)
    mid = n // 2
    for i in range(mid):
        for j in range(mid, n):
            if (
                vals[i] == 2
                and vals[j] == 2
                and all(vals[t] == 0 for t in range(i + 1, j))
            ):
                return 1
    return 0


def regular_recursion_holds(x) -> bool:
    """Whole-string decision equals left half OR right half OR straddle."""
    vals = read_all(x)
    mid = len(vals) // 2
    lhs = regular_decide(vals)
    rhs = (
        regular_decide(vals[:mid])
        or regular_decide(vals[mid:])
        or regular_cross(vals)
    )
    return lhs == rhs
