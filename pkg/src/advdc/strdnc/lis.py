"""Increasing-subsequence oracles over strings with a skip sentinel.

The sentinel never participates in an increasing run.  The existence oracle
uses patience tails (one read per position); the value oracles (smallest
possible last element, largest possible first element of a length-j run)
use quadratic chain-length tables.  A pair of removal-filtered existence
calls classifies any pivot against those values, which is what the
randomized search layer consumes.
"""

from __future__ import annotations

from bisect import bisect_left

from .querystring import STAR, read_all, removal_transform


class OracleInconsistencyError(RuntimeError):
    """The two removal-filtered answers contradict each other."""


def lis_decide(x, k: int) -> int:
    """1 iff x has a strictly increasing run of k non-sentinel values.

    Patience tails with early exit; reads each position at most once.
    """
    if k <= 0:
        return 1
    tails: list = []
    for i in range(len(x)):
        v = x[i]
        if v == STAR:
            continue
        pos = bisect_left(tails, v)
        if pos == len(tails):
            tails.append(v)
            if len(tails) >= k:
                return 1
        else:
            tails[pos] = v
    return 0


def lis_length(x) -> int:
    tails: list = []
    for i in range(len(x)):
        v = x[i]
        if v == STAR:
            continue
        pos = bisect_left(tails, v)
        if pos == len(tails):
            tails.append(v)
        else:
            tails[pos] = v
    return len(tails)


def _ending_lengths(vals) -> list[int]:
    """Length of the longest increasing run ending exactly at each index."""
    n = len(vals)
    out = [0] * n
    for i in range(n):
        if vals[i] == STAR:
            continue
        best = 1
        for j in range(i):
            if vals[j] != STAR and vals[j] < vals[i] and out[j] + 1 > best:
                best = out[j] + 1
        out[i] = best
    return out


def _starting_lengths(vals) -> list[int]:
    """Length of the longest increasing run starting exactly at each index."""
    n = len(vals)
    out = [0] * n
    for i in range(n - 1, -1, -1):
        if vals[i] == STAR:
            continue
        best = 1
        for j in range(i + 1, n):
            if vals[j] != STAR and vals[j] > vals[i] and out[j] + 1 > best:
                best = out[j] + 1
        out[i] = best
    return out


def min_last(x, j: int):
    """Smallest value that can end a length-j increasing run, or None."""
    if j <= 0:
        raise ValueError("run length must be positive")
    vals = read_all(x)
    ends = _ending_lengths(vals)
    hits = [vals[i] for i in range(len(vals)) if ends[i] >= j]
    return min(hits) if hits else None


def max_first(x, j: int):
    """Largest value that can start a length-j increasing run, or None."""
    if j <= 0:
        raise ValueError("run length must be positive")
    vals = read_all(x)
    starts = _starting_lengths(vals)
    hits = [vals[i] for i in range(len(vals)) if starts[i] >= j]
    return max(hits) if hits else None


def lis_cross(x, i: int, j: int) -> int:
    """1 iff some (i+j)-run splits as an i-run in the left half and a j-run
    in the right half.

    Equivalent to: the left half's smallest i-run ending value sits below
    the right half's largest j-run starting value.
    """
    vals = read_all(x)
    mid = len(vals) // 2
    a = min_last(vals[:mid], i)
    b = max_first(vals[mid:], j)
    return int(a is not None and b is not None and a < b)


def lis_recursion_holds(x, k: int) -> bool:
    """Whole-string decision equals halves OR some straddling split."""
    vals = read_all(x)
    mid = len(vals) // 2
    lhs = lis_decide(vals, k)
    rhs = lis_decide(vals[:mid], k) or lis_decide(vals[mid:], k)
    if not rhs:
        rhs = any(lis_cross(vals, i, k - i) for i in range(1, k))
    return lhs == int(bool(rhs))


# ---------------------------------------------------------------------------
# Pivot classification through removal filtering


def classify_min_last(x, j: int, pivot) -> int:
    """Compare the smallest j-run ending value against a pivot: -1, 0, or +1.

    Removing values above the pivot and testing existence, then repeating
    with at-least removal, pins the value's side: (1, 0) means equal, (1, 1)
    means below, (0, 0) means above, and (0, 1) cannot come from a
    consistent oracle.
    """
    keep_le = lis_decide(removal_transform(x, pivot, "gt"), j)
    keep_lt = lis_decide(removal_transform(x, pivot, "ge"), j)
    if (keep_le, keep_lt) == (0, 0):
        return 1  # value > pivot
    if (keep_le, keep_lt) == (1, 0):
        return 0
    if (keep_le, keep_lt) == (1, 1):
        return -1  # value < pivot
    raise OracleInconsistencyError(
        f"removal answers (0, 1) at pivot {pivot!r} are impossible"
    )


def classify_max_first(x, j: int, pivot) -> int:
    """Same classification for the largest j-run starting value."""
    keep_ge = lis_decide(removal_transform(x, pivot, "lt"), j)
    keep_gt = lis_decide(removal_transform(x, pivot, "le"), j)
    if (keep_ge, keep_gt) == (0, 0):
        return -1  # value < pivot
    if (keep_ge, keep_gt) == (1, 0):
        return 0
    if (keep_ge, keep_gt) == (1, 1):
        return 1  # value > pivot
    raise OracleInconsistencyError(
        f"removal answers (0, 1) at pivot {pivot!r} are impossible"
    )
