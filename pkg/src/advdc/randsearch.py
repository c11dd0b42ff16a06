"""Bracketing search for a distinguished multiset element.

The search keeps an open bracket around the target, repeatedly samples a
uniform candidate strictly inside the bracket, and asks a three-way
comparison oracle which side the target is on.  Each round makes exactly one
sample call and one comparison call; the candidate set shrinks to at most
three quarters of its size in expectation, so a small logarithmic round
budget suffices.  The same loop, with the comparison oracle built from a
pair of removal-filtered subsequence tests, retrieves the exact value
oracles of the increasing-subsequence module.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field

import numpy as np

from .strdnc.lis import classify_max_first, classify_min_last, lis_decide
from .strdnc.querystring import STAR, QueryString


def rounds_cap(n: int, delta: float) -> int:
    """Iteration budget: ceil(10 * log2(n / delta)).

    The shrink argument needs (3/4)^t * n <= delta, i.e. t >= log(n/delta) /
    log(4/3) ~= 2.41 * log2(n/delta); the factor 10 leaves ample slack.
    """
    if not 0 < delta < 1:
        raise ValueError("failure probability must lie in (0, 1)")
    return max(1, math.ceil(10 * math.log2(n / delta)))


def _philox(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


@dataclass
class SearchOutcome:
    value: object  # the target value, or None on abort
    found: bool
    iterations: int
    o_calls: int
    r_calls: int
    trace: list[int] = field(default_factory=list)  # candidate sizes X_t
    seed: int = 0


def randomized_search(
    values,
    target,
    delta: float = 0.01,
    seed: int = 0,
    flip_prob: float = 0.0,
) -> SearchOutcome:
    """Locate ``target`` in the multiset ``values`` by bracketing.

    Duplicates are kept (multiset semantics); success means returning the
    target's value.  Aborts after the round budget, counted as failure.
    ``flip_prob`` optionally corrupts each comparison answer (exploration
    only; the contract assumes noiseless oracles).
    """
    svals = sorted(values)
    n = len(svals)
    if n == 0:
        raise ValueError("empty multiset")
    lo_t = bisect_left(svals, target)
    if lo_t >= n or svals[lo_t] != target:
        raise ValueError("target must be a member of the multiset")
    rng = _philox(seed)
    cap = rounds_cap(n, delta)
    lo, hi = 0, n
    trace = [n]
    o_calls = r_calls = 0
    for it in range(1, cap + 1):
        if hi <= lo:
            if flip_prob:  # a corrupted answer can cut the target away
                return SearchOutcome(None, False, it - 1, o_calls, r_calls, trace, seed)
            raise RuntimeError("candidate set emptied while the target is inside")
        r_calls += 1
        u = svals[int(rng.integers(lo, hi))]
        o_calls += 1
        side = (target > u) - (target < u)
        if flip_prob and rng.random() < flip_prob:
            side = int(rng.choice([s for s in (-1, 0, 1) if s != side]))
        if side == 0:
            trace.append(1)
            return SearchOutcome(u, True, it, o_calls, r_calls, trace, seed)
        if side < 0:
            hi = bisect_left(svals, u, lo, hi)
        else:
            lo = bisect_right(svals, u, lo, hi)
        trace.append(hi - lo)
    return SearchOutcome(None, False, cap, o_calls, r_calls, trace, seed)


# ---------------------------------------------------------------------------
# Shrink statistics


@dataclass
class TailPoint:
    t: int
    observed: float
    stderr: float
    bound: float

    @property
    def ok(self) -> bool:
        return self.observed <= self.bound


@dataclass
class ShrinkReport:
    n: int
    trials: int
    seed: int
    mean_ratio: float
    ratio_stderr: float
    ratio_bound: float  # 3/4 plus three standard errors
    tails: list[TailPoint]

    @property
    def ratio_ok(self) -> bool:
        return self.mean_ratio <= self.ratio_bound

    @property
    def tails_ok(self) -> bool:
        return all(p.ok for p in self.tails)

    @property
    def passed(self) -> bool:
        return self.ratio_ok and self.tails_ok


def shrink_statistic(n: int, trials: int, seed: int = 0) -> ShrinkReport:
    """Estimate the per-round candidate-shrink ratio and the tail decay.

    Distinct values reduce the process to ranks: a bracket [lo, hi) around
    the target rank shrinks by a uniform cut.  A finished run counts as
    candidate size 1 from then on.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    rng = _philox(seed)
    horizon = math.ceil(10 * math.log2(n))
    ratios = []
    ratio_sq = 0.0
    over_one = np.zeros(horizon + 1, dtype=np.int64)  # index t counts X_t > 1
    for _ in range(trials):
        p = int(rng.integers(0, n))
        lo, hi = 0, n
        for t in range(1, horizon + 1):
            size = hi - lo
            if size > 1:
                g = int(rng.integers(lo, hi))
                if g == p:
                    lo, hi = p, p + 1
                elif g > p:
                    hi = g
                else:
                    lo = g + 1
                new = hi - lo
                ratios.append(new / size)
                ratio_sq += (new / size) ** 2
                size = new
            if size > 1:
                over_one[t] += 1
    mean = float(np.mean(ratios)) if ratios else 0.0
    var = ratio_sq / len(ratios) - mean**2 if ratios else 0.0
    stderr = math.sqrt(max(var, 0.0) / len(ratios)) if ratios else 0.0
    tails = []
    for t in range(1, horizon + 1):
        phat = over_one[t] / trials
        se = math.sqrt(phat * (1 - phat) / trials)
        bound = (0.75**t) * n * (1 + 3 * se)
        tails.append(TailPoint(t, phat, se, bound))
    return ShrinkReport(n, trials, seed, mean, stderr, 0.75 + 3 * stderr, tails)


def shrink_exact_two() -> float:
    """Exact expected candidate size after one round at n = 2.

    Both equally likely samples leave one candidate (hit the target, or cut
    it away), so the expectation is 1, below the 3/2 the shrink rule allows.
    """
    sizes = []
    for target_rank in (0, 1):
        for sample_rank in (0, 1):
            if sample_rank == target_rank:
                sizes.append(1)
            elif sample_rank > target_rank:
                sizes.append(sample_rank)  # keep ranks below the sample
            else:
                sizes.append(1 - sample_rank)  # keep ranks above the sample
    return sum(sizes) / len(sizes)


# ---------------------------------------------------------------------------
# Exact value retrieval through removal-filtered subsequence tests


@dataclass
class ValueSearchOutcome:
    value: object  # found value, or None (absent or aborted)
    absent: bool  # the initial existence test already failed
    iterations: int
    o_calls: int
    r_calls: int
    seed: int = 0


def _value_search(x, j, delta, seed, classify) -> ValueSearchOutcome:
    xq = x if isinstance(x, QueryString) else QueryString(x)
    symbols = xq.snapshot()
    pool = sorted(v for v in symbols if v != STAR)
    if not pool:
        return ValueSearchOutcome(None, True, 0, 0, 0, seed)
    if not lis_decide(xq, j):
        return ValueSearchOutcome(None, True, 0, 1, 0, seed)
    rng = _philox(seed)
    cap = rounds_cap(len(pool), delta)
    lo, hi = 0, len(pool)
    o_calls = 1  # the existence probe above
    r_calls = 0
    for it in range(1, cap + 1):
        if hi <= lo:
            raise RuntimeError("candidate set emptied while the value is inside")
        r_calls += 1
        u = pool[int(rng.integers(lo, hi))]
        o_calls += 1
        side = classify(xq, j, u)
        if side == 0:
            return ValueSearchOutcome(u, False, it, o_calls, r_calls, seed)
        if side < 0:
            hi = bisect_left(pool, u, lo, hi)
        else:
            lo = bisect_right(pool, u, lo, hi)
    return ValueSearchOutcome(None, False, cap, o_calls, r_calls, seed)


def min_last_via_search(x, j: int, delta: float = 0.05, seed: int = 0) -> ValueSearchOutcome:
    """Smallest value ending a length-j run, found by bracketing search.

    The comparison oracle is the pair of removal-filtered existence tests;
    one classification counts as one oracle call.
    """
    return _value_search(x, j, delta, seed, classify_min_last)


def max_first_via_search(x, j: int, delta: float = 0.05, seed: int = 0) -> ValueSearchOutcome:
    """Largest value starting a length-j run, by the mirrored tables."""
    return _value_search(x, j, delta, seed, classify_max_first)
