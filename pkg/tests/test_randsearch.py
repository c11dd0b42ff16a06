import math

import numpy as np
import pytest

from advdc import randsearch as rs
from advdc import strdnc as sd
from advdc.strdnc import STAR


def _rng(seed):
    return np.random.Generator(np.random.Philox(seed))


def test_rounds_cap_values():
    assert rs.rounds_cap(1000, 0.01) == 167
    assert rs.rounds_cap(1, 0.5) == 10


def test_rounds_cap_rejects_bad_delta():
    with pytest.raises(ValueError):
        rs.rounds_cap(10, 0)


def test_singleton_found_in_one_round():
    out = rs.randomized_search([5], 5, 0.5, seed=0)
    assert out.found and out.value == 5 and out.iterations == 1


def test_target_must_belong():
    with pytest.raises(ValueError):
        rs.randomized_search([1, 2, 3], 4, 0.1, seed=0)


def test_duplicates_all_seeds():
    for seed in range(100):
        out = rs.randomized_search([3, 3, 3, 7], 7, 0.01, seed=seed)
        assert out.found and out.value == 7


def test_one_sample_one_compare_per_round():
    for seed in range(20):
        out = rs.randomized_search(list(range(64)), 17, 0.05, seed=seed)
        assert out.o_calls == out.r_calls == out.iterations


def test_candidate_sizes_strictly_shrink():
    for seed in range(30):
        out = rs.randomized_search(list(range(200)), 131, 0.01, seed=seed)
        trace = out.trace
        for a, b in zip(trace, trace[1:]):
            assert b < a or b == 1
        assert out.found


def test_success_rate_small_sweep():
    values = list(range(1, 501))
    cap = rs.rounds_cap(500, 0.01)
    hits = 0
    for seed in range(1000):
        out = rs.randomized_search(values, 137, 0.01, seed=seed)
        assert out.iterations <= cap
        hits += out.found
    assert hits / 1000 >= 0.99


def test_error_injection_smoke():
    outcomes = [
        rs.randomized_search(list(range(50)), 13, 0.05, seed=s, flip_prob=0.4)
        for s in range(50)
    ]
    assert any(o.found for o in outcomes)
    # corrupted comparisons may abort or return a wrong value; no crashes


def test_shrink_exact_two():
    assert rs.shrink_exact_two() == 1.0
    assert rs.shrink_exact_two() <= 1.5


def test_shrink_statistic_bounds():
    rep = rs.shrink_statistic(100, 20_000, seed=42)
    assert rep.mean_ratio <= rep.ratio_bound
    assert rep.ratio_bound == pytest.approx(0.75 + 3 * rep.ratio_stderr)
    assert rep.tails_ok
    assert rep.passed


def test_shrink_statistic_tail_decay():
    rep = rs.shrink_statistic(64, 5000, seed=9)
    tail = {p.t: p.observed for p in rep.tails}
    horizon = max(tail)
    assert tail[horizon] == 0.0  # all runs isolate the target well in time


def test_shrink_requires_two_elements():
    with pytest.raises(ValueError):
        rs.shrink_statistic(1, 10)


def test_shrink_tail_large_n_at_t20():
    rep = rs.shrink_statistic(1000, 10_000, seed=7)
    point = next(p for p in rep.tails if p.t == 20)
    assert point.bound >= (0.75**20) * 1000
    assert point.observed <= point.bound


def test_min_last_search_example():
    out = rs.min_last_via_search((2, STAR, 1, 3), 2, 0.05, seed=3)
    assert out.value == 3
    assert not out.absent


def test_min_last_search_absent():
    out = rs.min_last_via_search((STAR, STAR), 1, 0.05, seed=0)
    assert out.absent and out.value is None
    out = rs.min_last_via_search((3, 2, 1), 2, 0.05, seed=0)
    assert out.absent and out.value is None  # no increasing pair exists


def test_value_search_matches_exact_oracles():
    rng = _rng(11)
    for t in range(400):
        raw = rng.integers(-3, 40, size=48)
        x = tuple(int(v) if v > 0 else STAR for v in raw)
        j = int(rng.integers(1, 4))
        low = rs.min_last_via_search(x, j, 0.05, seed=100 + t)
        high = rs.max_first_via_search(x, j, 0.05, seed=200 + t)
        assert low.value == sd.min_last(x, j)
        assert high.value == sd.max_first(x, j)


def test_value_search_counts_oracle_calls():
    x = tuple(range(32))
    out = rs.min_last_via_search(x, 4, 0.05, seed=5)
    # one existence probe plus one classification per round
    assert out.o_calls == out.iterations + 1
    assert out.r_calls == out.iterations


def test_value_search_budget():
    rng = _rng(13)
    for t in range(100):
        x = tuple(int(v) for v in rng.integers(0, 30, size=64))
        out = rs.min_last_via_search(x, 2, 0.05, seed=t)
        assert out.iterations <= rs.rounds_cap(64, 0.05)
