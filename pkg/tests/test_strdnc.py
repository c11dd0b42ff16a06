import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from advdc import strdnc as sd
from advdc.strdnc import STAR, QueryString, removal_transform
from advdc.strdnc import lis as lis_mod


def _rng(seed):
    return np.random.Generator(np.random.Philox(seed))


# ---------------------------------------------------------------------------
# query strings


def test_query_counting_and_filter():
    q = QueryString((2, STAR, 1, 3))
    assert q[0] == 2
    assert q.query_count == 1
    view = removal_transform(q, 2, "gt")
    assert view.snapshot() == (2, STAR, 1, STAR)
    assert view[3] == STAR
    assert view.query_count == 1
    assert q.query_count == 2  # reads propagate to the parent


def test_removal_is_idempotent():
    q = QueryString((5, 1, STAR, 7))
    once = removal_transform(q, 4, "gt")
    twice = removal_transform(once, 4, "gt")
    assert once.snapshot() == twice.snapshot() == (STAR, 1, STAR, STAR)


def test_removal_modes():
    base = (1, 2, 3)
    assert removal_transform(base, 2, "ge").snapshot() == (1, STAR, STAR)
    assert removal_transform(base, 2, "lt").snapshot() == (STAR, 2, 3)
    assert removal_transform(base, 2, "le").snapshot() == (STAR, STAR, 3)


def test_removal_mode_validation():
    with pytest.raises(ValueError):
        removal_transform((1,), 1, "eq")


# ---------------------------------------------------------------------------
# pattern recognizer


def test_regular_examples():
    assert sd.regular_decide((2, 2)) == 1
    assert sd.regular_decide((2, 0, 1, 2)) == 0
    assert sd.regular_decide((1, 2, 0, 0, 2, 1)) == 1
    assert sd.regular_cross((1, 2, 0, 0, 2, 1)) == 1


def test_regular_rejects_foreign_symbols():
    with pytest.raises(ValueError):
        sd.regular_decide((0, 3))


def test_regular_exhaustive_small():
    for n in range(1, 8):
        for x in itertools.product((0, 1, 2), repeat=n):
            assert sd.regular_decide(x) == sd.regular_brute(x)
            assert sd.regular_cross(x) == sd.regular_cross_brute(x)
            assert sd.regular_recursion_holds(x)


def test_regular_query_budget():
    x = QueryString(tuple(_rng(0).integers(0, 3, size=50)))
    sd.regular_decide(x)
    assert x.query_count <= 50
    x2 = QueryString(x.snapshot())
    sd.regular_cross(x2)
    assert x2.query_count <= 100


# ---------------------------------------------------------------------------
# minimal windows, rotations, suffixes


def test_minsub_examples():
    assert sd.minsub_decide(tuple("abab"), tuple("ab")) == 1
    assert sd.minsub_decide(tuple("aaab"), tuple("ab")) == 0


def test_minsub_positions_windows():
    occ = sd.minsub_positions(tuple("abababab"), tuple("abab"))
    assert (occ.first_left, occ.last_left) == (0, 2)
    assert (occ.first_right, occ.last_right) == (2, 4)
    assert occ.candidates() == [0, 2, 4]


def test_minsub_positions_absent_prefix():
    occ = sd.minsub_positions((0, 0, 0, 0, 0, 0, 0, 0), (9, 9, 9, 9))
    assert occ.candidates() == []
    # no candidate windows: the straddle check is vacuously true
    assert sd.minsub_cross((0, 0, 0, 0, 0, 0, 0, 0), (9, 9, 9, 9)) == 1


def test_minsub_recursion_matches_brute_random():
    rng = _rng(21)
    for _ in range(1500):
        n = int(rng.choice([8, 16]))
        width = int(rng.integers(2, 5))
        x = tuple(int(v) for v in rng.integers(0, width, size=n))
        y = tuple(int(v) for v in rng.integers(0, width, size=n // 2))
        assert sd.minsub_recursion_decide(x, y) == sd.minsub_decide(x, y)
        assert sd.minsub_cross(x, y) == sd.minsub_cross_brute(x, y)


def test_rotation_examples():
    # rotations of "aba": start 0 "aba", start 1 "baa", start 2 "aab"
    assert sd.rotation_decide(tuple("aba"), 2) == 1
    assert sd.rotation_decide(tuple("aba"), 0) == 0
    assert sd.rotation_decide(tuple("aba"), 1) == 0


def test_rotation_ties_accepted():
    # periodic input: both minimal starts accepted
    assert sd.rotation_decide(tuple("abab"), 0) == 1
    assert sd.rotation_decide(tuple("abab"), 2) == 1
    assert sd.rotation_decide(tuple("abab"), 1) == 0


def test_suffix_examples():
    assert sd.suffix_decide(tuple("aba"), 2) == 1
    assert sd.suffix_decide(tuple("aba"), 0) == 0


def test_rotation_suffix_match_direct_enumeration():
    rng = _rng(33)
    for _ in range(1200):
        n = int(rng.integers(1, 9))
        x = tuple(int(v) for v in rng.integers(0, 3, size=n))
        i = int(rng.integers(0, n))
        assert sd.rotation_decide(x, i) == sd.rotation_brute(x, i)
        assert sd.suffix_decide(x, i) == sd.suffix_brute(x, i)


# ---------------------------------------------------------------------------
# increasing runs


def test_lis_examples():
    assert sd.lis_decide((3, 1, 2, 4), 3) == 1
    assert sd.lis_decide((3, 1, 2, 4), 4) == 0
    assert sd.lis_decide((STAR, STAR), 1) == 0
    assert sd.min_last((2, STAR, 1, 3), 2) == 3
    assert sd.max_first((2, STAR, 1, 3), 2) == 2
    assert sd.min_last((STAR, STAR, STAR), 1) is None


def test_lis_strictness():
    assert sd.lis_decide((1, 1, 1), 2) == 0
    assert sd.lis_decide((1, 1, 2), 2) == 1


@settings(max_examples=150, deadline=None)
@given(st.lists(st.sampled_from([1, 2, 3, 4, STAR]), min_size=1, max_size=12))
def test_lis_patience_matches_chain_table(vals):
    x = tuple(vals)
    ends = lis_mod._ending_lengths(x)
    assert sd.lis_length(x) == max(ends, default=0)
    for k in (1, 2, 3, 4):
        assert sd.lis_decide(x, k) == int(max(ends, default=0) >= k)


def test_lis_recursion_exhaustive_small():
    symbols = (1, 2, STAR)
    for n in range(1, 7):
        for x in itertools.product(symbols, repeat=n):
            for k in (1, 2, 3):
                assert sd.lis_recursion_holds(x, k)


def test_lis_query_budget():
    x = QueryString(tuple(_rng(1).integers(0, 9, size=40)))
    sd.lis_decide(x, 3)
    assert x.query_count <= 40


def test_classifier_examples():
    x = (2, STAR, 1, 3)
    assert sd.classify_min_last(x, 2, 3) == 0
    assert sd.classify_min_last(x, 2, 5) == -1
    assert sd.classify_min_last(x, 2, 1) == 1
    assert sd.classify_max_first(x, 2, 2) == 0
    assert sd.classify_max_first(x, 2, 0) == 1
    assert sd.classify_max_first(x, 2, 7) == -1


def test_classifier_inconsistent_pair_raises(monkeypatch):
    # an oracle that claims "none at or below, but one strictly below"
    answers = iter([0, 1])
    monkeypatch.setattr(lis_mod, "lis_decide", lambda x, j: next(answers))
    with pytest.raises(sd.OracleInconsistencyError):
        sd.classify_min_last((1, 2), 1, 1)


def test_classifier_agrees_with_exact_values():
    rng = _rng(8)
    for _ in range(300):
        n = int(rng.integers(2, 20))
        raw = rng.integers(-2, 12, size=n)
        x = tuple(int(v) if v > 0 else STAR for v in raw)
        j = int(rng.integers(1, 4))
        exact = sd.min_last(x, j)
        if exact is None:
            continue
        pivot = int(rng.integers(0, 13))
        want = (exact > pivot) - (exact < pivot)
        assert sd.classify_min_last(x, j, pivot) == want


# ---------------------------------------------------------------------------
# common subsequences


def test_kcs_examples():
    assert sd.kcs_decide(tuple("ab"), tuple("ab"), 2) == 1
    assert sd.kcs_decide(tuple("ab"), tuple("ba"), 2) == 0
    assert sd.lcs_length(tuple("ab"), tuple("ba")) == 1


def test_signature_example():
    sig = sd.signature(tuple("ab"), tuple("bc"), 2)
    assert sig.bits == ((0, 0), (1, 0))
    assert sig.row_major() == "0010"


def test_signature_requires_equal_lengths():
    with pytest.raises(ValueError):
        sd.signature((1, 2), (1, 2, 3), 2)


def test_block_bounds_uneven():
    assert sd.block_bounds(10, 3) == [(0, 3), (3, 6), (6, 10)]
    assert [sd.block_of(i, 10, 3) for i in range(10)] == [
        0, 0, 0, 1, 1, 1, 2, 2, 2, 2,
    ]


def test_composite_modes_agree_random():
    rng = _rng(17)
    for _ in range(1500):
        n = int(rng.integers(4, 17))
        width = int(rng.integers(2, 5))
        m = int(rng.integers(2, min(n, 7) + 1))
        x = tuple(int(v) for v in rng.integers(0, width, size=n))
        y = tuple(int(v) for v in rng.integers(0, width, size=n))
        for k in (2, 3):
            assert sd.composite_brute(x, y, k, m) == sd.composite_dp(x, y, k, m)


def test_composite_single_block_pair_only():
    # matches confined to one block pair can never span two
    x = (1, 1, 2, 2)
    y = (1, 1, 3, 3)
    assert sd.composite_decide(x, y, 2, 2) == 0
    assert sd.kcs_decide(x, y, 2) == 1


def test_decompose_check_requires_k_at_least_two():
    with pytest.raises(ValueError):
        sd.kcs_decompose_check((1, 2), (1, 2), 1, 2)


def test_decompose_check_random():
    rng = _rng(23)
    for _ in range(800):
        n = int(rng.integers(7, 25))
        width = int(rng.integers(2, 6))
        x = tuple(int(v) for v in rng.integers(0, width, size=n))
        y = tuple(int(v) for v in rng.integers(0, width, size=n))
        k = int(rng.integers(2, 4))
        assert sd.kcs_decompose_check(x, y, k, 7).equal


# ---------------------------------------------------------------------------
# critical cells


def test_critical_all_ones_two_blocks():
    sig = sd.SubproblemSignature(2, ((1, 1), (1, 1)))
    assert sorted(sd.critical_set(sig)) == [(0, 1), (1, 0)]


def test_max_critical_exhaustive_values():
    assert sd.max_critical(2).value == 3
    assert sd.max_critical(3).value == 5


def test_extremal_construction():
    for m in (3, 5, 7):
        sig = sd.extremal_signature(m)
        assert len(sd.critical_set(sig)) == 2 * m - 1


def test_critical_count_matches_set():
    rng = _rng(2)
    for m in (2, 3, 4, 5):
        for _ in range(50):
            bits = int(rng.integers(0, 1 << (m * m)))
            sig = sd.SubproblemSignature.from_int(bits, m)
            assert sd.critical_count(bits, m) == len(sd.critical_set(sig))


def test_same_slope_cells_never_both_critical():
    rng = _rng(4)
    for _ in range(300):
        m = 5
        bits = int(rng.integers(0, 1 << (m * m)))
        sig = sd.SubproblemSignature.from_int(bits, m)
        crit = sd.critical_set(sig)
        slopes = [i - j for i, j in crit]
        assert len(slopes) == len(set(slopes))
        assert len(crit) <= 2 * m - 1


def test_sampled_ceiling_small():
    rep = sd.max_critical(5, samples=2000, seed=1)
    assert rep.value == 9
    assert rep.violations == 0


# ---------------------------------------------------------------------------
# witness graphs


def test_witness_graph_diagonal_blocks():
    x = y = tuple("aabb")
    graph = sd.witness_graph([(0, 0), (1, 1), (2, 2), (3, 3)], 2, 4, x, y)
    assert graph.total_weight == 4
    assert graph.weight(0, 0) == 2 and graph.weight(1, 1) == 2
    assert graph.leftmost == (0, 0)
    assert graph.leftmost_has_degree_one_endpoint()


def test_witness_graph_single_edge_simple():
    graph = sd.witness_graph([(0, 0), (1, 1)], 2, 4)
    assert graph.is_simple()


def test_witness_validation_errors():
    with pytest.raises(sd.WitnessValidationError, match="strictly increasing"):
        sd.witness_graph([(1, 1), (0, 2)], 2, 4)
    with pytest.raises(sd.WitnessValidationError, match="unequal symbols"):
        sd.witness_graph([(0, 0)], 2, 2, (1, 2), (3, 4))


def test_witness_graph_properties_random():
    rng = _rng(29)
    seen = 0
    for _ in range(250):
        n = int(rng.integers(4, 13))
        width = int(rng.integers(4, 9))
        m = int(rng.integers(2, min(n, 7) + 1))
        k = int(rng.integers(1, 4))
        x = tuple(int(v) for v in rng.integers(0, width, size=n))
        y = tuple(int(v) for v in rng.integers(0, width, size=n))
        for wit in sd.all_witnesses(x, y, k):
            graph = sd.witness_graph(wit, m, n, x, y)
            assert graph.total_weight == k
            seen += 1
    assert seen > 100


def test_all_witnesses_counts():
    wits = sd.all_witnesses((1, 2), (1, 2), 2)
    assert wits == [((0, 0), (1, 1))]
    assert len(sd.all_witnesses((1, 1), (1, 1), 1)) == 4


# ---------------------------------------------------------------------------
# prefix search and cost entries


def test_minimal_p_examples():
    # block 0 of x under m=2 is "abc"; y block 0 is "xbc"
    x = tuple("abcdef")
    y = tuple("bcxxxx")
    assert sd.minimal_p(x, y, 0, 0, 2, 2) == 3
    assert sd.minimal_p_linear(x, y, 0, 0, 2, 2) == 3


def test_minimal_p_absent():
    assert sd.minimal_p(tuple("aaaa"), tuple("zzzz"), 0, 0, 1, 2) is None


def test_minimal_p_single_collision():
    assert sd.minimal_p(tuple("zb"), tuple("bq"), 0, 0, 1, 1) == 2


def test_minimal_p_binary_matches_linear_random():
    rng = _rng(31)
    for _ in range(600):
        n = int(rng.integers(4, 15))
        width = int(rng.integers(2, 5))
        m = int(rng.integers(1, 4))
        x = tuple(int(v) for v in rng.integers(0, width, size=n))
        y = tuple(int(v) for v in rng.integers(0, width, size=n))
        i = int(rng.integers(0, m))
        j = int(rng.integers(0, m))
        k1 = int(rng.integers(1, 3))
        assert sd.minimal_p(x, y, i, j, k1, m) == sd.minimal_p_linear(x, y, i, j, k1, m)


def test_kcs_query_budget():
    x = QueryString(tuple(_rng(3).integers(0, 5, size=30)))
    y = QueryString(tuple(_rng(4).integers(0, 5, size=30)))
    sd.kcs_decide(x, y, 3)
    assert x.query_count <= 30 and y.query_count <= 30


def test_minsub_query_budget():
    x = QueryString(tuple(_rng(5).integers(0, 3, size=16)))
    y = tuple(_rng(6).integers(0, 3, size=8))
    sd.minsub_decide(x, y)
    assert x.query_count <= 16
