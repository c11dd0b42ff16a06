"""The acceptance checks behind both the CLI report and the test gate.

Each criterion function returns rows carrying the computed value, the
expected value or bound, the margin, and a pass flag.  Everything is seeded
and deterministic, so two runs with the same configuration produce
byte-identical reports.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import advsdp, compose, funcore, randsearch, recur
from . import strdnc as sd

DEFAULT_SEED = 42
DEFAULT_TOL = 1e-4


@dataclass
class CriterionRow:
    criterion: str
    anchor: str
    computed: float
    expected: float
    margin: float
    passed: bool


def _row(criterion, anchor, computed, expected, margin, passed) -> CriterionRow:
    return CriterionRow(criterion, anchor, float(computed), float(expected),
                        float(margin), bool(passed))


def _philox(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


# --------------------------------------------------------------------- 1


def adversary_exactness(tol: float = DEFAULT_TOL, time_budget: float = 60.0) -> list[CriterionRow]:
    """Exact adversary values of the n-bit OR family, both directions."""
    rows = []
    start = time.perf_counter()
    for n in range(2, 6):
        target = math.sqrt(n)
        upper = advsdp.adv_value(funcore.or_function(n), tol=tol).upper
        rel = abs(upper - target) / target
        rows.append(_row("adv_exactness", f"or{n}-sdp-value", upper, target,
                         1e-3 - rel, rel <= 1e-3))
        cert = advsdp.adv_lower_certify(funcore.or_function(n), advsdp.or_certificate(n))
        err = abs(cert - target)
        rows.append(_row("adv_exactness", f"or{n}-certificate", cert, target,
                         1e-9 - err, err <= 1e-9))
    elapsed = time.perf_counter() - start
    rows.append(_row("adv_exactness", "runtime-seconds", elapsed, time_budget,
                     time_budget - elapsed, elapsed <= time_budget))
    return rows


# --------------------------------------------------------------------- 2


def composition_sweep(
    trials: int = 100, seed: int = DEFAULT_SEED, tol: float = DEFAULT_TOL,
    time_budget: float = 600.0,
) -> list[CriterionRow]:
    """Random OR/AND pairs: squared-sum bound, value equality, certificates."""
    start = time.perf_counter()
    reports = compose.sweep_or_and(trials, max_arity=2, seed=seed, tol=tol)
    elapsed = time.perf_counter() - start
    worst_bound = min(r.bound_margin for r in reports)
    worst_eq = max(r.equality_gap for r in reports)
    composed_bad = sum(not r.composed_ok for r in reports)
    failures = sum(not r.passed for r in reports)
    return [
        _row("composition_sweep", "or-bound-margin", worst_bound, 0.0,
             worst_bound, worst_bound >= 0),
        _row("composition_sweep", "and-or-equality-gap", worst_eq, 1e-3,
             1e-3 - worst_eq, worst_eq <= 1e-3),
        _row("composition_sweep", "combined-certificates", composed_bad, 0,
             -composed_bad, composed_bad == 0),
        _row("composition_sweep", "failures", failures, 0, -failures, failures == 0),
        _row("composition_sweep", "runtime-seconds", elapsed, time_budget,
             time_budget - elapsed, elapsed <= time_budget),
    ]


# --------------------------------------------------------------------- 3


def switch_sweep(
    trials: int = 50, seed: int = DEFAULT_SEED, tol: float = DEFAULT_TOL
) -> list[CriterionRow]:
    reports = compose.sweep_switch(trials, arity=2, max_values=3, seed=seed, tol=tol)
    worst = min(r.margin for r in reports)
    blocks_bad = sum(not r.blocks_ok for r in reports)
    return [
        _row("switch_sweep", "chain-bound-margin", worst, 0.0, worst, worst >= 0),
        _row("switch_sweep", "block-identities", blocks_bad, 0, -blocks_bad,
             blocks_bad == 0),
    ]


# --------------------------------------------------------------------- 4


def gamma2_facts(
    trials: int = 50, seed: int = DEFAULT_SEED, tol: float = 1e-3
) -> list[CriterionRow]:
    report = compose.gamma2_fact_checks(tol=tol, trials=trials, seed=seed)
    rows = []
    for fact in ("triangle", "hadamard_lower", "hadamard_upper", "direct_sum"):
        sub = [r for r in report.rows if r.fact == fact]
        worst = min(r.margin for r in sub)
        bad = sum(not r.passed for r in sub)
        rows.append(_row("gamma2_facts", fact, worst, 0.0, worst, bad == 0))
    return rows


# --------------------------------------------------------------------- 5


def recurrence_engine(time_budget: float = 1.0) -> list[CriterionRow]:
    start = time.perf_counter()
    rows = []

    case1 = recur.master_solve(recur.RecurrenceSpec(4, 2, 1))
    rows.append(_row("recurrences", "master-case1", case1.case_id, 1,
                     0, case1.case_id == 1 and float(case1.exponent) == 2.0))
    case2 = recur.master_solve(recur.RecurrenceSpec(2, 2, 1, 0, squared=True))
    ok2 = case2.case_id == 2 and case2.same_as(
        recur.BoundClass(Fraction(1, 2), Fraction(1, 2)))
    rows.append(_row("recurrences", "master-case2-squared", float(case2.exponent),
                     0.5, 0, ok2))
    case3 = recur.master_solve(
        recur.RecurrenceSpec(recur.sqrt_of(13), 7, Fraction(2, 3), 2))
    ok3 = case3.case_id == 3 and case3.same_as(
        recur.BoundClass(Fraction(2, 3), 2))
    rows.append(_row("recurrences", "master-case3", float(case3.exponent),
                     2 / 3, 0, ok3))

    headline = recur.headline_bounds(max_k=3)
    bad = [r for r in headline if not r.matches]
    rows.append(_row("recurrences", "headline-classes", len(headline) - len(bad),
                     len(headline), -len(bad), not bad))

    m = recur.min_splitting_factor(Fraction(2, 3))
    rows.append(_row("recurrences", "min-splitting-factor", m, 7, 0, m == 7))

    elapsed = time.perf_counter() - start
    rows.append(_row("recurrences", "runtime-seconds", elapsed, time_budget,
                     time_budget - elapsed, elapsed <= time_budget))
    return rows


# --------------------------------------------------------------------- 6


def decomposition_identities(
    seed: int = DEFAULT_SEED, time_budget: float = 900.0
) -> list[CriterionRow]:
    start = time.perf_counter()
    rows = []

    bad = 0
    total = 0
    for n in range(1, 11):
        for x in itertools.product((0, 1, 2), repeat=n):
            total += 1
            if not sd.regular_recursion_holds(x):
                bad += 1
            if sd.regular_cross(x) != sd.regular_cross_brute(x):
                bad += 1
    rows.append(_row("decompositions", "pattern-split-exhaustive", total - bad,
                     total, -bad, bad == 0))

    rng = _philox(seed)
    bad = 0
    trials = 10_000
    for _ in range(trials):
        n = int(rng.choice([8, 16, 32]))
        width = int(rng.integers(2, 5))
        x = tuple(int(v) for v in rng.integers(0, width, size=n))
        y = tuple(int(v) for v in rng.integers(0, width, size=n // 2))
        if sd.minsub_recursion_decide(x, y) != sd.minsub_decide(x, y):
            bad += 1
    rows.append(_row("decompositions", "window-split-random", trials - bad,
                     trials, -bad, bad == 0))

    bad = 0
    total = 0
    symbols = (1, 2, 3, sd.STAR)
    for n in range(1, 9):
        for x in itertools.product(symbols, repeat=n):
            for k in (1, 2, 3):
                total += 1
                if not sd.lis_recursion_holds(x, k):
                    bad += 1
    rows.append(_row("decompositions", "increasing-split-exhaustive", total - bad,
                     total, -bad, bad == 0))

    bad = 0
    trials = 10_000
    for _ in range(trials):
        n = int(rng.integers(7, 29))
        width = int(rng.integers(2, 7))
        x = tuple(int(v) for v in rng.integers(0, width, size=n))
        y = tuple(int(v) for v in rng.integers(0, width, size=n))
        k = int(rng.integers(2, 4))
        if not sd.kcs_decompose_check(x, y, k, 7).equal:
            bad += 1
    rows.append(_row("decompositions", "common-subseq-case-split", trials - bad,
                     trials, -bad, bad == 0))

    elapsed = time.perf_counter() - start
    rows.append(_row("decompositions", "runtime-seconds", elapsed, time_budget,
                     time_budget - elapsed, elapsed <= time_budget))
    return rows


# --------------------------------------------------------------------- 7


def critical_combinatorics(
    seed: int = DEFAULT_SEED, samples: int = 100_000, time_budget: float = 600.0
) -> list[CriterionRow]:
    start = time.perf_counter()
    rows = []
    for m, expected in ((2, 3), (3, 5), (4, 7)):
        got = sd.max_critical(m).value
        rows.append(_row("critical_cells", f"exhaustive-max-m{m}", got, expected,
                         0, got == expected))
    built = len(sd.critical_set(sd.extremal_signature(5)))
    rows.append(_row("critical_cells", "construction-m5", built, 9, 0, built == 9))
    for m in (5, 6, 7):
        rep = sd.max_critical(m, samples=samples, seed=seed)
        rows.append(_row("critical_cells", f"sampled-ceiling-m{m}", rep.violations,
                         0, -rep.violations, rep.violations == 0))
    elapsed = time.perf_counter() - start
    rows.append(_row("critical_cells", "runtime-seconds", elapsed, time_budget,
                     time_budget - elapsed, elapsed <= time_budget))
    return rows


# --------------------------------------------------------------------- 8


def witness_graph_properties(
    instances: int = 1000, seed: int = DEFAULT_SEED
) -> list[CriterionRow]:
    rng = _philox(seed)
    weight_bad = structure_bad = composite_bad = 0
    witnesses_seen = 0
    for _ in range(instances):
        n = int(rng.integers(4, 13))
        width = int(rng.integers(4, 9))
        m = int(rng.integers(2, min(n, 7) + 1))
        k = int(rng.integers(1, 4))
        x = tuple(int(v) for v in rng.integers(0, width, size=n))
        y = tuple(int(v) for v in rng.integers(0, width, size=n))
        any_multi_edge = False
        for wit in sd.all_witnesses(x, y, k):
            witnesses_seen += 1
            try:
                graph = sd.witness_graph(wit, m, n, x, y)
            except sd.WitnessValidationError:
                structure_bad += 1
                continue
            if graph.total_weight != k:
                weight_bad += 1
            if not graph.is_simple():
                any_multi_edge = True
        # a multi-edge graph exists for some witness iff a composite witness does
        if any_multi_edge != bool(sd.composite_decide(x, y, k, m)):
            composite_bad += 1
    return [
        _row("witness_graphs", "witnesses-seen", witnesses_seen, 1,
             witnesses_seen - 1, witnesses_seen > 0),
        _row("witness_graphs", "total-weight", weight_bad, 0, -weight_bad,
             weight_bad == 0),
        _row("witness_graphs", "leftmost-degree-one", structure_bad, 0,
             -structure_bad, structure_bad == 0),
        _row("witness_graphs", "multi-edge-iff-composite", composite_bad, 0,
             -composite_bad, composite_bad == 0),
    ]


# --------------------------------------------------------------------- 9


def randomized_search_bounds(
    seed: int = DEFAULT_SEED, time_budget: float = 300.0
) -> list[CriterionRow]:
    start = time.perf_counter()
    rows = []

    n, delta, trials = 1000, 0.01, 10_000
    cap = randsearch.rounds_cap(n, delta)
    values = list(range(1, n + 1))
    rng = _philox(seed)
    successes = 0
    over_cap = 0
    for t in range(trials):
        target = int(rng.integers(1, n + 1))
        out = randsearch.randomized_search(values, target, delta, seed=seed + 7 * t + 1)
        successes += out.found
        over_cap += out.iterations > cap
    frac = successes / trials
    rows.append(_row("randomized_search", "success-rate", frac, 1 - delta,
                     frac - (1 - delta), frac >= 1 - delta))
    rows.append(_row("randomized_search", "round-budget", over_cap, 0, -over_cap,
                     over_cap == 0))

    rep = randsearch.shrink_statistic(100, 100_000, seed=seed)
    rows.append(_row("randomized_search", "shrink-ratio", rep.mean_ratio,
                     rep.ratio_bound, rep.ratio_bound - rep.mean_ratio, rep.ratio_ok))
    rows.append(_row("randomized_search", "shrink-tail", sum(not p.ok for p in rep.tails),
                     0, 0, rep.tails_ok))
    exact2 = randsearch.shrink_exact_two()
    rows.append(_row("randomized_search", "exact-two-element", exact2, 1.5,
                     1.5 - exact2, exact2 <= 1.5))

    delta_v = 0.05
    for j in (1, 2, 3):
        agree = 0
        per = 1000
        for t in range(per):
            raw = rng.integers(-3, 60, size=64)
            x = tuple(int(v) if v > 0 else sd.STAR for v in raw)
            exact = sd.min_last(x, j)
            out = randsearch.min_last_via_search(x, j, delta_v, seed=seed + 13 * t + j)
            agree += (out.value == exact)
        frac = agree / per
        rows.append(_row("randomized_search", f"value-retrieval-j{j}", frac,
                         1 - delta_v, frac - (1 - delta_v), frac >= 1 - delta_v))

    elapsed = time.perf_counter() - start
    rows.append(_row("randomized_search", "runtime-seconds", elapsed, time_budget,
                     time_budget - elapsed, elapsed <= time_budget))
    return rows


# --------------------------------------------------------------------- 10


def minsub_agreement(seed: int = DEFAULT_SEED, trials: int = 10_000) -> list[CriterionRow]:
    rng = _philox(seed)
    bad = 0
    for _ in range(trials):
        n = int(rng.choice([8, 16, 32]))
        width = int(rng.integers(2, 5))
        x = tuple(int(v) for v in rng.integers(0, width, size=n))
        y = tuple(int(v) for v in rng.integers(0, width, size=n // 2))
        lhs = sd.minsub_recursion_decide(x, y)
        if lhs != sd.minsub_decide(x, y):
            bad += 1
    return [_row("window_positions", "four-candidate-agreement", trials - bad,
                 trials, -bad, bad == 0)]


# ---------------------------------------------------------------------------


CRITERIA = (
    ("1", adversary_exactness),
    ("2", composition_sweep),
    ("3", switch_sweep),
    ("4", gamma2_facts),
    ("5", recurrence_engine),
    ("6", decomposition_identities),
    ("7", critical_combinatorics),
    ("8", witness_graph_properties),
    ("9", randomized_search_bounds),
    ("10", minsub_agreement),
)


def run_all(seed: int = DEFAULT_SEED, tol: float = DEFAULT_TOL) -> list[CriterionRow]:
    """Every criterion in order; seeds and tolerances are threaded through."""
    rows: list[CriterionRow] = []
    rows += adversary_exactness(tol=tol)
    rows += composition_sweep(seed=seed, tol=tol)
    rows += switch_sweep(seed=seed, tol=tol)
    rows += gamma2_facts(seed=seed)
    rows += recurrence_engine()
    rows += decomposition_identities(seed=seed)
    rows += critical_combinatorics(seed=seed)
    rows += witness_graph_properties(seed=seed)
    rows += randomized_search_bounds(seed=seed)
    rows += minsub_agreement(seed=seed)
    return rows
