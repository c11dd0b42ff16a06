import math

import numpy as np
import pytest

from advdc import advsdp, compose, funcore
from advdc.advsdp import adv_boolean_vectors, adv_value, validate_single_family
from advdc.compose import (
    compose_or_vectors,
    gamma2_fact_checks,
    random_boolean_function,
    sweep_or_and,
    sweep_switch,
    switch_block_decompose,
    verify_or_and_bound,
    verify_switch_bound,
)
from advdc.funcore import (
    bit_function,
    build_and,
    build_or,
    build_shared_and,
    constant_function,
    negate,
    or_function,
    xor_function,
)

TOL = 1e-4


def test_compose_or2_pair_reaches_two():
    f = or_function(2)
    sol = adv_boolean_vectors(f, TOL)
    composed = compose_or_vectors(f, f, sol, sol, TOL)
    assert composed.value == pytest.approx(2.0, abs=1e-3)
    assert composed.value**2 <= sol.value**2 + sol.value**2 + TOL
    # the assembled certificate is feasible for the product function
    validate_single_family(composed.function, composed.solution, TOL)


def test_compose_identities_reach_sqrt2():
    ident = bit_function(1, 0)
    sol = adv_boolean_vectors(ident, TOL)
    composed = compose_or_vectors(ident, ident, sol, sol, TOL)
    assert composed.value <= math.sqrt(2) + 1e-4


def test_compose_with_constant_keeps_live_value():
    const = constant_function(1, 0)
    f = or_function(2)
    sol_c = adv_boolean_vectors(const, TOL)
    sol_f = adv_boolean_vectors(f, TOL)
    composed = compose_or_vectors(const, f, sol_c, sol_f, TOL)
    assert composed.value == pytest.approx(sol_f.value, rel=1e-6)


def test_compose_with_constant_true_collapses():
    # OR with an always-true side is constant, so the combined value is zero
    const = constant_function(1, 1)
    f = or_function(2)
    composed = compose_or_vectors(
        const, f, adv_boolean_vectors(const, TOL), adv_boolean_vectors(f, TOL), TOL
    )
    assert composed.value == 0.0


def test_verify_or_and_identity_pair():
    ident = bit_function(1, 0)
    report = verify_or_and_bound(ident, ident, TOL)
    assert report.passed
    assert report.adv_or == pytest.approx(math.sqrt(2), abs=1e-4)
    assert report.equality_gap <= 1e-3


def test_verify_or_and_constant_flagged_degenerate():
    report = verify_or_and_bound(constant_function(1, 1), or_function(2), TOL)
    assert report.degenerate
    assert report.passed  # bound and certificate still hold
    assert report.bound_margin >= 0


def test_sweep_or_and_small():
    rows = sweep_or_and(8, seed=3, tol=TOL)
    assert all(r.passed for r in rows)
    assert all(not r.degenerate for r in rows)


def test_de_morgan_consistency():
    rng = np.random.Generator(np.random.Philox(5))
    for _ in range(3):
        f1 = random_boolean_function(rng, 2, nonconstant=True)
        f2 = random_boolean_function(rng, 1, nonconstant=True)
        a_and = adv_value(build_and(f1, f2), tol=TOL).upper
        a_dual = adv_value(
            negate(build_or(negate(f1), negate(f2))), tol=TOL
        ).upper
        assert a_and == pytest.approx(a_dual, abs=1e-3)


def test_shared_variable_corollary():
    rng = np.random.Generator(np.random.Philox(9))
    for _ in range(5):
        f1 = random_boolean_function(rng, 2)
        f2 = random_boolean_function(rng, 2)
        h = build_shared_and(f1, f2)
        a_h = adv_value(h, tol=TOL).upper
        a1 = adv_value(f1, tol=TOL).upper
        a2 = adv_value(f2, tol=TOL).upper
        assert a_h <= math.sqrt(a1**2 + a2**2) + TOL


def test_switch_xor_chain_equality():
    f = bit_function(2, 0)
    g0 = bit_function(2, 1)
    report = verify_switch_bound(f, {0: g0, 1: negate(g0)}, TOL)
    assert report.passed
    assert report.adv_h == pytest.approx(2.0, abs=1e-3)
    assert report.selector_term == pytest.approx(1.0, abs=1e-3)
    assert report.max_branch == pytest.approx(1.0, abs=1e-3)


def test_switch_constant_selector_reduces_to_branch():
    f = constant_function(2, 0)
    g = xor_function(2)
    report = verify_switch_bound(f, {0: g}, TOL)
    assert report.passed
    assert report.selector_term == 0.0
    assert report.adv_h == pytest.approx(report.max_branch, abs=1e-3)


def test_sweep_switch_small():
    rows = sweep_switch(10, seed=4, tol=TOL)
    assert all(r.passed for r in rows)


def test_block_decompose_first_bit():
    f = bit_function(2, 0)
    g0 = bit_function(2, 1)
    dec = switch_block_decompose(f, {0: g0, 1: negate(g0)})
    assert dec.sizes == (2, 2)
    assert dec.identities_hold


def test_block_decompose_constant_selector_single_block():
    f = constant_function(2, 1)
    dec = switch_block_decompose(f, {1: xor_function(2)})
    assert dec.sizes == (4,)
    assert dec.identities_hold


def test_block_decompose_xor_selector_pairs_inputs():
    f = xor_function(2)
    g = {0: constant_function(2, 0), 1: constant_function(2, 1)}
    dec = switch_block_decompose(f, g)
    assert dec.sizes == (2, 2)
    groups = [
        [f.domain[i] for i in dec.order[:2]],
        [f.domain[i] for i in dec.order[2:]],
    ]
    assert {tuple(groups[0]), tuple(groups[1])} == {
        (((0, 0)), ((1, 1))), (((0, 1)), ((1, 0))),
    }
    assert dec.identities_hold


def test_gamma2_fact_checks_seeded():
    report = gamma2_fact_checks(tol=1e-3, trials=5, seed=7)
    assert report.passed
    facts = {r.fact for r in report.rows}
    assert facts == {"triangle", "hadamard_lower", "hadamard_upper", "direct_sum"}


def test_fact_checks_zero_matrices_trivial():
    # zero targets give value zero on both sides of every rule
    z = np.zeros((3, 3))
    filters = [np.ones((3, 3)), np.ones((3, 3))]
    va, _ = advsdp.gamma2_filtered(z, filters)
    assert va == 0.0


def test_direct_sum_of_or2_targets_gives_sqrt2():
    gram, masks = funcore.gram_and_masks(or_function(2))
    target = np.ones_like(gram) - gram
    double = np.zeros((8, 8))
    double[:4, :4] = target
    double[4:, 4:] = target
    joint = []
    for m in masks:
        mm = np.zeros((8, 8))
        mm[:4, :4] = m
        mm[4:, 4:] = m
        joint.append(mm)
    value, _ = advsdp.gamma2_filtered(double, joint, tol=TOL)
    assert value == pytest.approx(math.sqrt(2), abs=1e-4)
