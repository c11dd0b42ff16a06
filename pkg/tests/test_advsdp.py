import math

import numpy as np
import pytest

from advdc import advsdp, funcore
from advdc.advsdp import (
    InfeasibleProgramError,
    InvalidCertificateError,
    SolverBudgetError,
    adv_boolean_vectors,
    adv_lower_certify,
    adv_value,
    gamma2_filtered,
    gamma2_plain,
    or_certificate,
    spectral_norm,
    validate_single_family,
)
from advdc.funcore import gram_and_masks, or_function, xor_function

TOL = 1e-4


def _target_and_masks(f):
    gram, masks = gram_and_masks(f)
    return np.ones_like(gram) - gram, masks


def test_spectral_norm_identity():
    assert spectral_norm(np.eye(3)) == pytest.approx(1.0, rel=1e-10)


def test_spectral_norm_all_ones():
    assert spectral_norm(np.ones((4, 4))) == pytest.approx(4.0, rel=1e-10)


def test_spectral_norm_permutation():
    assert spectral_norm(np.array([[0.0, 1.0], [1.0, 0.0]])) == pytest.approx(1.0)


def test_spectral_norm_rectangular():
    m = np.array([[3.0, 0.0, 0.0]])
    assert spectral_norm(m) == pytest.approx(3.0, rel=1e-10)


def test_gamma2_zero_target():
    value, sol = gamma2_filtered(np.zeros((3, 3)), [np.ones((3, 3))])
    assert value == 0.0
    assert sol.objective() == 0.0


def test_gamma2_one_bit_identity():
    f = funcore.bit_function(1, 0)
    value, _ = gamma2_filtered(*_target_and_masks(f), tol=TOL)
    assert value == pytest.approx(1.0, abs=1e-6)


def test_gamma2_or2_is_sqrt2():
    value, sol = gamma2_filtered(*_target_and_masks(or_function(2)), tol=TOL)
    assert value == pytest.approx(math.sqrt(2), rel=1e-6)
    target, masks = _target_and_masks(or_function(2))
    sol.validate(target, masks, TOL)


def test_gamma2_infeasible_pair_reported():
    target = np.array([[0.0, 1.0], [1.0, 0.0]])
    filters = [np.array([[1.0, 0.0], [0.0, 1.0]])]
    with pytest.raises(InfeasibleProgramError) as exc:
        gamma2_filtered(target, filters)
    assert exc.value.pair == (0, 1)


def test_gamma2_budget_error_on_impossible_tolerance():
    with pytest.raises(SolverBudgetError):
        gamma2_filtered(*_target_and_masks(or_function(2)), tol=1e-15)


def test_adv_value_or_family():
    for n in (2, 3):
        bracket = adv_value(or_function(n), tol=TOL)
        assert bracket.upper == pytest.approx(math.sqrt(n), rel=1e-4)
        assert bracket.lower == pytest.approx(bracket.upper)


def test_adv_value_constant():
    bracket = adv_value(funcore.constant_function(2, 0))
    assert bracket.lower == bracket.upper == 0.0


def test_adv_value_xor():
    bracket = adv_value(xor_function(2), tol=TOL)
    assert bracket.upper == pytest.approx(2.0, abs=1e-4)
    assert bracket.lower == pytest.approx(2.0, abs=1e-4)


def test_adv_value_cross_check_agrees():
    bracket = adv_value(or_function(2), tol=TOL, cross_check=True)
    assert not bracket.notes["solver_defect"]
    assert bracket.notes["single_family"] == pytest.approx(bracket.upper, abs=1e-3)


def test_certify_or_certificates_exact():
    for n in (2, 3, 4, 5):
        value = adv_lower_certify(or_function(n), or_certificate(n))
        assert abs(value - math.sqrt(n)) <= 1e-9


def test_certify_zero_matrix():
    f = or_function(2)
    assert adv_lower_certify(f, np.zeros((4, 4))) == 0.0


def test_certify_xor_with_output_indicator():
    f = xor_function(2)
    target, _ = _target_and_masks(f)
    assert adv_lower_certify(f, target) == pytest.approx(2.0, rel=1e-10)


def test_certify_parity_hypercube_adjacency():
    # distance-1 pairs: norm n, each masked product a perfect matching
    f = xor_function(3)
    d = len(f.domain)
    gamma = np.zeros((d, d))
    for i, x in enumerate(f.domain):
        for j, y in enumerate(f.domain):
            if sum(a != b for a, b in zip(x, y)) == 1:
                gamma[i, j] = 1.0
    assert adv_lower_certify(f, gamma) == pytest.approx(3.0, rel=1e-10)
    assert adv_value(f, tol=TOL).upper == pytest.approx(3.0, abs=1e-3)


def test_adv_value_and_family_matches_or():
    assert adv_value(funcore.and_function(3), tol=TOL).upper == pytest.approx(
        math.sqrt(3), rel=1e-4
    )


def test_certify_scale_invariance_exact():
    f = or_function(3)
    gamma = or_certificate(3)
    base = adv_lower_certify(f, gamma)
    for c in (1e-6, 0.5, 3.0, 1e6):
        assert adv_lower_certify(f, c * gamma) == pytest.approx(base, rel=1e-12)


def test_certify_rejects_equal_output_support():
    f = or_function(2)
    gamma = np.ones((4, 4))
    with pytest.raises(InvalidCertificateError, match="equal-output"):
        adv_lower_certify(f, gamma)


def test_certify_rejects_asymmetric():
    f = or_function(2)
    gamma = np.zeros((4, 4))
    gamma[0, 1] = 1.0
    with pytest.raises(InvalidCertificateError, match="symmetric"):
        adv_lower_certify(f, gamma)


def test_duality_sandwich_random_certificates():
    rng = np.random.Generator(np.random.Philox(7))
    for f in (or_function(3), funcore.tabulate((0, 1), 3, lambda x: int(sum(x) >= 2), (0, 1))):
        upper = adv_value(f, tol=TOL).upper
        target, _ = _target_and_masks(f)
        d = len(f.domain)
        for _ in range(200):
            raw = rng.normal(size=(d, d))
            gamma = (raw + raw.T) * target  # symmetric, zero on equal outputs
            if not gamma.any():
                continue
            assert adv_lower_certify(f, gamma) <= upper + TOL


def test_monotone_under_restriction():
    rng = np.random.Generator(np.random.Philox(11))
    f = or_function(3)
    full = adv_value(f, tol=TOL).upper
    for _ in range(5):
        keep = sorted(rng.choice(len(f.domain), size=5, replace=False))
        sub = funcore.restrict(f, keep)
        assert adv_value(sub, tol=TOL).upper <= full + TOL


def test_single_family_solution_or2():
    f = or_function(2)
    sol = adv_boolean_vectors(f, tol=TOL)
    assert sol.value == pytest.approx(math.sqrt(2), rel=1e-5)
    validate_single_family(f, sol, TOL)
    a0, a1 = sol.rescaled().class_sums()
    assert a1 == pytest.approx(1.0, rel=1e-9)
    assert a0 == pytest.approx(2.0, rel=1e-4)


def test_single_family_rejects_wrong_function():
    f = or_function(2)
    sol = adv_boolean_vectors(f, tol=TOL)
    with pytest.raises(InvalidCertificateError):
        validate_single_family(xor_function(2), sol, TOL)


def test_gamma2_plain_rank_one():
    # unit-entry rank-one matrix factorizes with unit vectors
    m = np.ones((3, 3))
    assert gamma2_plain(m, tol=TOL) == pytest.approx(1.0, abs=1e-5)


def test_gamma2_rectangular_target():
    value, sol = gamma2_filtered(np.ones((2, 3)), [np.ones((2, 3))], tol=TOL)
    assert value == pytest.approx(1.0, abs=1e-5)
    assert sol.cross([np.ones((2, 3))]).shape == (2, 3)


def test_vector_solution_reports_value_consistent():
    f = or_function(2)
    target, masks = _target_and_masks(f)
    value, sol = gamma2_filtered(target, masks, tol=TOL)
    assert sol.value == pytest.approx(sol.objective())
    assert value == sol.value
    full = sol.full_gram()
    assert full.shape == (2 * 4 * 2, 2 * 4 * 2)
    assert np.allclose(full, full.T)
