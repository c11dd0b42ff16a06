"""Certification of the combining rules for OR/AND and value-switch scenarios.

Each rule is checked two ways where possible: constructively, by assembling
an explicit Gram certificate for the combined function out of certificates
for the parts, and numerically, by solving the optimization for every
function involved and comparing values.  Random sweeps use a fixed seed so
failures reproduce.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from . import advsdp, funcore
from .advsdp import (
    DEFAULT_TOL,
    InvalidCertificateError,
    SingleFamilySolution,
    adv_boolean_vectors,
    adv_value,
    gamma2_filtered,
    gamma2_plain,
    validate_single_family,
)
from .funcore import FiniteFunction

DEFAULT_SEED = 42


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


def random_boolean_function(
    rng: np.random.Generator, arity: int, symbols=(0, 1), nonconstant: bool = False
) -> FiniteFunction:
    """Uniformly random truth table on all of symbols^arity.

    With ``nonconstant`` the two constant tables are redrawn: the AND/OR
    value equality degenerates when a component never changes value, so
    equality sweeps condition on both outputs being attained.
    """
    alphabet = funcore.Alphabet(tuple(symbols))
    domain = tuple(alphabet.strings(arity))
    while True:
        outputs = tuple(int(b) for b in rng.integers(0, 2, size=len(domain)))
        if not nonconstant or len(set(outputs)) > 1:
            return FiniteFunction(alphabet, arity, domain, outputs, (0, 1))


def random_valued_function(
    rng: np.random.Generator, arity: int, n_values: int, symbols=(0, 1)
) -> FiniteFunction:
    alphabet = funcore.Alphabet(tuple(symbols))
    domain = tuple(alphabet.strings(arity))
    outputs = tuple(int(v) for v in rng.integers(0, n_values, size=len(domain)))
    return FiniteFunction(alphabet, arity, domain, outputs, tuple(range(n_values)))


class _AdvCache:
    """Memo for adversary upper values, keyed by the function table."""

    def __init__(self, tol: float):
        self.tol = tol
        self._store: dict = {}

    def upper(self, f: FiniteFunction) -> float:
        key = f.key()
        if key not in self._store:
            self._store[key] = adv_value(f, tol=self.tol).upper
        return self._store[key]


# ---------------------------------------------------------------------------
# Constructive OR composition via the four-row vector table


@dataclass
class ComposedSolution:
    """Certificate for the OR of two functions, assembled from base certificates."""

    function: FiniteFunction
    solution: SingleFamilySolution
    value: float
    base_values: tuple[float, float]

    def validate(self, tol: float = DEFAULT_TOL):
        validate_single_family(self.function, self.solution, tol)


def compose_or_vectors(
    f1: FiniteFunction,
    f2: FiniteFunction,
    sol1: SingleFamilySolution,
    sol2: SingleFamilySolution,
    tol: float = DEFAULT_TOL,
) -> ComposedSolution:
    """Assemble a certificate for f1 OR f2 from one-family certificates.

    Each base certificate is first rescaled so its 1-class weight is 1; the
    combined vector for a coordinate then comes from the first function when
    its half is the deciding one, from the second when not, per output class.
    The combined squared value never exceeds the sum of squared base values.
    """
    validate_single_family(f1, sol1, tol)
    validate_single_family(f2, sol2, tol)
    r1 = sol1.rescaled()
    r2 = sol2.rescaled()
    g = funcore.build_or(f1, f2)
    b1, b2 = f1.bits(), f2.bits()
    d1, d2 = len(f1.domain), len(f2.domain)
    n1, n2 = f1.arity, f2.arity

    # Composed element p = x * d2 + y.  Which copy a coordinate draws from:
    # the first-half vector is dropped only in class (0, 1), the second-half
    # vector is kept only when the first function outputs 0.
    cls1 = np.repeat(b1, d2)
    cls2 = np.tile(b2, d1)
    uses1 = ~((cls1 == 0) & (cls2 == 1))
    uses2 = cls1 == 0
    xmap = np.repeat(np.arange(d1), d2)
    ymap = np.tile(np.arange(d2), d1)

    size = d1 * d2
    blocks = []
    idx1 = np.nonzero(uses1)[0]
    idx2 = np.nonzero(uses2)[0]
    for k in range(n1):
        blk = np.zeros((size, size))
        blk[np.ix_(idx1, idx1)] = r1.blocks[k][np.ix_(xmap[idx1], xmap[idx1])]
        blocks.append(blk)
    for k in range(n2):
        blk = np.zeros((size, size))
        blk[np.ix_(idx2, idx2)] = r2.blocks[k][np.ix_(ymap[idx2], ymap[idx2])]
        blocks.append(blk)

    sol = SingleFamilySolution(blocks, g.bits(), 0.0)
    sol.value = sol.objective()
    composed = ComposedSolution(g, sol, sol.value, (sol1.value, sol2.value))
    composed.validate(tol)
    if sol.value**2 > sol1.value**2 + sol2.value**2 + tol:
        raise InvalidCertificateError(
            f"combined value {sol.value:.6g} exceeds the squared-sum bound"
        )
    return composed


# ---------------------------------------------------------------------------
# Numerical OR/AND verification


@dataclass
class OrAndReport:
    instance: int
    adv_f1: float
    adv_f2: float
    adv_or: float
    adv_and: float
    bound_margin: float  # adv_f1^2 + adv_f2^2 + tol - adv_or^2
    equality_gap: float  # |adv_and - adv_or|
    composed_value: float
    composed_ok: bool
    degenerate: bool  # a component is constant; equality does not apply
    passed: bool


def verify_or_and_bound(
    f1: FiniteFunction,
    f2: FiniteFunction,
    tol: float = DEFAULT_TOL,
    cache: _AdvCache | None = None,
    instance: int = 0,
) -> OrAndReport:
    """Check the squared-sum bound for OR and the AND/OR value equality.

    The equality side needs both components to attain both outputs: with a
    constant component one of the two combinations collapses to a constant
    while the other keeps the live component's value.  Such instances are
    flagged degenerate and only the bound and the constructed certificate
    are required.
    """
    cache = cache or _AdvCache(tol)
    g_or = funcore.build_or(f1, f2)
    g_and = funcore.build_and(f1, f2)
    a1 = cache.upper(f1)
    a2 = cache.upper(f2)
    a_or = cache.upper(g_or)
    a_and = cache.upper(g_and)

    composed = compose_or_vectors(
        f1, f2, adv_boolean_vectors(f1, tol), adv_boolean_vectors(f2, tol), tol
    )
    composed_ok = composed.value**2 <= a1**2 + a2**2 + tol

    bound_margin = a1**2 + a2**2 + tol - a_or**2
    equality_gap = abs(a_and - a_or)
    degenerate = len(set(f1.outputs)) == 1 or len(set(f2.outputs)) == 1
    passed = bound_margin >= 0 and composed_ok and (
        degenerate or equality_gap <= 10.0 * tol
    )
    return OrAndReport(
        instance, a1, a2, a_or, a_and, bound_margin, equality_gap,
        composed.value, composed_ok, degenerate, passed,
    )


def sweep_or_and(
    trials: int,
    max_arity: int = 2,
    seed: int = DEFAULT_SEED,
    tol: float = DEFAULT_TOL,
) -> list[OrAndReport]:
    rng = _rng(seed)
    cache = _AdvCache(tol)
    rows = []
    for t in range(trials):
        n1 = int(rng.integers(1, max_arity + 1))
        n2 = int(rng.integers(1, max_arity + 1))
        f1 = random_boolean_function(rng, n1, nonconstant=True)
        f2 = random_boolean_function(rng, n2, nonconstant=True)
        rows.append(verify_or_and_bound(f1, f2, tol, cache, instance=t))
    return rows


# ---------------------------------------------------------------------------
# Switch scenario: numerical bound and exact block decomposition


@dataclass
class SwitchDecomposition:
    """Per-value blocks of the joint Gram of (selector, switched function)."""

    values: tuple
    order: tuple[int, ...]  # domain indices grouped by selector value
    sizes: tuple[int, ...]
    blocks: dict  # value -> restricted Gram of that branch
    block_masks: dict  # value -> per-coordinate restricted masks
    identities_hold: bool


def switch_block_decompose(f: FiniteFunction, g_family: Mapping) -> SwitchDecomposition:
    """Split the joint Gram by selector value and check the three exact identities.

    Grouping the domain by the selector's value must turn (i) the joint Gram
    of (f, h) into a direct sum of restricted branch Grams, (ii) the
    selector's Gram into a direct sum of all-ones blocks, and (iii) each
    masked selector Gram into the restricted masks.  All comparisons are
    exact on 0/1 matrices.
    """
    h = funcore.build_switch(f, g_family)
    values = f.attained()
    groups = {s: [i for i, x in enumerate(f.domain) if f(x) == s] for s in values}
    order = tuple(i for s in values for i in groups[s])
    sizes = tuple(len(groups[s]) for s in values)
    if sum(sizes) != len(f.domain):
        raise RuntimeError("selector groups do not partition the domain")

    gram_f, masks = funcore.gram_and_masks(f)
    pairs = [(f(x), h(x)) for x in f.domain]
    joint = np.array(
        [[1.0 if pairs[i] == pairs[j] else 0.0 for j in range(len(pairs))] for i in range(len(pairs))]
    )

    blocks = {}
    block_masks = {}
    for s in values:
        idx = np.array(groups[s])
        g = g_family[s]
        outs = np.array([funcore._as_bit(g(f.domain[i])) for i in idx])
        blocks[s] = (outs[:, None] == outs[None, :]).astype(float)
        block_masks[s] = [m[np.ix_(idx, idx)] for m in masks]

    perm = np.array(order)
    ok = True

    def blockdiag(mats):
        total = sum(m.shape[0] for m in mats)
        out = np.zeros((total, total))
        at = 0
        for m in mats:
            k = m.shape[0]
            out[at:at + k, at:at + k] = m
            at += k
        return out

    ok &= np.array_equal(joint[np.ix_(perm, perm)], blockdiag([blocks[s] for s in values]))
    ok &= np.array_equal(
        gram_f[np.ix_(perm, perm)],
        blockdiag([np.ones((b, b)) for b in sizes]),
    )
    for j in range(f.arity):
        ok &= np.array_equal(
            (masks[j] * gram_f)[np.ix_(perm, perm)],
            blockdiag([block_masks[s][j] for s in values]),
        )
    return SwitchDecomposition(values, order, sizes, blocks, block_masks, bool(ok))


@dataclass
class SwitchReport:
    instance: int
    adv_h: float
    selector_term: float  # filtered norm of (J - F_selector)
    max_branch: float
    margin: float
    blocks_ok: bool
    passed: bool


def verify_switch_bound(
    f: FiniteFunction,
    g_family: Mapping,
    tol: float = DEFAULT_TOL,
    cache: _AdvCache | None = None,
    instance: int = 0,
) -> SwitchReport:
    """Check the chain bound: adv(switched) <= selector term + best branch."""
    cache = cache or _AdvCache(tol)
    h = funcore.build_switch(f, g_family)
    adv_h = cache.upper(h)
    gram_f, masks = funcore.gram_and_masks(f)
    target = np.ones_like(gram_f) - gram_f
    if np.any(target):
        selector_term, _ = gamma2_filtered(target, masks, tol=tol)
    else:
        selector_term = 0.0
    max_branch = max(cache.upper(g_family[s]) for s in f.attained())
    margin = selector_term + max_branch + tol - adv_h
    blocks_ok = switch_block_decompose(f, g_family).identities_hold
    return SwitchReport(
        instance, adv_h, selector_term, max_branch, margin, blocks_ok,
        margin >= 0 and blocks_ok,
    )


def sweep_switch(
    trials: int,
    arity: int = 2,
    max_values: int = 3,
    seed: int = DEFAULT_SEED,
    tol: float = DEFAULT_TOL,
) -> list[SwitchReport]:
    rng = _rng(seed)
    cache = _AdvCache(tol)
    rows = []
    for t in range(trials):
        n_values = int(rng.integers(1, max_values + 1))
        f = random_valued_function(rng, arity, n_values)
        g_family = {s: random_boolean_function(rng, arity) for s in range(n_values)}
        rows.append(verify_switch_bound(f, g_family, tol, cache, instance=t))
    return rows


# ---------------------------------------------------------------------------
# Algebraic facts about the filtered norm, checked on random instances


@dataclass
class FactRow:
    fact: str
    instance: int
    lhs: float
    rhs: float
    margin: float
    passed: bool


@dataclass
class FactReport:
    rows: list[FactRow] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    def failures(self) -> list[FactRow]:
        return [r for r in self.rows if not r.passed]


def _random_filters(rng, shape, n):
    """Coefficient matrices bounded away from zero, with random signs."""
    mags = rng.uniform(0.5, 1.5, size=(n, *shape))
    signs = rng.choice([-1.0, 1.0], size=(n, *shape))
    return [mags[j] * signs[j] for j in range(n)]


def gamma2_fact_checks(
    tol: float = 1e-3,
    trials: int = 50,
    seed: int = DEFAULT_SEED,
    dim: int = 4,
    n_filters: int = 2,
    sdp_tol: float = DEFAULT_TOL,
) -> FactReport:
    """Triangle, entrywise-product, and direct-sum rules on random instances."""
    rng = _rng(seed)
    report = FactReport()
    shape = (dim, dim)
    for t in range(trials):
        a = rng.normal(size=shape)
        b = rng.normal(size=shape)
        zs = _random_filters(rng, shape, n_filters)
        ys = _random_filters(rng, shape, n_filters)

        g_a = gamma2_filtered(a, zs, tol=sdp_tol)[0]
        g_b = gamma2_filtered(b, zs, tol=sdp_tol)[0]
        g_ab = gamma2_filtered(a + b, zs, tol=sdp_tol)[0]
        report.rows.append(
            FactRow("triangle", t, g_ab, g_a + g_b, g_a + g_b + tol - g_ab,
                    g_ab <= g_a + g_b + tol)
        )

        zb = [z * b for z in zs]
        g_hprod = gamma2_filtered(a * b, zb, tol=sdp_tol)[0]
        g_a_zb = gamma2_filtered(a, zb, tol=sdp_tol)[0]
        g_b_plain = gamma2_plain(b, tol=sdp_tol)
        lo_ok = g_hprod <= g_a + tol
        hi_ok = g_a <= g_a_zb * g_b_plain + 2 * tol
        report.rows.append(
            FactRow("hadamard_lower", t, g_hprod, g_a, g_a + tol - g_hprod, lo_ok)
        )
        report.rows.append(
            FactRow("hadamard_upper", t, g_a, g_a_zb * g_b_plain,
                    g_a_zb * g_b_plain + 2 * tol - g_a, hi_ok)
        )

        direct = np.zeros((2 * dim, 2 * dim))
        direct[:dim, :dim] = a
        direct[dim:, dim:] = b
        joint_filters = []
        for y, z in zip(ys, zs):
            m = np.zeros((2 * dim, 2 * dim))
            m[:dim, :dim] = y
            m[dim:, dim:] = z
            joint_filters.append(m)
        g_sum = gamma2_filtered(direct, joint_filters, tol=sdp_tol)[0]
        g_ay = gamma2_filtered(a, ys, tol=sdp_tol)[0]
        g_bz = gamma2_filtered(b, zs, tol=sdp_tol)[0]
        expected = max(g_ay, g_bz)
        report.rows.append(
            FactRow("direct_sum", t, g_sum, expected, tol - abs(g_sum - expected),
                    abs(g_sum - expected) <= tol)
        )
    return report
