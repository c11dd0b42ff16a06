"""Adversary quantities and filtered norms as semidefinite programs.

Two directions are covered: the minimization program over vector families
(solved numerically, returning a positive-semidefinite Gram certificate) and
the maximization side, where an explicit symmetric matrix is validated as a
lower-bound certificate by pure linear algebra.  The two routes are kept
independent so each can check the other.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import cvxpy as cp
import numpy as np

from . import funcore
from .funcore import FiniteFunction, SDP_SIZE_CAP

DEFAULT_TOL = 1e-4
DEFAULT_BUDGET = 100_000

# Interior point for small blocks (high accuracy), first-order otherwise.
_IP_BLOCK_LIMIT = 26


class InfeasibleProgramError(ValueError):
    """Constraint demands a nonzero value through an all-zero filter."""

    def __init__(self, pair, value):
        self.pair = pair
        self.value = value
        super().__init__(
            f"infeasible at pair {pair}: target {value} but every filter entry is 0"
        )


class SolverBudgetError(RuntimeError):
    """Solver stopped before reaching the requested tolerance."""

    def __init__(self, message, lower=None, upper=None):
        self.lower = lower
        self.upper = upper
        super().__init__(message)


class InvalidCertificateError(ValueError):
    """Candidate adversary matrix violates the certificate conditions."""


def spectral_norm(m) -> float:
    """Largest singular value, via the symmetric dilation [[0, M], [M^T, 0]]."""
    m = np.atleast_2d(np.asarray(m, dtype=float))
    if m.size == 0:
        return 0.0
    d1, d2 = m.shape
    dil = np.zeros((d1 + d2, d1 + d2))
    dil[:d1, d1:] = m
    dil[d1:, :d1] = m.T
    return float(np.max(np.abs(np.linalg.eigvalsh(dil))))


# ---------------------------------------------------------------------------
# Vector solutions (Gram certificates for the minimization programs)


@dataclass
class VectorSolution:
    """Gram certificate for the two-family filtered-norm program.

    ``blocks[j]`` is the PSD Gram of all vectors carrying coordinate j, laid
    out with the d1 row-side vectors first and the d2 column-side vectors
    after.  Cross-coordinate inner products never enter the program, so the
    joint Gram is block-diagonal over coordinates without loss of generality.
    """

    blocks: list[np.ndarray]
    d1: int
    d2: int
    value: float

    @property
    def coordinates(self) -> int:
        return len(self.blocks)

    def full_gram(self) -> np.ndarray:
        """Materialize the joint Gram (coordinate-major block diagonal)."""
        size = (self.d1 + self.d2) * len(self.blocks)
        out = np.zeros((size, size))
        w = self.d1 + self.d2
        for j, b in enumerate(self.blocks):
            out[j * w:(j + 1) * w, j * w:(j + 1) * w] = b
        return out

    def row_norms_sq(self) -> np.ndarray:
        return sum(np.diag(b)[: self.d1] for b in self.blocks)

    def col_norms_sq(self) -> np.ndarray:
        return sum(np.diag(b)[self.d1:] for b in self.blocks)

    def objective(self) -> float:
        return float(max(self.row_norms_sq().max(), self.col_norms_sq().max()))

    def cross(self, filters: list[np.ndarray]) -> np.ndarray:
        """Filtered sum of cross inner products, one entry per (x, y) pair."""
        return sum(
            z * b[: self.d1, self.d1:] for z, b in zip(filters, self.blocks)
        )

    def residuals(self, target: np.ndarray, filters: list[np.ndarray]) -> np.ndarray:
        return np.abs(self.cross(filters) - target)

    def min_eigenvalue(self) -> float:
        return min(float(np.linalg.eigvalsh(b)[0]) for b in self.blocks)

    def validate(self, target: np.ndarray, filters: list[np.ndarray], tol: float = DEFAULT_TOL):
        """Raise unless the certificate is feasible and self-consistent."""
        res = self.residuals(target, filters)
        allowed = tol * (1.0 + np.abs(target))
        if np.any(res > allowed):
            x, y = np.unravel_index(int(np.argmax(res - allowed)), res.shape)
            raise InvalidCertificateError(
                f"constraint residual {res[x, y]:.3g} at pair ({x}, {y}) exceeds tolerance"
            )
        trace = max(sum(float(np.trace(b)) for b in self.blocks), 1.0)
        if self.min_eigenvalue() < -tol * trace:
            raise InvalidCertificateError("Gram matrix is not PSD within tolerance")
        if abs(self.objective() - self.value) > tol * (1.0 + abs(self.value)):
            raise InvalidCertificateError("stored value disagrees with recomputed objective")


@dataclass
class SingleFamilySolution:
    """Gram certificate for the one-family Boolean program.

    ``blocks[j]`` is the PSD Gram over all inputs for coordinate j; ``bits``
    are the function's outputs.  The objective is sqrt(A0 * A1) with A_b the
    largest per-input weight inside output class b.
    """

    blocks: list[np.ndarray]
    bits: np.ndarray
    value: float

    def weights(self) -> np.ndarray:
        return sum(np.diag(b) for b in self.blocks)

    def class_sums(self) -> tuple[float, float]:
        w = self.weights()
        a0 = float(w[self.bits == 0].max()) if np.any(self.bits == 0) else 0.0
        a1 = float(w[self.bits == 1].max()) if np.any(self.bits == 1) else 0.0
        return a0, a1

    def objective(self) -> float:
        a0, a1 = self.class_sums()
        return float(np.sqrt(a0 * a1))

    def rescaled(self) -> "SingleFamilySolution":
        """Scale the two classes so the 1-class weight becomes exactly 1."""
        a0, a1 = self.class_sums()
        if a1 <= 0:
            return self
        scale = np.where(self.bits == 0, a1, 1.0 / a1)
        blocks = [b * np.sqrt(np.outer(scale, scale)) for b in self.blocks]
        return SingleFamilySolution(blocks, self.bits, self.value)

    def cross(self, masks: list[np.ndarray]) -> np.ndarray:
        return sum(z * b for z, b in zip(masks, self.blocks))

    def min_eigenvalue(self) -> float:
        return min(float(np.linalg.eigvalsh(b)[0]) for b in self.blocks)


def validate_single_family(f: FiniteFunction, sol: SingleFamilySolution, tol: float = DEFAULT_TOL):
    """Check a one-family certificate against f's constraints; raise if bad."""
    gram, masks = funcore.gram_and_masks(f)
    diff = gram == 0
    np.fill_diagonal(diff, False)
    if len(sol.blocks) != f.arity or sol.blocks[0].shape != gram.shape:
        raise InvalidCertificateError("certificate shape does not match the function")
    cross = sol.cross(masks)
    bad = diff & (np.abs(cross - 1.0) > tol * 2.0)
    if np.any(bad):
        x, y = np.argwhere(bad)[0]
        raise InvalidCertificateError(
            f"pair ({x}, {y}) sums to {cross[x, y]:.6g} instead of 1"
        )
    trace = max(sum(float(np.trace(b)) for b in sol.blocks), 1.0)
    if sol.min_eigenvalue() < -tol * trace:
        raise InvalidCertificateError("Gram matrix is not PSD within tolerance")
    if abs(sol.objective() - sol.value) > tol * (1.0 + abs(sol.value)):
        raise InvalidCertificateError("stored value disagrees with recomputed objective")


# ---------------------------------------------------------------------------
# Solver plumbing


def _solve(problem: cp.Problem, block_size: int, tol: float, budget: int) -> str:
    """Solve with the policy solver; return the terminal status string."""
    if block_size <= _IP_BLOCK_LIMIT:
        problem.solve(solver="CLARABEL", max_iter=min(budget, 500))
    else:
        eps = min(1e-6, max(tol * 1e-2, 1e-9))
        problem.solve(solver="SCS", eps_abs=eps, eps_rel=eps, max_iters=budget)
    return problem.status


def _finish(problem, status, make_solution, target, filters, tol):
    """Extract and validate a solution, or raise a budget error."""
    if status in (cp.INFEASIBLE, cp.UNBOUNDED):
        raise SolverBudgetError(f"solver reports {status}")
    if problem.value is None:
        raise SolverBudgetError("solver returned no value")
    sol = make_solution()
    try:
        sol.validate(target, filters, tol)
    except InvalidCertificateError as exc:
        raise SolverBudgetError(
            f"budget exhausted before tolerance was met ({exc})",
            lower=None,
            upper=sol.objective(),
        ) from exc
    return sol


def gamma2_filtered(
    target,
    filters,
    tol: float = DEFAULT_TOL,
    budget: int = DEFAULT_BUDGET,
) -> tuple[float, VectorSolution]:
    """Filtered norm of ``target`` with respect to the coefficient ``filters``.

    Minimizes the larger of the two per-side vector weights subject to, for
    every pair (x, y), the filter-weighted inner products across coordinates
    summing to ``target[x, y]``.  Pairs whose filter entries all vanish only
    admit a zero target; anything else is reported infeasible before solving.
    """
    target = np.atleast_2d(np.asarray(target, dtype=float))
    filters = [np.atleast_2d(np.asarray(z, dtype=float)) for z in filters]
    if not filters:
        raise ValueError("need at least one filter matrix")
    for z in filters:
        if z.shape != target.shape:
            raise ValueError("filter shape differs from target shape")
    d1, d2 = target.shape
    n = len(filters)
    if max(d1, d2) * n > SDP_SIZE_CAP:
        raise funcore.SizeCapError(f"program dimension {max(d1, d2) * n} exceeds cap")

    reachable = np.zeros_like(target, dtype=bool)
    for z in filters:
        reachable |= z != 0
    dead = (~reachable) & (target != 0)
    if np.any(dead):
        x, y = np.argwhere(dead)[0]
        raise InfeasibleProgramError((int(x), int(y)), float(target[x, y]))

    if not np.any(target):
        zero = [np.zeros((d1 + d2, d1 + d2)) for _ in range(n)]
        return 0.0, VectorSolution(zero, d1, d2, 0.0)

    blocks = [cp.Variable((d1 + d2, d1 + d2), PSD=True) for _ in range(n)]
    t = cp.Variable()
    cross = sum(cp.multiply(z, b[:d1, d1:]) for z, b in zip(filters, blocks))
    constraints = [
        cross == target,
        sum(cp.diag(b)[:d1] for b in blocks) <= t,
        sum(cp.diag(b)[d1:] for b in blocks) <= t,
    ]
    problem = cp.Problem(cp.Minimize(t), constraints)
    status = _solve(problem, d1 + d2, tol, budget)

    def make():
        mats = [0.5 * (np.asarray(b.value) + np.asarray(b.value).T) for b in blocks]
        sol = VectorSolution(mats, d1, d2, 0.0)
        sol.value = sol.objective()
        return sol

    sol = _finish(problem, status, make, target, filters, tol)
    return sol.value, sol


def gamma2_plain(matrix, tol: float = DEFAULT_TOL, budget: int = DEFAULT_BUDGET) -> float:
    """Unfiltered factorization norm: the filtered program with one all-ones filter."""
    matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
    value, _ = gamma2_filtered(matrix, [np.ones_like(matrix)], tol=tol, budget=budget)
    return value


def adv_boolean_vectors(
    f: FiniteFunction, tol: float = DEFAULT_TOL, budget: int = DEFAULT_BUDGET
) -> SingleFamilySolution:
    """One-family program for Boolean f: constraints only on output-differing pairs.

    The class rescaling freedom makes balancing both classes optimal, so the
    solved objective is the plain max weight; the reported value is the
    sqrt(A0 * A1) form, which is invariant under that rescaling.
    """
    if not f.is_boolean():
        raise ValueError("one-family program needs a Boolean function")
    f.require_sdp_cap()
    gram, masks = funcore.gram_and_masks(f)
    bits = f.bits()
    d = len(f.domain)
    n = f.arity
    diff = gram == 0
    np.fill_diagonal(diff, False)
    if not np.any(diff):
        zero = [np.zeros((d, d)) for _ in range(n)]
        return SingleFamilySolution(zero, bits, 0.0)

    blocks = [cp.Variable((d, d), PSD=True) for _ in range(n)]
    t = cp.Variable()
    cross = sum(cp.multiply(z, b) for z, b in zip(masks, blocks))
    constraints = [
        cross[diff] == 1.0,
        sum(cp.diag(b) for b in blocks) <= t,
    ]
    problem = cp.Problem(cp.Minimize(t), constraints)
    status = _solve(problem, d, tol, budget)
    if status in (cp.INFEASIBLE, cp.UNBOUNDED) or problem.value is None:
        raise SolverBudgetError(f"solver reports {status}")
    mats = [0.5 * (np.asarray(b.value) + np.asarray(b.value).T) for b in blocks]
    sol = SingleFamilySolution(mats, bits, 0.0)
    sol.value = sol.objective()
    validate_single_family(f, sol, tol)
    return sol


# ---------------------------------------------------------------------------
# Adversary value bracket and certificates


@dataclass
class AdvBracket:
    """Two-sided bracket on the adversary value, with method notes."""

    lower: float
    upper: float
    notes: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.lower > self.upper + 1e-9:
            raise ValueError("bracket lower bound exceeds upper bound")


def adv_value(
    f: FiniteFunction,
    tol: float = DEFAULT_TOL,
    budget: int = DEFAULT_BUDGET,
    cross_check: bool = False,
) -> AdvBracket:
    """Bracket the adversary value through the filtered-norm program.

    The filtered norm of (J - F) against the difference masks sits between
    the adversary value and 2(1 - 1/|E|) times it; with two attained outputs
    the factor is 1 and the bracket collapses.  ``cross_check`` additionally
    solves the one-family Boolean program and records both values; a gap
    beyond 10*tol is flagged as a solver defect in the notes.
    """
    f.require_sdp_cap()
    gram, masks = funcore.gram_and_masks(f)
    target = np.ones_like(gram) - gram
    notes: dict = {}
    if not np.any(target):
        return AdvBracket(0.0, 0.0, {"constant": True})
    value, sol = gamma2_filtered(target, masks, tol=tol, budget=budget)
    n_out = len(f.attained())
    factor = 2.0 * (1.0 - 1.0 / n_out) if n_out > 1 else 1.0
    lower = value / factor if factor > 0 else 0.0
    notes["gamma2"] = value
    notes["outputs"] = n_out
    if cross_check and f.is_boolean():
        single = adv_boolean_vectors(f, tol=tol, budget=budget)
        notes["single_family"] = single.value
        notes["solver_defect"] = abs(single.value - value) > 10.0 * tol * (1.0 + value)
    return AdvBracket(lower, value, notes)


def adv_lower_certify(f: FiniteFunction, gamma, tol: float = DEFAULT_TOL) -> float:
    """Value certified by an explicit adversary matrix: ||G|| / max_j ||G o D_j||.

    The ratio is scale invariant, so any symmetric matrix vanishing on
    equal-output pairs certifies this much.  A nonzero matrix whose every
    masked product vanishes has no finite normalization and is rejected.
    """
    gamma = np.atleast_2d(np.asarray(gamma, dtype=float))
    d = len(f.domain)
    if gamma.shape != (d, d):
        raise InvalidCertificateError(f"certificate must be {d}x{d}")
    scale = max(float(np.abs(gamma).max()), 1.0)
    if np.abs(gamma - gamma.T).max() > tol * scale:
        raise InvalidCertificateError("certificate matrix is not symmetric")
    gram, masks = funcore.gram_and_masks(f)
    offending = np.argwhere((gram != 0) & (np.abs(gamma) > tol * scale))
    if len(offending):
        pairs = [tuple(map(int, p)) for p in offending[:5]]
        raise InvalidCertificateError(
            f"certificate is nonzero on equal-output pairs {pairs}"
        )
    num = spectral_norm(gamma)
    if num == 0.0:
        return 0.0
    den = max(spectral_norm(gamma * z) for z in masks)
    if den <= 1e-300:
        raise InvalidCertificateError(
            "all masked products vanish; certificate has no finite normalization"
        )
    return num / den


def or_certificate(n: int) -> np.ndarray:
    """The standard optimal certificate for the n-bit OR table.

    Ones between the all-zero input and each weight-one input: the norm is
    sqrt(n) while each masked product is a single symmetric pair of norm 1.
    """
    f = funcore.or_function(n)
    d = len(f.domain)
    gamma = np.zeros((d, d))
    zero_idx = f.domain.index(tuple([0] * n))
    for j in range(n):
        e = tuple(1 if i == j else 0 for i in range(n))
        k = f.domain.index(e)
        gamma[zero_idx, k] = 1.0
        gamma[k, zero_idx] = 1.0
    return gamma
