"""Divide-and-conquer recurrence solving on symbolic asymptotic classes.

A recurrence A(n) = a A(n/b) + O(n^c log^p n) is classified into one of the
three standard cases by comparing log_b(a) against c.  Classes are pure
(exponent, log-power) pairs; no numeric n is ever plugged in.  Comparisons
are exact whenever the inputs are rational powers, so razor-edge parameter
choices (like the smallest usable splitting factor) are decided without
floating-point doubt.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

NEAR_BOUNDARY = 1e-9
FLOAT_TIE = 1e-12


class UnsupportedFormError(ValueError):
    """Recurrence shape outside what the solver handles."""


class SplitFactorNotFound(ValueError):
    """No splitting factor below the target exponent within the search cap."""


@dataclass(frozen=True)
class Power:
    """Exact positive real of the form base**exponent with rational parts."""

    base: Fraction
    exponent: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "base", Fraction(self.base))
        object.__setattr__(self, "exponent", Fraction(self.exponent))
        if self.base <= 0:
            raise ValueError("base must be positive")

    def value(self) -> float:
        return float(self.base) ** float(self.exponent)

    def __repr__(self):
        if self.exponent == 1:
            return f"{self.base}"
        if self.exponent == Fraction(1, 2):
            return f"sqrt({self.base})"
        return f"{self.base}^({self.exponent})"


def sqrt_of(x) -> Power:
    return Power(Fraction(x), Fraction(1, 2))


def _as_power(x) -> Power | None:
    """Exact representation if one is available, else None."""
    if isinstance(x, Power):
        return x
    if isinstance(x, (int, Fraction)):
        return Power(Fraction(x))
    return None


def _as_fraction(x) -> Fraction | None:
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, Power):
        if x.exponent.denominator == 1:
            return x.base ** x.exponent.numerator
        return None
    return None


def _float(x) -> float:
    return x.value() if isinstance(x, Power) else float(x)


_EXACT_BIT_LIMIT = 1_000_000  # bits of integer work allowed per comparison


def _compare_powers(p: Power, q: Power) -> int | None:
    """Exact sign of p - q for positive rational powers.

    Returns None when clearing denominators would need astronomically large
    integers (a rational exponent like 2/3 is cheap; one parsed from a long
    decimal is not); callers then fall back to floats.
    """
    if p.exponent == 0 or p.base == 1:
        pe, pb = Fraction(0), Fraction(1)
    else:
        pe, pb = p.exponent, p.base
    if q.exponent == 0 or q.base == 1:
        qe, qb = Fraction(0), Fraction(1)
    else:
        qe, qb = q.exponent, q.base
    # Raise both sides to a positive common power that clears denominators.
    scale = math.lcm(pe.denominator, qe.denominator)

    def bits(base: Fraction, expo: Fraction) -> float:
        mag = max(base.numerator, base.denominator)
        return abs(float(expo * scale)) * mag.bit_length()

    if bits(pb, pe) > _EXACT_BIT_LIMIT or bits(qb, qe) > _EXACT_BIT_LIMIT:
        return None
    lhs = pb ** int(pe * scale)
    rhs = qb ** int(qe * scale)
    return (lhs > rhs) - (lhs < rhs)


def compare_log(a, b, c) -> int:
    """Sign of log_b(a) - c, exact when all inputs are rational powers.

    Requires b > 1.  Falls back to floats with a 1e-12 tie band otherwise,
    warning when the comparison is within 1e-9 of the boundary.
    """
    pa, pb = _as_power(a), _as_power(b)
    fc = _as_fraction(c)
    if pa is not None and pb is not None and fc is not None:
        if pb.value() <= 1:
            raise ValueError("shrink factor must exceed 1")
        # log_b(a) vs c  <=>  a vs b^c for b > 1.
        sign = _compare_powers(pa, Power(pb.base, pb.exponent * fc))
        if sign is not None:
            return sign
    av, bv, cv = _float(a), _float(b), float(c)
    if bv <= 1:
        raise ValueError("shrink factor must exceed 1")
    diff = math.log(av) / math.log(bv) - cv
    if abs(diff) <= NEAR_BOUNDARY:
        warnings.warn(
            f"log_b(a) - c = {diff:.3e} is near the case boundary", stacklevel=2
        )
    if abs(diff) <= FLOAT_TIE:
        return 0
    return 1 if diff > 0 else -1


def _exact_log(a, b) -> Fraction | None:
    """log_b(a) as an exact rational, when that can be verified."""
    pa, pb = _as_power(a), _as_power(b)
    if pa is None or pb is None:
        return None
    if pa.base == 1 or pa.exponent == 0:
        return Fraction(0)
    try:
        guess = Fraction(
            math.log(float(pa.base)) * float(pa.exponent)
            / (math.log(float(pb.base)) * float(pb.exponent))
        ).limit_denominator(128)
    except (ValueError, ZeroDivisionError):
        return None
    if _compare_powers(pa, Power(pb.base, pb.exponent * guess)) == 0:
        return guess
    return None


def _half(x):
    if isinstance(x, Fraction):
        return x / 2
    if isinstance(x, int):
        return Fraction(x, 2)
    return x / 2.0


def _numeric(x):
    return float(x) if not isinstance(x, (int, Fraction)) else x


@dataclass(frozen=True)
class BoundClass:
    """An asymptotic class n^exponent * log^log_power(n).

    ``tilde`` marks an unspecified polylog factor; such classes compare
    equal on the exponent alone.
    """

    exponent: object  # Fraction when exactly known, else float
    log_power: object = Fraction(0)
    tilde: bool = False
    case_id: int | None = None

    def describe(self) -> str:
        e = self.exponent
        p = self.log_power
        head = "O~" if self.tilde else "O"
        parts = []
        if e != 0:
            parts.append(f"n^{e}")
        if not self.tilde and p != 0:
            parts.append(f"log^{p} n" if p != 1 else "log n")
        if not parts:
            parts = ["1"]
        return f"{head}({' '.join(parts)})"

    def same_as(self, other: "BoundClass", tol: float = 1e-12) -> bool:
        if self.tilde != other.tilde:
            return False
        if abs(float(self.exponent) - float(other.exponent)) > tol:
            return False
        if self.tilde:
            return True
        return abs(float(self.log_power) - float(other.log_power)) <= tol


def master_solve(spec: "RecurrenceSpec") -> BoundClass:
    """Classify A(n) = a A(n/b) + O(n^c log^p n) into its asymptotic class.

    With the ``squared`` flag the recurrence describes the square of the
    quantity of interest and the returned class is the square root (halved
    exponent and log power).
    """
    spec.check()
    cmp = compare_log(spec.a, spec.b, spec.c)
    if cmp > 0:
        exact = _exact_log(spec.a, spec.b)
        exponent = exact if exact is not None else (
            math.log(_float(spec.a)) / math.log(_float(spec.b))
        )
        out = BoundClass(exponent, Fraction(0), tilde=False, case_id=1)
    elif cmp == 0:
        if spec.aux_tilde:
            out = BoundClass(_numeric(spec.c), Fraction(0), tilde=True, case_id=2)
        else:
            out = BoundClass(_numeric(spec.c), _numeric(spec.p) + 1, tilde=False, case_id=2)
    else:
        out = BoundClass(
            _numeric(spec.c), _numeric(spec.p), tilde=spec.aux_tilde, case_id=3
        )
    if spec.squared:
        out = BoundClass(_half(out.exponent), _half(out.log_power), out.tilde, out.case_id)
    return out


@dataclass(frozen=True)
class RecurrenceSpec:
    """Parameters of A(n) = a A(n/b) + O(n^c log^p n)."""

    a: object  # branch weight, real > 0 (non-integers allowed)
    b: object  # shrink factor, real > 1
    c: object  # auxiliary exponent >= 0
    p: object = Fraction(0)  # auxiliary log power >= 0
    squared: bool = False  # recurrence is on the squared quantity
    aux_tilde: bool = False  # auxiliary carries an unspecified polylog

    def check(self):
        if _float(self.a) <= 0:
            raise ValueError("branch weight must be positive")
        if _float(self.b) <= 1:
            raise ValueError("shrink factor must exceed 1")
        if float(self.c) < 0 or float(self.p) < 0:
            raise ValueError("auxiliary exponents must be nonnegative")


def strategy1_bound(
    branch_shrinks: Sequence, aux: BoundClass | None
) -> BoundClass:
    """Parallel split: squared values add across branches plus the auxiliary cost.

    All branches must shrink by the same factor (self-similar recursion).
    ``aux=None`` means no auxiliary work at all, giving the pure branching
    exponent log_b(a)/2.
    """
    if not branch_shrinks:
        raise UnsupportedFormError("need at least one branch")
    first = branch_shrinks[0]
    for s in branch_shrinks[1:]:
        if _float(s) != _float(first):
            raise UnsupportedFormError("branches shrink by different factors")
    a = len(branch_shrinks)
    if aux is None:
        exact = _exact_log(a, first)
        exponent = exact if exact is not None else (
            math.log(a) / math.log(_float(first))
        )
        return BoundClass(_half(exponent), Fraction(0), case_id=1)
    spec = RecurrenceSpec(
        a=a,
        b=first,
        c=_double(aux.exponent),
        p=_double(aux.log_power),
        squared=True,
        aux_tilde=aux.tilde,
    )
    return master_solve(spec)


def _double(x):
    if isinstance(x, (int, Fraction)):
        return Fraction(x) * 2
    return x * 2.0


def strategy2_bound(coeff, b, aux: BoundClass) -> BoundClass:
    """Sequential split: linear recurrence with weight ``coeff`` per level."""
    if _float(coeff) <= 0:
        raise ValueError("coefficient must be positive")
    spec = RecurrenceSpec(
        a=coeff, b=b, c=aux.exponent, p=aux.log_power, aux_tilde=aux.tilde
    )
    return master_solve(spec)


def min_splitting_factor(
    target_c, coeff_fn: Callable[[int], object] | None = None, cap: int = 10**6
) -> int:
    """Smallest m >= 2 whose per-level weight grows slower than n^target_c.

    The default weight is sqrt(2m-1), for which the comparison
    log_m sqrt(2m-1) < target_c is decided exactly by cross-powering.
    """
    tc = float(target_c)
    if not 0 < tc < 1:
        raise ValueError("target exponent must lie in (0, 1)")
    if coeff_fn is None:
        coeff_fn = lambda m: sqrt_of(2 * m - 1)
    for m in range(2, cap + 1):
        if compare_log(coeff_fn(m), m, target_c) < 0:
            return m
    raise SplitFactorNotFound(f"no splitting factor up to {cap}")


# ---------------------------------------------------------------------------
# Headline derivations


@dataclass(frozen=True)
class HeadlineRow:
    problem: str
    k: int | None
    derived: BoundClass
    stated: BoundClass

    @property
    def matches(self) -> bool:
        return self.derived.same_as(self.stated)


def headline_bounds(max_k: int = 3) -> list[HeadlineRow]:
    """Derive the four families of query bounds and compare with their targets.

    Each row re-runs the strategy pipeline with the appropriate parameters:
    the substring-pattern recognizer, the minimal-substring reductions, and
    the inductions for length-k increasing and common subsequences.
    """
    from .strdnc.costmodel import cost_model  # local import avoids a cycle

    rows: list[HeadlineRow] = []

    # pattern recognizer: two halves plus a search-based combiner
    derived = strategy1_bound([2, 2], cost_model("search"))
    rows.append(HeadlineRow("regular", None, derived,
                            BoundClass(Fraction(1, 2), Fraction(1, 2))))

    # minimal substring (rotation / suffix reduce to it at doubled size)
    aux = cost_model("string_match")
    derived = strategy1_bound([2, 2], aux)
    stated = BoundClass(Fraction(1, 2), Fraction(0), tilde=True)
    rows.append(HeadlineRow("min_substring", None, derived, stated))
    rows.append(HeadlineRow("rotation", None, derived, stated))
    rows.append(HeadlineRow("suffix", None, derived, stated))

    # increasing subsequences: induct on k, combiner costs a log factor
    cls = cost_model("search")  # length-1 case is a plain search
    rows.append(HeadlineRow("k_is", 1, cls, BoundClass(Fraction(1, 2), Fraction(0))))
    for k in range(2, max_k + 1):
        aux = BoundClass(cls.exponent, Fraction(cls.log_power) + 1)
        cls = strategy1_bound([2, 2], aux)
        stated = BoundClass(Fraction(1, 2), Fraction(3 * (k - 1), 2))
        rows.append(HeadlineRow("k_is", k, cls, stated))

    # common subsequences: sequential split at the minimal usable factor
    m = min_splitting_factor(Fraction(2, 3))
    cls = cost_model("bipartite_distinctness")  # length-1 case
    rows.append(HeadlineRow("k_cs", 1, cls, BoundClass(Fraction(2, 3), Fraction(0))))
    for k in range(2, max_k + 1):
        aux = BoundClass(cls.exponent, Fraction(cls.log_power) + 1)
        cls = strategy2_bound(sqrt_of(2 * m - 1), m, aux)
        stated = BoundClass(Fraction(2, 3), Fraction(k - 1))
        rows.append(HeadlineRow("k_cs", k, cls, stated))

    return rows
