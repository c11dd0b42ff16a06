"""Common-subsequence decisions, block signatures, and witness structure.

Strings are split into m nearly equal blocks; a collision is an index pair
with equal symbols.  The signature records which block pairs contain a
collision; a relevant block pair with no relevant order-compatible partner
is critical, and at most 2m-1 block pairs can be critical because any two
on one diagonal slope are compatible.  Witnesses are strictly increasing
collision chains; a witness spanning more than one block pair is composite.
The case split "some composite witness exists, or some critical block pair
has an internal witness" is checked against the plain length oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .querystring import read_all


class WitnessValidationError(ValueError):
    """A claimed witness is not a strictly increasing equal-symbol chain."""


def _tuple(x):
    return tuple(read_all(x))


def lcs_length(x, y) -> int:
    """Classic quadratic table, rolling one row."""
    xs, ys = _tuple(x), _tuple(y)
    if not xs or not ys:
        return 0
    prev = [0] * (len(ys) + 1)
    for i in range(1, len(xs) + 1):
        cur = [0] * (len(ys) + 1)
        xi = xs[i - 1]
        for j in range(1, len(ys) + 1):
            if xi == ys[j - 1]:
                cur[j] = prev[j - 1] + 1
            else:
                cur[j] = cur[j - 1] if cur[j - 1] >= prev[j] else prev[j]
        prev = cur
    return prev[len(ys)]


def kcs_decide(x, y, k: int) -> int:
    """1 iff x and y share a common subsequence of length k."""
    if k <= 0:
        return 1
    return int(lcs_length(x, y) >= k)


# ---------------------------------------------------------------------------
# Blocks and signatures


def block_bounds(n: int, m: int) -> list[tuple[int, int]]:
    """Half-open index ranges of the m nearly equal blocks of [0, n)."""
    if m < 1 or m > n:
        raise ValueError("need 1 <= m <= n")
    return [(b * n // m, (b + 1) * n // m) for b in range(m)]


def block_of(idx: int, n: int, m: int) -> int:
    """0-based block containing index idx under the nearly-equal split."""
    return min(((idx + 1) * m - 1) // n, m - 1)


@dataclass(frozen=True)
class SubproblemSignature:
    """m x m collision-existence bits; row = x block, column = y block."""

    m: int
    bits: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.bits) != self.m or any(len(r) != self.m for r in self.bits):
            raise ValueError("signature must be m x m")

    def row_major(self) -> str:
        return "".join(str(b) for row in self.bits for b in row)

    def relevant(self) -> frozenset[tuple[int, int]]:
        return frozenset(
            (i, j)
            for i in range(self.m)
            for j in range(self.m)
            if self.bits[i][j]
        )

    @staticmethod
    def from_int(value: int, m: int) -> "SubproblemSignature":
        """Row-major bit unpacking; bit (m*i + j) is cell (i, j)."""
        bits = tuple(
            tuple((value >> (m * i + j)) & 1 for j in range(m)) for i in range(m)
        )
        return SubproblemSignature(m, bits)


def signature(x, y, m: int) -> SubproblemSignature:
    """Collision-existence bits from per-block value-set intersections."""
    xs, ys = _tuple(x), _tuple(y)
    if len(xs) != len(ys):
        raise ValueError("strings must have equal length")
    if m > len(xs):
        raise ValueError("more blocks than positions")
    bounds = block_bounds(len(xs), m)
    xsets = [set(xs[a:b]) for a, b in bounds]
    ysets = [set(ys[a:b]) for a, b in bounds]
    bits = tuple(
        tuple(int(bool(xsets[i] & ysets[j])) for j in range(m)) for i in range(m)
    )
    return SubproblemSignature(m, bits)


# ---------------------------------------------------------------------------
# Compatibility and critical block pairs


def compatible(p: tuple[int, int], q: tuple[int, int]) -> bool:
    """Both coordinates strictly ordered the same way."""
    return (p[0] < q[0] and p[1] < q[1]) or (p[0] > q[0] and p[1] > q[1])


def critical_set(sig: SubproblemSignature) -> frozenset[tuple[int, int]]:
    """Relevant cells with no relevant compatible partner."""
    rel = sig.relevant()
    return frozenset(
        p for p in rel if not any(compatible(p, q) for q in rel if q != p)
    )


@lru_cache(maxsize=None)
def _compat_masks(m: int) -> tuple[int, ...]:
    """Row-major bitmask of the cells compatible with each cell."""
    masks = []
    for i in range(m):
        for j in range(m):
            mask = 0
            for a in range(m):
                for b in range(m):
                    if compatible((i, j), (a, b)):
                        mask |= 1 << (m * a + b)
            masks.append(mask)
    return tuple(masks)


def critical_count(sig_bits: int, m: int) -> int:
    """Number of critical cells for a row-major packed signature."""
    masks = _compat_masks(m)
    count = 0
    rest = sig_bits
    while rest:
        low = rest & -rest
        cell = low.bit_length() - 1
        if not (sig_bits & masks[cell]):
            count += 1
        rest ^= low
    return count


def extremal_signature(m: int) -> SubproblemSignature:
    """Top row plus first column: 2m-1 pairwise incompatible relevant cells.

    One cell per diagonal slope, so every relevant cell is critical and the
    2m-1 ceiling is met with equality.
    """
    bits = tuple(
        tuple(1 if (i == 0 or j == 0) else 0 for j in range(m)) for i in range(m)
    )
    return SubproblemSignature(m, bits)


@dataclass(frozen=True)
class MaxCriticalReport:
    m: int
    value: int
    ceiling: int  # 2m - 1
    method: str  # "exhaustive" or "construction+sampling"
    sampled: int
    violations: int


def max_critical(m: int, samples: int = 100_000, seed: int = 42) -> MaxCriticalReport:
    """Largest possible number of critical cells for splitting factor m.

    Exhaustive over all signatures for m <= 4.  Beyond that the extremal
    construction realizes the 2m-1 ceiling and random signatures are sampled
    to confirm none exceeds it.
    """
    ceiling = 2 * m - 1
    if m <= 4:
        best = 0
        for sig_bits in range(1 << (m * m)):
            c = critical_count(sig_bits, m)
            if c > best:
                best = c
        return MaxCriticalReport(m, best, ceiling, "exhaustive", 1 << (m * m), 0)

    built = len(critical_set(extremal_signature(m)))
    if built != ceiling:
        raise RuntimeError(
            f"extremal construction for m={m} yields {built}, expected {ceiling}"
        )
    rng = np.random.Generator(np.random.Philox(seed))
    violations = 0
    best = built
    for _ in range(samples):
        sig_bits = int(rng.integers(0, 1 << 63)) & ((1 << (m * m)) - 1)
        if m * m > 63:
            sig_bits |= (int(rng.integers(0, 1 << 63)) << 63) & ((1 << (m * m)) - 1)
        c = critical_count(sig_bits, m)
        if c > best:
            best = c
        if c > ceiling:
            violations += 1
    return MaxCriticalReport(m, best, ceiling, "construction+sampling", samples, violations)


# ---------------------------------------------------------------------------
# Composite witnesses


def composite_decide(x, y, k: int, m: int) -> int:
    """1 iff some length-k witness spans more than one block pair.

    Small instances enumerate witness chains directly; larger ones use the
    boundary-aware chain table.  Both agree on the overlap and tests pin that.
    """
    xs, ys = _tuple(x), _tuple(y)
    if len(xs) <= 24:
        return composite_brute(xs, ys, k, m)
    return composite_dp(xs, ys, k, m)


def composite_brute(x, y, k: int, m: int) -> int:
    """Depth-first enumeration of collision chains, stopping at the first
    chain of length k that touches two distinct block pairs."""
    xs, ys = _tuple(x), _tuple(y)
    n = len(xs)
    if len(ys) != n:
        raise ValueError("strings must have equal length")
    if k <= 1:
        return 0  # a single collision sits inside one block pair
    collisions = [(i, j) for i in range(n) for j in range(n) if xs[i] == ys[j]]
    blocks = [(block_of(i, n, m), block_of(j, n, m)) for i, j in collisions]

    def extend(idx, last_i, last_j, need, first_block, mixed):
        if need == 0:
            return mixed
        for t in range(idx, len(collisions)):
            i, j = collisions[t]
            if i > last_i and j > last_j:
                if extend(t + 1, i, j, need - 1, first_block,
                          mixed or blocks[t] != first_block):
                    return True
        return False

    for s in range(len(collisions)):
        i, j = collisions[s]
        if extend(s + 1, i, j, k - 1, blocks[s], False):
            return 1
    return 0


def composite_dp(x, y, k: int, m: int) -> int:
    """Chain-table version: a composite witness exists iff some strict
    collision pair in distinct block pairs links chains of total length k.

    up[c] is the longest chain ending at c, down[c] the longest starting at
    c.  When a strict predecessor c of c' lies in a different block pair and
    up[c] + down[c'] >= k, the concatenated chain can be trimmed to length
    exactly k while keeping the crossing link, so a composite witness exists;
    conversely any composite witness contains such a crossing link.
    """
    xs, ys = _tuple(x), _tuple(y)
    n = len(xs)
    if len(ys) != n:
        raise ValueError("strings must have equal length")
    if k <= 1:
        return 0
    eq = [[xs[i] == ys[j] for j in range(n)] for i in range(n)]

    # pre[i][j] = max up over strict predecessors (a < i, b < j)
    up = [[0] * n for _ in range(n)]
    pre = [[0] * (n + 1) for _ in range(n + 1)]
    for i in range(n):
        for j in range(n):
            if eq[i][j]:
                up[i][j] = 1 + pre[i][j]
            pre[i + 1][j + 1] = max(pre[i][j + 1], pre[i + 1][j], up[i][j])

    # suc[i][j] = max down over strict successors (a > i, b > j)
    down = [[0] * n for _ in range(n)]
    suc = [[0] * (n + 2) for _ in range(n + 2)]
    for i in range(n - 1, -1, -1):
        for j in range(n - 1, -1, -1):
            if eq[i][j]:
                down[i][j] = 1 + suc[i + 2][j + 2]
            suc[i + 1][j + 1] = max(suc[i + 2][j + 1], suc[i + 1][j + 2], down[i][j])

    bounds = block_bounds(n, m)
    for i in range(n):
        bx0 = bounds[block_of(i, n, m)][0]
        row_eq = eq[i]
        row_down = down[i]
        for j in range(n):
            if not row_eq[j] or row_down[j] == 0:
                continue
            by0 = bounds[block_of(j, n, m)][0]
            # a predecessor in a different block pair starts strictly before
            # this x block (any smaller j) or strictly before this y block
            cand = max(pre[bx0][j], pre[i][by0])
            if cand and cand + row_down[j] >= k:
                return 1
    return 0


# ---------------------------------------------------------------------------
# Witness graphs


def validate_witness(witness, x=None, y=None):
    """Check strict coordinate increase and, when strings are given, symbol
    equality; name the first offending pair otherwise."""
    wit = [tuple(c) for c in witness]
    if not wit:
        raise WitnessValidationError("empty witness")
    for t in range(1, len(wit)):
        (i0, j0), (i1, j1) = wit[t - 1], wit[t]
        if not (i0 < i1 and j0 < j1):
            raise WitnessValidationError(
                f"collisions {wit[t - 1]} and {wit[t]} are not strictly increasing"
            )
    if x is not None and y is not None:
        xs, ys = _tuple(x), _tuple(y)
        for i, j in wit:
            if xs[i] != ys[j]:
                raise WitnessValidationError(
                    f"pair ({i}, {j}) has unequal symbols {xs[i]!r} and {ys[j]!r}"
                )
    return wit


@dataclass(frozen=True)
class WitnessGraph:
    """Edge-weighted block-pair graph of a witness chain.

    Edge (i, j) carries the number of witness collisions in block pair
    (i, j); weights total the witness length.  The edge set always has a
    unique componentwise-least edge, and that edge has an endpoint touching
    no other edge.
    """

    m: int
    edges: tuple[tuple[tuple[int, int], int], ...]  # ((i, j), weight)
    leftmost: tuple[int, int]
    total_weight: int

    def weight(self, i: int, j: int) -> int:
        return dict(self.edges).get((i, j), 0)

    def is_simple(self) -> bool:
        return len(self.edges) == 1

    def degrees(self) -> tuple[dict, dict]:
        du: dict = {}
        dv: dict = {}
        for (i, j), _ in self.edges:
            du[i] = du.get(i, 0) + 1
            dv[j] = dv.get(j, 0) + 1
        return du, dv

    def leftmost_has_degree_one_endpoint(self) -> bool:
        du, dv = self.degrees()
        i, j = self.leftmost
        return du[i] == 1 or dv[j] == 1


def witness_graph(witness, m: int, n: int, x=None, y=None) -> WitnessGraph:
    """Build the block-pair graph of a witness and check its structure.

    Raises if the witness is invalid, if no unique least edge exists, or if
    the least edge lacks a degree-one endpoint (impossible for valid
    witnesses; enforced as a hard check).
    """
    wit = validate_witness(witness, x, y)
    weights: dict[tuple[int, int], int] = {}
    for i, j in wit:
        cell = (block_of(i, n, m), block_of(j, n, m))
        weights[cell] = weights.get(cell, 0) + 1
    edges = tuple(sorted(weights.items()))
    cells = [c for c, _ in edges]
    least = min(cells)
    if not all(least[0] <= c[0] and least[1] <= c[1] for c in cells):
        raise WitnessValidationError(
            f"no unique componentwise-least edge among {cells}"
        )
    graph = WitnessGraph(m, edges, least, sum(weights.values()))
    if not graph.leftmost_has_degree_one_endpoint():
        raise WitnessValidationError(
            f"leftmost edge {least} has no degree-one endpoint in {cells}"
        )
    return graph


def all_witnesses(x, y, k: int, limit: int | None = None):
    """Every strictly increasing equal-symbol chain of length exactly k."""
    xs, ys = _tuple(x), _tuple(y)
    n = len(xs)
    collisions = [(i, j) for i in range(n) for j in range(n) if xs[i] == ys[j]]
    out: list[tuple] = []

    def extend(start, chain):
        if len(chain) == k:
            out.append(tuple(chain))
            return limit is not None and len(out) >= limit
        for t in range(start, len(collisions)):
            i, j = collisions[t]
            if i > chain[-1][0] and j > chain[-1][1]:
                chain.append((i, j))
                stop = extend(t + 1, chain)
                chain.pop()
                if stop:
                    return True
        return False

    for s in range(len(collisions)):
        if extend(s + 1, [collisions[s]]):
            break
    return out


# ---------------------------------------------------------------------------
# Case-split check and prefix search


def critical_block_hit(x, y, k: int, m: int) -> int:
    """1 iff some critical block pair of the signature holds a k-witness."""
    xs, ys = _tuple(x), _tuple(y)
    n = len(xs)
    sig = signature(xs, ys, m)
    bounds = block_bounds(n, m)
    for i, j in sorted(critical_set(sig)):
        xa, xb = bounds[i]
        ya, yb = bounds[j]
        if kcs_decide(xs[xa:xb], ys[ya:yb], k):
            return 1
    return 0


@dataclass(frozen=True)
class DecompositionCheck:
    lhs: int  # plain length oracle
    composite: int
    critical: int
    equal: bool


def kcs_decompose_check(x, y, k: int, m: int) -> DecompositionCheck:
    """Case split: a k-witness exists iff a composite one does or some
    critical block pair has an internal one.

    Valid for k >= 2 only, which is where the recursion applies; at k = 1 a
    witness is a single collision, compositeness is impossible, and two
    mutually compatible relevant cells (x = y = "ab", two blocks) leave the
    critical set empty while a witness exists.
    """
    if k < 2:
        raise ValueError("case split needs k >= 2; length 1 is a base case")
    xs, ys = _tuple(x), _tuple(y)
    lhs = kcs_decide(xs, ys, k)
    comp = composite_decide(xs, ys, k, m)
    crit = critical_block_hit(xs, ys, k, m)
    return DecompositionCheck(lhs, comp, crit, lhs == int(bool(comp or crit)))


def minimal_p(x, y, i: int, j: int, k1: int, m: int):
    """Shortest prefix length p of x's block i whose prefix shares a
    k1-subsequence with y's block j; None when even the full block fails.

    Binary search over p; the predicate is monotone in the prefix length.
    """
    xs, ys = _tuple(x), _tuple(y)
    n = len(xs)
    bounds = block_bounds(n, m)
    xa, xb = bounds[i]
    ya, yb = bounds[j]
    xblock = xs[xa:xb]
    yblock = ys[ya:yb]
    if not kcs_decide(xblock, yblock, k1):
        return None
    lo, hi = 1, len(xblock)
    while lo < hi:
        mid = (lo + hi) // 2
        if kcs_decide(xblock[:mid], yblock, k1):
            hi = mid
        else:
            lo = mid + 1
    return lo


def minimal_p_linear(x, y, i: int, j: int, k1: int, m: int):
    """Linear-scan reference for the prefix search."""
    xs, ys = _tuple(x), _tuple(y)
    bounds = block_bounds(len(xs), m)
    xa, xb = bounds[i]
    ya, yb = bounds[j]
    xblock = xs[xa:xb]
    yblock = ys[ya:yb]
    for p in range(1, len(xblock) + 1):
        if kcs_decide(xblock[:p], yblock, k1):
            return p
    return None
