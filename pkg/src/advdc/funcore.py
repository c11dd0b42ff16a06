"""Finite functions as explicit tables, plus the matrices derived from them.

A function f: D -> E with D a subset of Sigma^n is stored as an ordered list
of input strings and their outputs.  From it we derive the 0/1 Gram matrix
(equal-output indicator) and the per-coordinate difference masks that the
optimization layer consumes.  All objects are immutable after construction.
"""

from __future__ import annotations

import io
import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

# Hard cap on |D| * arity for anything handed to the SDP layer.
SDP_SIZE_CAP = 2048


class FunctionFormatError(ValueError):
    """Malformed function file; carries the offending 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class SizeCapError(ValueError):
    """Object exceeds the |D| * arity cap for SDP-bound objects."""


@dataclass(frozen=True)
class Alphabet:
    """Ordered finite set of distinct symbols; order is list position."""

    symbols: tuple

    def __post_init__(self):
        if len(set(self.symbols)) != len(self.symbols):
            raise ValueError("alphabet symbols must be distinct")
        if not self.symbols:
            raise ValueError("alphabet must be nonempty")

    def __len__(self):
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __contains__(self, sym):
        return sym in self.symbols

    def index(self, sym) -> int:
        return self.symbols.index(sym)

    def strings(self, n: int) -> list[tuple]:
        """All length-n strings in lexicographic (list-position) order."""
        return list(itertools.product(self.symbols, repeat=n))


def _as_bit(value):
    """Map a Boolean-ish output token to 0/1, or None if not Boolean."""
    if value in (0, False) or value == "0":
        return 0
    if value in (1, True) or value == "1":
        return 1
    return None


@dataclass(frozen=True)
class FiniteFunction:
    """Explicit table for f: D -> E with D a subset of alphabet^arity.

    ``outputs[i]`` is the value on ``domain[i]``; matrix row/column order is
    always the domain order.
    """

    alphabet: Alphabet
    arity: int
    domain: tuple[tuple, ...]
    outputs: tuple
    codomain: tuple

    def __post_init__(self):
        if self.arity < 1:
            raise ValueError("arity must be positive")
        if len(self.domain) != len(self.outputs):
            raise ValueError("domain and outputs must align")
        if not self.domain:
            raise ValueError("domain must be nonempty")
        seen = set()
        for x in self.domain:
            if len(x) != self.arity:
                raise ValueError(f"domain element {x!r} has wrong length")
            for s in x:
                if s not in self.alphabet:
                    raise ValueError(f"symbol {s!r} outside alphabet")
            if x in seen:
                raise ValueError(f"duplicate domain element {x!r}")
            seen.add(x)
        cod = set(self.codomain)
        if len(cod) != len(self.codomain):
            raise ValueError("codomain values must be distinct")
        for v in self.outputs:
            if v not in cod:
                raise ValueError(f"output {v!r} outside declared codomain")

    @cached_property
    def _table(self) -> dict:
        return dict(zip(self.domain, self.outputs))

    def __call__(self, x):
        return self._table[tuple(x)]

    def __len__(self):
        return len(self.domain)

    def attained(self) -> tuple:
        """Outputs actually taken, in codomain order."""
        got = set(self.outputs)
        return tuple(v for v in self.codomain if v in got)

    def is_boolean(self) -> bool:
        return all(_as_bit(v) is not None for v in self.codomain)

    def bits(self) -> np.ndarray:
        """Outputs as a 0/1 vector; requires a Boolean codomain."""
        if not self.is_boolean():
            raise ValueError("non-Boolean codomain")
        return np.array([_as_bit(v) for v in self.outputs], dtype=int)

    def key(self) -> tuple:
        """Hashable identity of the table, usable as a cache key."""
        return (self.alphabet.symbols, self.arity, self.domain, self.outputs)

    def require_sdp_cap(self):
        if len(self.domain) * self.arity > SDP_SIZE_CAP:
            raise SizeCapError(
                f"|D|*n = {len(self.domain) * self.arity} exceeds cap {SDP_SIZE_CAP}"
            )

    def labels(self) -> list[str]:
        """Printable labels for matrix rows/columns, in domain order."""
        return [format_input(x) for x in self.domain]


def format_input(x: Sequence) -> str:
    toks = [str(s) for s in x]
    return "".join(toks) if all(len(t) == 1 for t in toks) else "|".join(toks)


def tabulate(symbols: Sequence, arity: int, fn, codomain: Sequence | None = None) -> FiniteFunction:
    """Build a function on all of alphabet^arity by evaluating ``fn``."""
    alphabet = Alphabet(tuple(symbols))
    domain = tuple(alphabet.strings(arity))
    outputs = tuple(fn(x) for x in domain)
    if codomain is None:
        codomain = tuple(sorted(set(outputs), key=repr))
    return FiniteFunction(alphabet, arity, domain, outputs, tuple(codomain))


def from_table(symbols: Sequence, mapping: Mapping, codomain: Sequence | None = None) -> FiniteFunction:
    """Build a function from an explicit {input tuple: output} mapping."""
    domain = tuple(tuple(x) for x in mapping)
    if not domain:
        raise ValueError("empty table")
    arity = len(domain[0])
    outputs = tuple(mapping[x] for x in domain)
    if codomain is None:
        codomain = tuple(sorted(set(outputs), key=repr))
    return FiniteFunction(Alphabet(tuple(symbols)), arity, domain, outputs, tuple(codomain))


# ---------------------------------------------------------------------------
# Gram matrix and difference masks


def gram_matrix(f: FiniteFunction) -> np.ndarray:
    """0/1 matrix with a 1 exactly where two inputs share an output."""
    out = np.array([f.codomain.index(v) for v in f.outputs])
    return (out[:, None] == out[None, :]).astype(float)


def difference_masks(f: FiniteFunction) -> list[np.ndarray]:
    """Per-coordinate 0/1 masks: entry (x, y) is 1 iff x_j != y_j."""
    cols = []
    for j in range(f.arity):
        col = np.array([f.alphabet.index(x[j]) for x in f.domain])
        cols.append((col[:, None] != col[None, :]).astype(float))
    return cols


def gram_and_masks(f: FiniteFunction) -> tuple[np.ndarray, list[np.ndarray]]:
    return gram_matrix(f), difference_masks(f)


# ---------------------------------------------------------------------------
# Combining constructions


def _require_boolean(*fs: FiniteFunction):
    for f in fs:
        if not f.is_boolean():
            raise ValueError("non-Boolean codomain")


def _require_same_alphabet(f1: FiniteFunction, f2: FiniteFunction):
    if f1.alphabet.symbols != f2.alphabet.symbols:
        raise ValueError("functions must share an alphabet")


def _product(f1: FiniteFunction, f2: FiniteFunction, op) -> FiniteFunction:
    _require_boolean(f1, f2)
    _require_same_alphabet(f1, f2)
    b1, b2 = f1.bits(), f2.bits()
    domain = []
    outputs = []
    for i, x in enumerate(f1.domain):
        for j, y in enumerate(f2.domain):
            domain.append(x + y)
            outputs.append(op(int(b1[i]), int(b2[j])))
    return FiniteFunction(
        f1.alphabet, f1.arity + f2.arity, tuple(domain), tuple(outputs), (0, 1)
    )


def build_or(f1: FiniteFunction, f2: FiniteFunction) -> FiniteFunction:
    """g(x, y) = f1(x) | f2(y) on the product domain."""
    return _product(f1, f2, lambda a, b: a | b)


def build_and(f1: FiniteFunction, f2: FiniteFunction) -> FiniteFunction:
    """g(x, y) = f1(x) & f2(y) on the product domain."""
    return _product(f1, f2, lambda a, b: a & b)


def _pointwise(f1: FiniteFunction, f2: FiniteFunction, op) -> FiniteFunction:
    _require_boolean(f1, f2)
    if f1.domain != f2.domain:
        raise ValueError("shared-variable combination needs a common domain")
    b1, b2 = f1.bits(), f2.bits()
    outputs = tuple(op(int(a), int(b)) for a, b in zip(b1, b2))
    return FiniteFunction(f1.alphabet, f1.arity, f1.domain, outputs, (0, 1))


def build_shared_and(f1: FiniteFunction, f2: FiniteFunction) -> FiniteFunction:
    """h(x) = f1(x) & f2(x); both arguments read the same input."""
    return _pointwise(f1, f2, lambda a, b: a & b)


def build_shared_or(f1: FiniteFunction, f2: FiniteFunction) -> FiniteFunction:
    return _pointwise(f1, f2, lambda a, b: a | b)


def negate(f: FiniteFunction) -> FiniteFunction:
    _require_boolean(f)
    outputs = tuple(1 - b for b in f.bits())
    return FiniteFunction(f.alphabet, f.arity, f.domain, outputs, (0, 1))


def build_switch(f: FiniteFunction, g_family: Mapping) -> FiniteFunction:
    """h(x) = g_{f(x)}(x): the branch is selected by f's value on x."""
    for s, g in g_family.items():
        if not g.is_boolean():
            raise ValueError(f"branch for {s!r} has non-Boolean codomain")
        if g.domain != f.domain:
            raise ValueError(f"branch for {s!r} lives on a different domain")
    outputs = []
    for x in f.domain:
        s = f(x)
        if s not in g_family:
            raise ValueError(f"no branch function for attained value {s!r}")
        outputs.append(_as_bit(g_family[s](x)))
    return FiniteFunction(f.alphabet, f.arity, f.domain, tuple(outputs), (0, 1))


# ---------------------------------------------------------------------------
# Small catalog used by tests and the CLI


def or_function(n: int) -> FiniteFunction:
    return tabulate((0, 1), n, lambda x: int(any(x)), (0, 1))


def and_function(n: int) -> FiniteFunction:
    return tabulate((0, 1), n, lambda x: int(all(x)), (0, 1))


def xor_function(n: int) -> FiniteFunction:
    return tabulate((0, 1), n, lambda x: sum(x) % 2, (0, 1))


def bit_function(n: int, k: int) -> FiniteFunction:
    """Projection onto coordinate k (0-based) of an n-bit input."""
    return tabulate((0, 1), n, lambda x: x[k], (0, 1))


def constant_function(n: int, value=0, symbols=(0, 1)) -> FiniteFunction:
    return tabulate(symbols, n, lambda x: value, (0, 1))


def restrict(f: FiniteFunction, keep: Iterable[int]) -> FiniteFunction:
    """Restriction of f to a subset of domain positions (domain order kept)."""
    keep = sorted(set(keep))
    domain = tuple(f.domain[i] for i in keep)
    outputs = tuple(f.outputs[i] for i in keep)
    return FiniteFunction(f.alphabet, f.arity, domain, outputs, f.codomain)


# ---------------------------------------------------------------------------
# Function file format


def load_function(text: str) -> FiniteFunction:
    """Parse the text function format.

    Header lines: ``alphabet: <tokens>``, ``arity: <n>``, ``codomain:
    <tokens>``, optional ``domain: all``; then one row ``<x_1 ... x_n> ->
    <value>`` per input.
    """
    alphabet = None
    arity = None
    codomain = None
    domain_all = False
    rows: list[tuple[tuple, str, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" in line and "->" not in line:
            head, _, rest = line.partition(":")
            head = head.strip().lower()
            toks = rest.split()
            if head == "alphabet":
                if not toks:
                    raise FunctionFormatError("empty alphabet", lineno)
                alphabet = Alphabet(tuple(toks))
            elif head == "arity":
                try:
                    arity = int(toks[0])
                except (IndexError, ValueError):
                    raise FunctionFormatError("arity must be an integer", lineno)
            elif head == "codomain":
                if not toks:
                    raise FunctionFormatError("empty codomain", lineno)
                codomain = tuple(toks)
            elif head == "domain":
                if toks != ["all"]:
                    raise FunctionFormatError("domain header only accepts 'all'", lineno)
                domain_all = True
            else:
                raise FunctionFormatError(f"unknown header {head!r}", lineno)
            continue
        if "->" not in line:
            raise FunctionFormatError("expected '<input> -> <value>' row", lineno)
        left, _, right = line.partition("->")
        x = tuple(left.split())
        value = right.strip()
        if not value or len(value.split()) != 1:
            raise FunctionFormatError("row needs exactly one output token", lineno)
        rows.append((x, value, lineno))

    if alphabet is None:
        raise FunctionFormatError("missing 'alphabet:' header")
    if arity is None:
        raise FunctionFormatError("missing 'arity:' header")
    if not rows:
        raise FunctionFormatError("no table rows")

    table = {}
    for x, value, lineno in rows:
        if len(x) != arity:
            raise FunctionFormatError(f"input has {len(x)} symbols, expected {arity}", lineno)
        for s in x:
            if s not in alphabet:
                raise FunctionFormatError(f"symbol {s!r} outside alphabet", lineno)
        if x in table:
            raise FunctionFormatError(f"duplicate domain element {format_input(x)}", lineno)
        if codomain is not None and value not in codomain:
            raise FunctionFormatError(f"output {value!r} outside codomain", lineno)
        table[x] = value

    if domain_all:
        domain = tuple(alphabet.strings(arity))
        missing = [x for x in domain if x not in table]
        if missing:
            raise FunctionFormatError(
                f"'domain: all' but {format_input(missing[0])} has no row"
            )
    else:
        domain = tuple(table)
    outputs = tuple(table[x] for x in domain)
    if codomain is None:
        codomain = tuple(sorted(set(outputs)))
    return FiniteFunction(alphabet, arity, domain, outputs, codomain)


def load_function_path(path) -> FiniteFunction:
    with open(path, "r", encoding="utf-8") as fh:
        return load_function(fh.read())


def dump_function(f: FiniteFunction) -> str:
    lines = [
        "alphabet: " + " ".join(str(s) for s in f.alphabet),
        f"arity: {f.arity}",
        "codomain: " + " ".join(str(v) for v in f.codomain),
    ]
    for x, v in zip(f.domain, f.outputs):
        lines.append(" ".join(str(s) for s in x) + " -> " + str(v))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Matrix CSV serialization (header row carries the domain labels)


def write_matrix_csv(matrix: np.ndarray, labels: Sequence[str] | None = None) -> str:
    matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
    buf = io.StringIO()
    if labels is None:
        labels = [f"c{i}" for i in range(matrix.shape[1])]
    buf.write(",".join(str(l) for l in labels) + "\n")
    for row in matrix:
        buf.write(",".join(format(v, ".12g") for v in row) + "\n")
    return buf.getvalue()


def read_matrix_csv(text: str) -> np.ndarray:
    rows = []
    for lineno, line in enumerate(text.strip().splitlines(), start=1):
        cells = [c.strip() for c in line.split(",")]
        if lineno == 1:
            try:
                rows.append([float(c) for c in cells])
            except ValueError:
                continue  # header row
        else:
            rows.append([float(c) for c in cells])
    if not rows:
        raise ValueError("empty matrix CSV")
    return np.array(rows, dtype=float)
