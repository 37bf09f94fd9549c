"""Words over {0..q-1}, forbidden-set validation, adjacency matrices.

A word is a plain tuple of ints. The canonical label order everywhere is
lexicographic, which for equal-length tuples is Python's tuple order.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    EmptyAlphabet,
    EmptyShift,
    EmptyWord,
    LengthOneForbiddenWord,
    NotReduced,
    ParseError,
    SymbolOutOfRange,
)

Word = tuple


def as_word(w) -> tuple:
    """Coerce a digit string or a sequence of ints to a word tuple."""
    if isinstance(w, str):
        if not w.isdigit():
            raise ParseError(f"not a digit string: {w!r}")
        return tuple(int(ch) for ch in w)
    try:
        return tuple(int(c) for c in w)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"cannot read word {w!r}") from exc


def word_str(w: Sequence[int], q: int | None = None) -> str | list:
    """Digit string when every symbol is a single digit, else a list of ints."""
    if (q is None or q <= 10) and all(0 <= c < 10 for c in w):
        return "".join(str(c) for c in w)
    return list(w)


def is_factor(small: Sequence[int], big: Sequence[int]) -> bool:
    m, n = len(small), len(big)
    if m > n:
        return False
    small = tuple(small)
    big = tuple(big)
    return any(big[k:k + m] == small for k in range(n - m + 1))


@dataclass(frozen=True)
class ShiftSpec:
    """Alphabet size and a reduced forbidden collection.

    ``p`` is the longest forbidden length, or 2 for the full shift.
    """

    q: int
    forbidden: tuple
    p: int

    @property
    def s(self) -> int:
        return len(self.forbidden)

    @property
    def is_full_shift(self) -> bool:
        return not self.forbidden


def validate_spec(q: int, forbidden: Iterable) -> ShiftSpec:
    if q < 2:
        raise EmptyAlphabet(f"alphabet size must be >= 2, got {q}", q=q)
    words = [as_word(w) for w in forbidden]
    seen = set()
    for w in words:
        if len(w) == 0:
            raise EmptyWord("forbidden words must be nonempty")
        for c in w:
            if not 0 <= c < q:
                raise SymbolOutOfRange(f"symbol {c} not in [0, {q})", word=list(w), q=q)
        if len(w) == 1:
            raise LengthOneForbiddenWord(
                f"forbidden word {list(w)} has length 1; drop the symbol from the alphabet instead",
                word=list(w),
            )
        if w in seen:
            raise NotReduced(f"duplicate forbidden word {list(w)}", pair=[list(w), list(w)])
        seen.add(w)
    for i, a in enumerate(words):
        for j, b in enumerate(words):
            if i != j and is_factor(a, b):
                raise NotReduced(
                    f"{list(a)} is a subword of {list(b)}", pair=[list(a), list(b)]
                )
    p = max((len(w) for w in words), default=2)
    return ShiftSpec(q=q, forbidden=tuple(words), p=p)


def correlation_bits(x: Sequence[int], y: Sequence[int]) -> list:
    """b_l for l = 0..|x|-1: does the length-(|x|-l) suffix of x equal the prefix of y?

    Overlaps longer than y never count, so (x, y) and (rev y, rev x) agree.
    """
    x = tuple(x)
    y = tuple(y)
    if not x or not y:
        raise EmptyWord("correlation of an empty word")
    n = len(x)
    return [1 if n - l <= len(y) and x[l:] == y[: n - l] else 0 for l in range(n)]


def correlation_polynomial(x: Sequence[int], y: Sequence[int]):
    """The correlation polynomial (x, y)_z as an IntPolynomial."""
    from .poly import IntPolynomial

    bits = correlation_bits(x, y)
    # b_l multiplies z^(|x|-1-l); ascending order is the reversed bit list
    return IntPolynomial(bits[::-1])


def correlation_value(x: Sequence[int], y: Sequence[int], z):
    """(x, y)_z evaluated at a number z."""
    bits = correlation_bits(x, y)
    acc = 0 * z
    for b in bits:
        acc = acc * z + b
    return acc


def contains_forbidden(spec: ShiftSpec, w: Sequence[int]) -> bool:
    w = tuple(w)
    return any(is_factor(a, w) for a in spec.forbidden)


class _SuffixChecker:
    """Fast test of whether some forbidden word is a suffix of a word."""

    def __init__(self, forbidden):
        self.by_len = {}
        for a in forbidden:
            self.by_len.setdefault(len(a), set()).add(tuple(a))

    def ends_forbidden(self, w: tuple) -> bool:
        n = len(w)
        for m, group in self.by_len.items():
            if m <= n and w[n - m:] in group:
                return True
        return False


def enumerate_allowed_words(spec: ShiftSpec, n: int) -> list:
    """All length-n words with no forbidden factor, in lexicographic order."""
    if n < 0:
        raise ValueError("n must be >= 0")
    check = _SuffixChecker(spec.forbidden)
    level = [()]
    for _ in range(n):
        nxt = []
        for w in level:
            for b in range(spec.q):
                wb = w + (b,)
                if not check.ends_forbidden(wb):
                    nxt.append(wb)
        level = nxt
    return level


@dataclass(frozen=True)
class AdjacencyMatrix:
    labels: tuple
    entries: np.ndarray

    @property
    def size(self) -> int:
        return len(self.labels)

    def index(self) -> dict:
        return {lab: k for k, lab in enumerate(self.labels)}

    def successors(self) -> list:
        return [np.flatnonzero(row).tolist() for row in self.entries]


def build_adjacency(spec: ShiftSpec) -> AdjacencyMatrix:
    if spec.is_full_shift:
        labels = tuple((c,) for c in range(spec.q))
        return AdjacencyMatrix(labels, np.ones((spec.q, spec.q), dtype=np.int64))
    labels = tuple(enumerate_allowed_words(spec, spec.p - 1))
    if not labels:
        raise EmptyShift("no allowed word of length p-1")
    pos = {lab: k for k, lab in enumerate(labels)}
    check = _SuffixChecker(spec.forbidden)
    A = np.zeros((len(labels), len(labels)), dtype=np.int64)
    for i, x in enumerate(labels):
        for b in range(spec.q):
            y = x[1:] + (b,)
            j = pos.get(y)
            # x and y are allowed, so only a forbidden suffix of x.b can spoil the edge
            if j is not None and not check.ends_forbidden(x + (b,)):
                A[i, j] = 1
    return AdjacencyMatrix(labels, A)


def has_cycle(adj) -> bool:
    """True iff the transition graph carries an infinite path (A is not nilpotent)."""
    succ = adj.successors() if isinstance(adj, AdjacencyMatrix) else adj
    n = len(succ)
    indeg = [0] * n
    for outs in succ:
        for v in outs:
            indeg[v] += 1
    stack = [i for i in range(n) if indeg[i] == 0]
    seen = 0
    while stack:
        u = stack.pop()
        seen += 1
        for v in succ[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                stack.append(v)
    return seen < n


@dataclass(frozen=True)
class GraphAnalysis:
    irreducible: bool
    period: int
    primitive: bool


def _bfs(succ, start):
    level = {start: 0}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for v in succ[u]:
            if v not in level:
                level[v] = level[u] + 1
                queue.append(v)
    return level


def analyze_graph(adj) -> GraphAnalysis:
    """Strong connectivity and period of a square (0,1) matrix."""
    A = np.asarray(adj.entries if isinstance(adj, AdjacencyMatrix) else adj)
    n = A.shape[0]
    if n == 0:
        return GraphAnalysis(False, 1, False)
    succ = [np.flatnonzero(A[i]).tolist() for i in range(n)]
    pred = [np.flatnonzero(A[:, j]).tolist() for j in range(n)]
    fwd = _bfs(succ, 0)
    irreducible = len(fwd) == n and len(_bfs(pred, 0)) == n
    if not irreducible:
        return GraphAnalysis(False, 1, False)
    period = 0
    for u in range(n):
        for v in succ[u]:
            period = gcd(period, fwd[u] + 1 - fwd[v])
    period = abs(period) or 1
    return GraphAnalysis(True, period, period == 1)
