"""Parry measure of cylinders, escape rates into holes, local escape rates."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import mpmath

from .errors import (
    EmptyHole,
    EmptyShift,
    EntropyNotPositive,
    HoleEmptiesShift,
    HoleWordForbidden,
    LengthOneForbiddenWord,
    NotIrreducible,
    NotPrimitive,
    NotReduced,
    PointNotInShift,
    SymbolOutOfRange,
)
from .spectral import SpectralReport, perron_root_mp
from .words import ShiftSpec, as_word, build_adjacency, contains_forbidden, has_cycle, is_factor, validate_spec

ENTROPY_TOL = 1e-9


def _require_positive_entropy(report: SpectralReport):
    if not report.irreducible:
        raise NotIrreducible("the Parry measure needs an irreducible shift")
    if report.theta <= 1 + ENTROPY_TOL:
        raise EntropyNotPositive(f"theta = {report.theta} gives zero entropy")


def parry_measure(report: SpectralReport, w: Sequence[int]) -> float:
    """mu(C_w) from the closed-form eigenvectors; 0 for words with a forbidden factor."""
    _require_positive_entropy(report)
    spec = report.spec
    w = as_word(w)
    if any(not 0 <= c < spec.q for c in w):
        raise SymbolOutOfRange(f"word {list(w)} leaves the alphabet")
    if contains_forbidden(spec, w):
        return 0.0
    idx = report.label_index()
    p = spec.p
    denom = report.one_plus_rprime

    def cylinder(word):
        n = len(word)
        if n >= p:
            ux = report.u[idx[word[: p - 1]]]
            vy = report.v[idx[word[n - p + 1:]]]
            return float(ux * vy / (report.theta ** n * denom))
        total = 0.0
        for b in range(spec.q):
            wb = word + (b,)
            if not contains_forbidden(spec, wb[-p:]):
                total += cylinder(wb)
        return total

    if not w:
        return 1.0
    return cylinder(w)


# ------------------------------------------------------------ escape rate

def union_spec(spec: ShiftSpec, hole: Iterable) -> ShiftSpec:
    """Forbid the hole words too, keeping the collection reduced.

    Forbidden words that contain a hole word are dropped; a hole word that
    contains a forbidden word is an error.
    """
    G = [as_word(g) for g in hole]
    if not G:
        raise EmptyHole("the hole needs at least one word")
    for g in G:
        if any(not 0 <= c < spec.q for c in g):
            raise SymbolOutOfRange(f"hole word {list(g)} leaves the alphabet")
        if len(g) == 1:
            raise LengthOneForbiddenWord(f"hole word {list(g)} has length 1", word=list(g))
        if contains_forbidden(spec, g):
            raise HoleWordForbidden(f"hole word {list(g)} is not allowed", word=list(g))
    for i, g in enumerate(G):
        for j, h in enumerate(G):
            if i != j and is_factor(g, h):
                raise NotReduced(f"hole word {list(g)} is a subword of {list(h)}", pair=[list(g), list(h)])
    kept = [a for a in spec.forbidden if not any(is_factor(g, a) for g in G)]
    return validate_spec(spec.q, kept + G)


def escape_rate(spec: ShiftSpec, hole: Iterable, theta=None) -> float:
    """ln(theta / lambda) with lambda the Perron root of the shift with the hole forbidden."""
    union = union_spec(spec, hole)
    try:
        adj = build_adjacency(union)
    except EmptyShift as exc:
        raise HoleEmptiesShift("forbidding the hole leaves no allowed word") from exc
    if not has_cycle(adj):
        raise HoleEmptiesShift("forbidding the hole leaves no infinite sequence")
    if theta is None:
        theta = perron_root_mp(spec)
    lam = perron_root_mp(union)
    with mpmath.workdps(50):
        return float(mpmath.log(mpmath.mpf(theta) / lam))


# ------------------------------------------------------- local escape rate

def _failure(w: Sequence[int]) -> list:
    """KMP prefix function: pi[k] is the longest proper border of w[:k+1]."""
    pi = [0] * len(w)
    k = 0
    for i in range(1, len(w)):
        while k and w[i] != w[k]:
            k = pi[k - 1]
        if w[i] == w[k]:
            k += 1
        pi[i] = k
    return pi


def primitive_period(w: Sequence[int]) -> int:
    """Length of the shortest u with w = u^k."""
    n = len(w)
    m = n - _failure(w)[-1]
    return m if n % m == 0 else n


@dataclass(frozen=True)
class EventuallyPeriodicPoint:
    """preperiod . cycle . cycle . ...; ``cycle=None`` marks a non-periodic point
    known only through the finite prefix stored in ``preperiod``."""

    preperiod: tuple = ()
    cycle: Optional[tuple] = None

    @classmethod
    def periodic(cls, cycle, preperiod=()):
        cycle = as_word(cycle)
        if not cycle:
            raise ValueError("cycle must be nonempty")
        return cls(as_word(preperiod), cycle)

    @classmethod
    def aperiodic(cls, prefix):
        return cls(as_word(prefix), None)

    def prefix(self, n: int) -> tuple:
        if self.cycle is None:
            if n > len(self.preperiod):
                raise ValueError(f"only {len(self.preperiod)} symbols of the point are known")
            return self.preperiod[:n]
        out = list(self.preperiod[:n])
        while len(out) < n:
            out.extend(self.cycle)
        return tuple(out[:n])

    def minimal_period(self) -> Optional[int]:
        """Least m with shift^m(alpha) = alpha, or None when alpha is not purely periodic."""
        if self.cycle is None:
            return None
        m = primitive_period(self.cycle)
        pre = len(self.preperiod)
        probe = self.prefix(pre + m)
        if all(probe[i] == probe[i + m] for i in range(pre)):
            return m
        return None


def _check_point(spec: ShiftSpec, alpha: EventuallyPeriodicPoint):
    if alpha.cycle is None:
        window = alpha.preperiod
    else:
        reps = -(-(spec.p + len(alpha.cycle)) // len(alpha.cycle)) + 1
        window = alpha.prefix(len(alpha.preperiod) + reps * len(alpha.cycle))
    if any(not 0 <= c < spec.q for c in window) or contains_forbidden(spec, window):
        raise PointNotInShift("the point contains a forbidden word")


def local_escape_rate(report: SpectralReport, alpha: EventuallyPeriodicPoint) -> float:
    """1 - theta^(-m) for a point of minimal period m, else 1."""
    if report.theta <= 1 + ENTROPY_TOL:
        raise EntropyNotPositive(f"theta = {report.theta} gives zero entropy")
    _check_point(report.spec, alpha)
    m = alpha.minimal_period()
    if m is None:
        return 1.0
    return 1.0 - report.theta ** (-m)


def g_alpha(report: SpectralReport, alpha: EventuallyPeriodicPoint) -> float:
    return 1.0 / local_escape_rate(report, alpha)


def local_escape_convergence(report: SpectralReport, alpha, n_max: int) -> list:
    """t_n = theta^(1-n) (w^n, w^n)_theta for n = 1..n_max, w^n the n-prefix of alpha.

    Every border of w^n of length n - l contributes theta^(-l); borders are
    read off one prefix-function pass over the first n_max symbols.
    """
    if not isinstance(alpha, EventuallyPeriodicPoint):
        alpha = EventuallyPeriodicPoint.aperiodic(alpha)
    spec = report.spec
    _check_point(spec, alpha)
    w = alpha.prefix(n_max)
    if contains_forbidden(spec, w):
        raise PointNotInShift("the prefix contains a forbidden word")
    pi = _failure(w)
    inv = 1.0 / report.theta
    out = []
    for n in range(1, n_max + 1):
        t = 1.0
        b = pi[n - 1]
        while b:
            t += inv ** (n - b)
            b = pi[b - 1]
        out.append(t)
    return out


# ------------------------------------------------------------ path counts

def path_count_asymptotics(report: SpectralReport, x, y) -> float:
    """lim f_{x,y}(n) / theta^n for words of length n starting with x, ending with y."""
    if not report.primitive:
        raise NotPrimitive("path-count asymptotics need a primitive shift")
    if report.theta <= 1 + ENTROPY_TOL:
        raise EntropyNotPositive(f"theta = {report.theta} gives zero entropy")
    idx = report.label_index()
    x, y = as_word(x), as_word(y)
    p = report.spec.p
    return float(report.v[idx[x]] * report.u[idx[y]] / (report.theta ** (2 * p - 2) * report.one_plus_rprime))


def exact_path_counts(report: SpectralReport, x, n: int) -> dict:
    """f_{x,y}(n) for every label y, by exact integer powers of A."""
    adj = report.adjacency
    idx = report.label_index()
    p = report.spec.p
    k = n - p + 1
    if k < 0:
        raise ValueError("n must be at least p - 1")
    row = [0] * adj.size
    row[idx[as_word(x)]] = 1
    succ = adj.successors()
    for _ in range(k):
        nxt = [0] * adj.size
        for i, c in enumerate(row):
            if c:
                for j in succ[i]:
                    nxt[j] += c
        row = nxt
    return {lab: row[j] for j, lab in enumerate(adj.labels)}
