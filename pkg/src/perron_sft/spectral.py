"""Correlation matrix -> r(z) -> Perron root -> eigenvectors -> normalisation.

Internally the Perron root and the row/column limits are carried as 50-digit
mpmath numbers; reports expose floats.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import mpmath
import numpy as np

from . import poly
from .errors import (
    EmptyShift,
    EntropyNotPositive,
    FullShift,
    LimitUndefined,
    NoRealDominantRoot,
    NotARoot,
    NotIrreducible,
    NumericFailure,
)
from .poly import ONE, ZERO, IntPolynomial, PolyMatrix, RationalFn, Z
from .words import (
    AdjacencyMatrix,
    ShiftSpec,
    analyze_graph,
    build_adjacency,
    has_cycle,
    correlation_bits,
    correlation_polynomial,
    correlation_value,
    enumerate_allowed_words,
)

DPS = 50


def correlation_matrix(words) -> PolyMatrix:
    """Entry (i, j) is (a_j, a_i)_z."""
    return PolyMatrix([[correlation_polynomial(aj, ai) for aj in words] for ai in words])


@dataclass
class CorrelationSystem:
    words: tuple
    M: PolyMatrix
    D: IntPolynomial
    S: IntPolynomial
    r: RationalFn
    rowsums: list
    colsums: list
    route: str = "direct"

    @property
    def s(self) -> int:
        return len(self.words)


def _direct_sums(M: PolyMatrix):
    D, adj = poly.det_and_adjugate(M)
    return D, adj.row_sums(), adj.col_sums()


def _overlap_classes(words):
    """(k, w) pairs that are a proper prefix of one word and a proper suffix of another."""
    prefixes, suffixes = set(), set()
    for a in words:
        for k in range(1, len(a)):
            prefixes.add((k, a[:k]))
            suffixes.add((k, a[len(a) - k:]))
    return sorted(prefixes & suffixes)


def _lowrank_sums(words, p):
    """Determinant and adjugate row/column sums through a Woodbury reduction.

    With d_i = |a_i| - 1 the correlation matrix splits as
    diag(z^d_i) + U(z) V^T, where column (k, w) of U marks words whose
    length-k prefix is w (weight z^(k-1)) and the same column of V marks words
    whose length-k suffix is w. Only the W x W capacitance matrix, scaled by
    z^(p-1) to clear negative powers, is ever eliminated.
    """
    classes = _overlap_classes(words)
    W = len(classes)
    pm1 = p - 1
    d = [len(a) - 1 for a in words]
    dsum = sum(d)
    idx = {c: t for t, c in enumerate(classes)}
    U = []  # per word: list of (class index, exponent k-1)
    V = []  # per word: list of class indices
    for a in words:
        U.append([(idx[(k, a[:k])], k - 1) for k in range(1, len(a)) if (k, a[:k]) in idx])
        V.append([idx[(k, a[len(a) - k:])] for k in range(1, len(a)) if (k, a[len(a) - k:]) in idx])
    K = [[{} for _ in range(W)] for _ in range(W)]
    for t in range(W):
        K[t][t][pm1] = 1
    ctil = [{} for _ in range(W)]
    etil = [{} for _ in range(W)]
    for i in range(len(words)):
        for a_ in V[i]:
            ctil[a_][pm1 - d[i]] = ctil[a_].get(pm1 - d[i], 0) + 1
            for b, e in U[i]:
                ex = pm1 + e - d[i]
                K[a_][b][ex] = K[a_][b].get(ex, 0) + 1
        for b, e in U[i]:
            ex = pm1 - d[i] + e
            etil[b][ex] = etil[b].get(ex, 0) + 1

    def from_dict(dct):
        if not dct:
            return ZERO
        c = [0] * (max(dct) + 1)
        for k, v in dct.items():
            c[k] += v
        return IntPolynomial(c)

    Kt = PolyMatrix([[from_dict(e) for e in row] for row in K])
    ct = [from_dict(e) for e in ctil]
    et = [from_dict(e) for e in etil]
    detK, adjK = poly.det_and_adjugate(Kt)
    y = [sum((adjK[a_, b] * ct[b] for b in range(W)), ZERO) for a_ in range(W)]
    x = [sum((et[a_] * adjK[a_, b] for a_ in range(W)), ZERO) for b in range(W)]
    base = dsum - W * pm1
    rows, cols = [], []
    for i in range(len(words)):
        acc = detK
        for b, e in U[i]:
            acc = acc - y[b].shift(e)
        rows.append(acc.shift(base - d[i]))
        acc = detK
        for a_ in V[i]:
            acc = acc - x[a_]
        cols.append(acc.shift(base - d[i]))
    return detK.shift(base), rows, cols


def correlation_system(spec: ShiftSpec, route: str = "auto") -> CorrelationSystem:
    if spec.is_full_shift:
        raise FullShift("the full shift has no correlation matrix; use the closed forms")
    words = spec.forbidden
    M = correlation_matrix(words)
    if route == "auto":
        route = "lowrank" if len(_overlap_classes(words)) < len(words) else "direct"
    if route == "lowrank":
        D, rows, cols = _lowrank_sums(words, spec.p)
    elif route == "direct":
        D, rows, cols = _direct_sums(M)
    else:
        raise ValueError(f"unknown route {route!r}")
    S = sum(rows, ZERO)
    r = poly.reduce(RationalFn(S, D))
    return CorrelationSystem(words, M, D, S, r, rows, cols, route)


# ------------------------------------------------------------------ roots

def characteristic_numerator(spec: ShiftSpec, sys: Optional[CorrelationSystem]) -> IntPolynomial:
    """(z - q) * den(r) + num(r), i.e. (z-q)D + S with gcd(D, S) cancelled."""
    if sys is None:
        return Z - spec.q
    return (Z - spec.q) * sys.r.den + sys.r.num


def perron_root_mp(spec: ShiftSpec, sys: Optional[CorrelationSystem] = None, tol_root: float = poly.ROOT_TOL):
    if spec.is_full_shift:
        return mpmath.mpf(spec.q)
    if sys is None:
        sys = correlation_system(spec)
    P = characteristic_numerator(spec, sys)
    # repeated zeros (reducible shifts) split under floating point; remove them exactly
    sqf = P.exact_div(poly.int_poly_gcd(P, P.derivative()))
    roots = poly.all_roots(sqf, tol_root)
    # largest modulus first; zeros on the same circle (periodic shifts) tie and
    # the one with the largest real part wins
    rmax = max(abs(c) for c in roots)
    ring = [c for c in roots if abs(c) >= rmax * (1 - 1e-8)]
    top = max(ring, key=lambda c: (c.real, -abs(c.imag)))
    if abs(top) <= 1e-12:
        raise EmptyShift("every zero is 0: no infinite sequence avoids the forbidden words")
    if abs(top.imag) > 1e-8 * max(abs(top), 1e-300) or top.real <= 0:
        raise NoRealDominantRoot(f"dominant zero {top} is not real positive", root=str(top))
    return poly.polish_real_root_mp(sqf, top.real)


def perron_root(spec: ShiftSpec, sys: Optional[CorrelationSystem] = None, tol_root: float = poly.ROOT_TOL) -> float:
    """Largest-modulus zero of (z - q) + r(z)."""
    return float(perron_root_mp(spec, sys, tol_root))


# ----------------------------------------------------------------- limits

def _mp_scale(c, x):
    return sum(abs(v) * abs(x) ** k for k, v in enumerate(c))


def _limit_ratio(num: IntPolynomial, den: IntPolynomial, theta, tol_singular: float = poly.SINGULAR_TOL, budget=None):
    """lim_{z->theta} num/den with exact cancellation first, numeric deflation second."""
    if num.is_zero():
        return mpmath.mpf(0)
    g = poly.int_poly_gcd(num, den)
    if g.degree > 0:
        num, den = num.exact_div(g), den.exact_div(g)
    if budget is None:
        budget = den.degree
    with mpmath.workdps(DPS):
        theta = mpmath.mpf(theta)
        nc = [mpmath.mpf(c) for c in num.coeffs]
        dc = [mpmath.mpf(c) for c in den.coeffs]
        for _ in range(budget + 1):
            dval = poly.horner(dc, theta)
            if abs(dval) > tol_singular * _mp_scale(dc, theta):
                return poly.horner(nc, theta) / dval
            if len(dc) < 2:
                break
            try:
                dc, _ = poly.deflate_at(dc, theta, tol_singular)
                nc, _ = poly.deflate_at(nc, theta, tol_singular)
            except NotARoot as exc:
                raise LimitUndefined(f"limit at {float(theta)} does not exist") from exc
        raise LimitUndefined(f"deflation budget exhausted at {float(theta)}")


def row_col_limits(sys: CorrelationSystem, theta, tol_singular: float = poly.SINGULAR_TOL):
    """R_i(theta) and C_j(theta) as lists of 50-digit numbers."""
    budget = sys.D.degree
    R = [_limit_ratio(n, sys.D, theta, tol_singular, budget) for n in sys.rowsums]
    C = [_limit_ratio(n, sys.D, theta, tol_singular, budget) for n in sys.colsums]
    return R, C


def eigenvectors(spec: ShiftSpec, sys: Optional[CorrelationSystem], theta, labels, limits=None):
    """Left vector u and right vector v aligned with ``labels``."""
    if spec.is_full_shift:
        n = len(labels)
        return np.ones(n), np.ones(n)
    if limits is None:
        limits = row_col_limits(sys, theta)
    R, C = limits
    u, v = [], []
    with mpmath.workdps(DPS):
        th = mpmath.mpf(theta)
        tails = [a[1:] for a in spec.forbidden]
        for x in labels:
            ux = 1 - sum((R[i] * correlation_value(t, x, th) for i, t in enumerate(tails)), mpmath.mpf(0))
            vx = 1 - sum((C[j] * correlation_value(x, a, th) for j, a in enumerate(spec.forbidden)), mpmath.mpf(0))
            u.append(float(ux))
            v.append(float(vx))
    return np.array(u), np.array(v)


def one_plus_rprime(sys: Optional[CorrelationSystem], theta, tol_singular: float = poly.SINGULAR_TOL):
    if sys is None:
        return mpmath.mpf(1)
    r = sys.r
    with mpmath.workdps(DPS):
        th = mpmath.mpf(theta)
        num, den = r.num, r.den
        dval = den(th)
        if abs(dval) > tol_singular * _mp_scale(den.coeffs, th):
            return 1 + r.derivative_at(th)
        # removable singularity: r' = (N'D - ND') / D^2 and both vanish to matching order
        top = num.derivative() * den - num * den.derivative()
        return 1 + _limit_ratio(top, den * den, th, tol_singular)


def normalization(sys: Optional[CorrelationSystem], theta, p: int, irreducible: bool = True,
                  tol: float = 1e-9, tol_singular: float = poly.SINGULAR_TOL) -> float:
    """u^T v in closed form, theta^(p-1) * (1 + r'(theta))."""
    if not irreducible:
        raise NotIrreducible("normalisation needs an irreducible shift")
    if theta <= 1 + tol:
        raise EntropyNotPositive(f"theta = {float(theta)} gives zero entropy")
    with mpmath.workdps(DPS):
        val = mpmath.mpf(theta) ** (p - 1) * one_plus_rprime(sys, theta, tol_singular)
    if val <= 0:
        raise NumericFailure(f"1 + r'(theta) = {float(val)} is not positive")
    return float(val)


# ----------------------------------------------------------------- report

@dataclass
class SpectralReport:
    spec: ShiftSpec
    theta: float
    entropy: float
    irreducible: bool
    primitive: bool
    period: int
    labels: tuple
    u: np.ndarray
    v: np.ndarray
    normalization: Optional[float]
    normalization_note: Optional[str]
    R: list
    C: list
    system: Optional[CorrelationSystem] = field(repr=False, default=None)
    adjacency: Optional[AdjacencyMatrix] = field(repr=False, default=None)
    theta_mp: object = field(repr=False, default=None)
    one_plus_rprime: Optional[float] = None

    @property
    def p(self) -> int:
        return self.spec.p

    def label_index(self) -> dict:
        return {lab: k for k, lab in enumerate(self.labels)}


def analyze(spec: ShiftSpec, tol_root: float = poly.ROOT_TOL, tol_singular: float = poly.SINGULAR_TOL,
            route: str = "auto") -> SpectralReport:
    """Run the whole pipeline on one spec."""
    adj = build_adjacency(spec)
    if not has_cycle(adj):
        raise EmptyShift("no infinite sequence avoids the forbidden words")
    ga = analyze_graph(adj)
    sys = None if spec.is_full_shift else correlation_system(spec, route)
    theta = perron_root_mp(spec, sys, tol_root)
    if sys is None:
        R = C = []
        u, v = eigenvectors(spec, None, theta, adj.labels)
    else:
        R, C = row_col_limits(sys, theta, tol_singular)
        u, v = eigenvectors(spec, sys, theta, adj.labels, (R, C))
    opr = float(one_plus_rprime(sys, theta, tol_singular))
    norm, note = None, None
    try:
        norm = normalization(sys, theta, spec.p, ga.irreducible, tol_singular=tol_singular)
    except (EntropyNotPositive, NotIrreducible) as exc:
        note = f"{exc.code}: {exc}"
    return SpectralReport(
        spec=spec,
        theta=float(theta),
        entropy=float(mpmath.log(theta)),
        irreducible=ga.irreducible,
        primitive=ga.primitive,
        period=ga.period,
        labels=adj.labels,
        u=u,
        v=v,
        normalization=norm,
        normalization_note=note,
        R=[float(x) for x in R],
        C=[float(x) for x in C],
        system=sys,
        adjacency=adj,
        theta_mp=theta,
        one_plus_rprime=opr,
    )


# ----------------------------------------------------------------- series

def _laurent_coeffs(num: IntPolynomial, den: IntPolynomial, n_max: int) -> list:
    """c_0..c_n_max with num(z)/den(z) = sum_n c_n z^(-n) near infinity."""
    if num.is_zero():
        return [0] * (n_max + 1)
    lead_gap = den.degree - num.degree
    if lead_gap < 0:
        raise ValueError("expansion has positive powers of z")
    N = list(reversed(num.coeffs))
    Dn = list(reversed(den.coeffs))
    d0 = Dn[0]
    length = n_max + 1 - lead_gap
    out = [0] * (n_max + 1)
    if length <= 0:
        return out
    ser = []
    for n in range(length):
        acc = Fraction(N[n]) if n < len(N) else Fraction(0)
        for k in range(1, min(n, len(Dn) - 1) + 1):
            acc -= Dn[k] * ser[n - k]
        ser.append(acc / d0)
    for n, c in enumerate(ser):
        if c.denominator != 1:
            raise ArithmeticError("non-integral series coefficient")
        out[n + lead_gap] = int(c)
    return out


def count_series(spec: ShiftSpec, n_max: int, adj: Optional[AdjacencyMatrix] = None) -> list:
    """f(0..n_max): short lengths by enumeration, the rest as entry sums of A^k."""
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    p = spec.p
    out = [len(enumerate_allowed_words(spec, n)) for n in range(min(n_max, p - 2) + 1)]
    if n_max < p - 1:
        return out
    if adj is None:
        adj = build_adjacency(spec)
    succ = adj.successors()
    vec = [1] * adj.size
    for n in range(p - 1, n_max + 1):
        out.append(sum(vec))
        vec = [sum(vec[j] for j in succ[i]) for i in range(adj.size)]
    return out


def _denominator_P(spec: ShiftSpec, sys: CorrelationSystem) -> IntPolynomial:
    return (Z - spec.q) * sys.D + sys.S


def count_series_from_generating_function(spec: ShiftSpec, n_max: int, sys=None) -> list:
    """f(n) read off F(z) = z D / ((z-q) D + S)."""
    if spec.is_full_shift:
        return [spec.q ** n for n in range(n_max + 1)]
    sys = sys or correlation_system(spec)
    return _laurent_coeffs(Z * sys.D, _denominator_P(spec, sys), n_max)


def end_count_series(spec: ShiftSpec, n_max: int, sys=None) -> list:
    """f_i(0..n_max) per forbidden word: one occurrence of a_i, at the very end."""
    sys = sys or correlation_system(spec)
    P = _denominator_P(spec, sys)
    return [_laurent_coeffs(rs, P, n_max) for rs in sys.rowsums]


def begin_count_series(spec: ShiftSpec, n_max: int, sys=None) -> list:
    """g_i(0..n_max) per forbidden word: one occurrence of a_i, at the very start."""
    sys = sys or correlation_system(spec)
    P = _denominator_P(spec, sys)
    return [_laurent_coeffs(cs, P, n_max) for cs in sys.colsums]
