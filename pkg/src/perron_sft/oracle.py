"""Independent ground truth: enumeration, dense power iteration, bordered determinants.

Nothing here calls the symbolic determinant, gcd, root finder or series code,
so agreement with the spectral pipeline is evidence rather than tautology.
"""
from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import mpmath
import numpy as np

from .errors import (
    BudgetExceeded,
    LimitUndefined,
    NoConvergence,
    NotIrreducible,
    SFTError,
    WordForbidden,
)
from .words import AdjacencyMatrix, ShiftSpec, as_word, correlation_bits

DEFAULT_BUDGET = 1 << 14


def work_budget() -> int:
    env = os.environ.get("PERRON_SFT_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


def _occurrences(w, a):
    m = len(a)
    return [k for k in range(len(w) - m + 1) if w[k:k + m] == a]


# ---------------------------------------------------------------- counting

def brute_force_counts(spec: ShiftSpec, n_max: int, budget: Optional[int] = None) -> dict:
    """f(n), f_i(n), g_i(n) for n <= n_max by scanning every q^n word."""
    budget = work_budget() if budget is None else budget
    if spec.q ** n_max > budget:
        raise BudgetExceeded(f"q^n = {spec.q}^{n_max} exceeds the work budget {budget}", budget=budget)
    s = spec.s
    f = [0] * (n_max + 1)
    fi = [[0] * (n_max + 1) for _ in range(s)]
    gi = [[0] * (n_max + 1) for _ in range(s)]
    for n in range(n_max + 1):
        for w in itertools.product(range(spec.q), repeat=n):
            hits = [(i, k) for i, a in enumerate(spec.forbidden) for k in _occurrences(w, a)]
            if not hits:
                f[n] += 1
            elif len(hits) == 1:
                i, k = hits[0]
                if k + len(spec.forbidden[i]) == n:
                    fi[i][n] += 1
                if k == 0:
                    gi[i][n] += 1
    return {"f": f, "f_i": fi, "g_i": gi}


def _dp_end_counts(q: int, forbidden, n_max: int):
    """f(n) and f_i(n) by a transfer over the last (L-1) symbols, L the longest word."""
    L = max((len(a) for a in forbidden), default=1)
    keep = max(L - 1, 0)

    def bad_suffix(w):
        for i, a in enumerate(forbidden):
            if len(a) <= len(w) and w[len(w) - len(a):] == a:
                return i
        return None

    f = [0] * (n_max + 1)
    fi = [[0] * (n_max + 1) for _ in forbidden]
    states = {(): 1}
    f[0] = 1
    for n in range(1, n_max + 1):
        nxt = {}
        for tail, c in states.items():
            for b in range(q):
                w = tail + (b,)
                i = bad_suffix(w)
                if i is None:
                    key = w[max(len(w) - keep, 0):] if keep else ()
                    nxt[key] = nxt.get(key, 0) + c
                else:
                    fi[i][n] += c
        states = nxt
        f[n] = sum(states.values())
    return f, fi


def dp_counts(spec: ShiftSpec, n_max: int) -> dict:
    """Same tables as brute_force_counts, for lengths out of enumeration reach.

    g_i comes from f_i of the reversed collection.
    """
    f, fi = _dp_end_counts(spec.q, spec.forbidden, n_max)
    _, gi = _dp_end_counts(spec.q, [a[::-1] for a in spec.forbidden], n_max)
    return {"f": f, "f_i": fi, "g_i": gi}


# ------------------------------------------------------------ dense Perron

def _closure(A: np.ndarray) -> np.ndarray:
    n = A.shape[0]
    reach = ((A != 0) | np.eye(n, dtype=bool)).astype(np.int64)
    for _ in range(max(1, math.ceil(math.log2(max(n, 2))))):
        reach = ((reach @ reach) > 0).astype(np.int64)
    return reach.astype(bool)


def _strongly_connected(A: np.ndarray) -> bool:
    return bool(_closure(A).all())


def _perron_vector(B: np.ndarray, tol: float, max_iter: int):
    n = B.shape[0]
    # repeated squaring gives a start vector close to the dominant direction
    P = B / np.abs(B).sum()
    for _ in range(8):
        P = P @ P
        P /= np.abs(P).sum() or 1.0
    x = P @ np.ones(n) + 1e-3
    x /= x.sum()
    lam_old = None
    for _ in range(max_iter):
        y = B @ x
        lam = y.sum() / x.sum()
        y /= y.sum()
        res = np.abs(B @ y - lam * y).max()
        if lam_old is not None and abs(lam - lam_old) <= tol * lam and res <= 1e-13 * lam:
            return lam, y
        x, lam_old = y, lam
    raise NoConvergence("power iteration did not settle")


def dense_perron(adj, require_irreducible: bool = True, tol: float = 1e-12, max_iter: int = 100000):
    """theta_hat, u_hat, v_hat from power iteration on A + I.

    Adding the identity makes an irreducible A primitive, which removes the
    rotation of periodic matrices. v_hat is a right vector, u_hat a left one,
    scaled so that u_hat . v_hat = 1.
    """
    A = np.asarray(adj.entries if isinstance(adj, AdjacencyMatrix) else adj, dtype=float)
    if require_irreducible and not _strongly_connected(A):
        raise NotIrreducible("dense oracle needs an irreducible matrix")
    B = A + np.eye(A.shape[0])
    mu_r, v = _perron_vector(B, tol, max_iter)
    mu_l, u = _perron_vector(B.T.copy(), tol, max_iter)
    theta = 0.5 * (mu_r + mu_l) - 1.0
    u = u / float(u @ v)
    return float(theta), u, v


def dense_spectral_radius(adj) -> float:
    """Largest Perron root over the strongly connected components.

    Works for reducible matrices, where plain power iteration can stall.
    """
    A = np.asarray(adj.entries if isinstance(adj, AdjacencyMatrix) else adj, dtype=float)
    reach = _closure(A)
    mutual = reach & reach.T
    seen = np.zeros(A.shape[0], dtype=bool)
    best = 0.0
    for i in range(A.shape[0]):
        if seen[i]:
            continue
        comp = np.flatnonzero(mutual[i])
        seen[comp] = True
        block = A[np.ix_(comp, comp)]
        if block.sum() == 0:
            continue
        th, _, _ = dense_perron(block, require_irreducible=False)
        best = max(best, th)
    return best


# ----------------------------------------------------- bordered determinant

def _corr_entry(x, y, z: int) -> int:
    acc = 0
    for b in correlation_bits(x, y):
        acc = acc * z + b
    return acc


def _det_and_sum_at(words, z: int):
    """det M(z) and the entry sum of adj M(z) at an integer point, or None if singular."""
    n = len(words)
    M = [[Fraction(_corr_entry(words[j], words[i], z)) for j in range(n)] for i in range(n)]
    rhs = [Fraction(1)] * n
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            return None
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            rhs[c], rhs[piv] = rhs[piv], rhs[c]
            det = -det
        det *= M[c][c]
        for r in range(c + 1, n):
            k = M[r][c] / M[c][c]
            if k:
                for cc in range(c, n):
                    M[r][cc] -= k * M[c][cc]
                rhs[r] -= k * rhs[c]
    x = [Fraction(0)] * n
    for r in range(n - 1, -1, -1):
        x[r] = (rhs[r] - sum(M[r][cc] * x[cc] for cc in range(r + 1, n))) / M[r][r]
    # adj = det * M^{-1}; entry sum of M^{-1} is 1^T M^{-1} 1 = sum(x)
    return det, det * sum(x)


def _interpolate(points, values) -> list:
    """Ascending integer coefficients of the polynomial through the points (Newton form)."""
    n = len(points)
    coef = [Fraction(v) for v in values]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (points[i] - points[i - j])
    out = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        # out = out * (z - points[i]) + coef[i]
        shifted = [Fraction(0)] + out[:-1]
        out = [shifted[k] - points[i] * out[k] for k in range(n)]
        out[0] += coef[i]
    if any(c.denominator != 1 for c in out):
        raise ArithmeticError("interpolated determinant is not integral")
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return [int(c) for c in out]


def det_and_adjsum(words) -> tuple:
    """(D, S) coefficient lists for the correlation matrix of ``words``."""
    words = [tuple(w) for w in words]
    bound = sum(len(w) - 1 for w in words) + 1
    pts, dv, sv = [], [], []
    z = 2
    while len(pts) < bound + 1:
        got = _det_and_sum_at(words, z)
        if got is not None:
            pts.append(z)
            dv.append(got[0])
            sv.append(got[1])
        z += 1
    return _interpolate(pts, dv), _interpolate(pts, sv)


def _pmul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _psub(a, b):
    n = max(len(a), len(b))
    return [(a[k] if k < len(a) else 0) - (b[k] if k < len(b) else 0) for k in range(n)]


def _lhopital(num, den, theta, tol=1e-25):
    """lim num/den at theta, differentiating both until den stops vanishing."""
    with mpmath.workdps(60):
        th = mpmath.mpf(theta)
        nc = [mpmath.mpf(c) for c in num]
        dc = [mpmath.mpf(c) for c in den]
        for _ in range(len(dc)):
            scale = sum(abs(c) * abs(th) ** k for k, c in enumerate(dc))
            dval = mpmath.polyval(dc[::-1], th) if dc else mpmath.mpf(0)
            if scale and abs(dval) > tol * scale:
                return mpmath.polyval(nc[::-1], th) / dval if nc else mpmath.mpf(0)
            nc = [k * c for k, c in enumerate(nc)][1:]
            dc = [k * c for k, c in enumerate(dc)][1:]
    raise LimitUndefined("bordered limit does not exist")


def bordered_product(spec: ShiftSpec, theta, w, base=None) -> float:
    """lim (D S_w - S D_w) / D^2 at theta, from the bordered correlation matrix."""
    w = as_word(w)
    if len(w) < spec.p:
        raise ValueError("bordered word must have length >= p")
    if any(a == w[k:k + len(a)] for a in spec.forbidden for k in range(len(w) - len(a) + 1)):
        raise WordForbidden(f"word {list(w)} is not allowed", word=list(w))
    if base is None:
        base = det_and_adjsum(spec.forbidden)
    D, S = base
    Dw, Sw = det_and_adjsum(list(spec.forbidden) + [w])
    num = _psub(_pmul(D, Sw), _pmul(S, Dw))
    return float(_lhopital(num, _pmul(D, D), theta))


# ------------------------------------------------------------- verification

@dataclass
class OracleReport:
    theta_hat: float
    u_hat: Optional[np.ndarray]
    v_hat: Optional[np.ndarray]
    counts: dict
    discrepancies: list = field(default_factory=list)
    flags: list = field(default_factory=list)
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.discrepancies


def _proportional_spread(a, b):
    ratio = a / b
    med = float(np.median(ratio))
    return float(np.abs(ratio - med).max() / abs(med))


def verify(spec: ShiftSpec, n_count: Optional[int] = None, budget: Optional[int] = None) -> OracleReport:
    """Cross-check the symbolic pipeline against this module; never raises for a failed check."""
    from . import measures, spectral

    budget = work_budget() if budget is None else budget
    rep = OracleReport(theta_hat=float("nan"), u_hat=None, v_hat=None, counts={})

    def check(name, delta, tol):
        rep.checks.append({"check": name, "delta": float(delta), "tol": tol})
        if not delta <= tol:
            rep.discrepancies.append({"check": name, "delta": float(delta), "tol": tol})

    def fail(name, exc):
        rep.discrepancies.append({"check": name, "error": getattr(exc, "code", type(exc).__name__), "message": str(exc)})

    try:
        report = spectral.analyze(spec)
    except SFTError as exc:
        fail("analyze", exc)
        return rep
    if not report.irreducible:
        rep.flags.append("NotIrreducible")

    try:
        if report.irreducible:
            th, uh, vh = dense_perron(report.adjacency)
        else:
            th = dense_spectral_radius(report.adjacency)
        rep.theta_hat = th
        check("theta", abs(report.theta - th) / th, 1e-8)
        if report.irreducible:
            rep.u_hat, rep.v_hat = uh, vh
            check("u_proportional", _proportional_spread(report.u, uh), 1e-7)
            check("v_proportional", _proportional_spread(report.v, vh), 1e-7)
            check("u_positive", 0.0 if (report.u > 0).all() else 1.0, 0.0)
            check("v_positive", 0.0 if (report.v > 0).all() else 1.0, 0.0)
    except SFTError as exc:
        fail("dense_perron", exc)

    A = report.adjacency.entries.astype(float)
    u, v = report.u, report.v
    check("right_residual", np.abs(A @ v - report.theta * v).max() / np.abs(v).max(), 1e-8)
    check("left_residual", np.abs(u @ A - report.theta * u).max() / np.abs(u).max(), 1e-8)

    n_max = n_count
    if n_max is None:
        n_max = max(0, int(math.log(budget) / math.log(spec.q)))
    try:
        counts = brute_force_counts(spec, n_max, budget)
        rep.counts = counts
        f_sym = spectral.count_series(spec, n_max, report.adjacency)
        check("f_series", sum(abs(a - b) for a, b in zip(f_sym, counts["f"])), 0)
        if not spec.is_full_shift:
            fi = spectral.end_count_series(spec, n_max, report.system)
            gi = spectral.begin_count_series(spec, n_max, report.system)
            check("f_i_series", sum(abs(a - b) for x, y in zip(fi, counts["f_i"]) for a, b in zip(x, y)), 0)
            check("g_i_series", sum(abs(a - b) for x, y in zip(gi, counts["g_i"]) for a, b in zip(x, y)), 0)
    except SFTError as exc:
        fail("counts", exc)

    if report.normalization is not None:
        dot = float(u @ v)
        check("normalization", abs(dot - report.normalization) / abs(report.normalization), 1e-8)
        try:
            worst = 0.0
            for w in _allowed_words_upto(spec, spec.p + 1):
                if len(w) == spec.p + 1:
                    continue
                parent = measures.parry_measure(report, w)
                kids = sum(measures.parry_measure(report, w + (b,)) for b in range(spec.q))
                worst = max(worst, abs(parent - kids))
            check("measure_additivity", worst, 1e-10)
        except SFTError as exc:
            fail("measure", exc)
    return rep


def _allowed_words_upto(spec: ShiftSpec, n: int):
    level = [()]
    out = []
    for _ in range(n):
        nxt = []
        for w in level:
            for b in range(spec.q):
                wb = w + (b,)
                if not any(wb[len(wb) - len(a):] == a for a in spec.forbidden if len(a) <= len(wb)):
                    nxt.append(wb)
        out.extend(nxt)
        level = nxt
    return out
