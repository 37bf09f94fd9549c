"""Perron data of a (0,1) digraph matrix through the forbidden 2-word shift.

Vertices are 0-indexed here; the CLI shows them 1-indexed.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyShift, EntropyNotPositive, NotPrimitive, ParseError
from .spectral import SpectralReport, analyze
from .words import ShiftSpec, validate_spec


@dataclass(frozen=True)
class DigraphInput:
    entries: np.ndarray

    def __post_init__(self):
        A = np.asarray(self.entries)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ParseError(f"matrix must be square, got shape {A.shape}")
        if not np.isin(A, (0, 1)).all():
            raise ParseError("matrix entries must be 0 or 1")
        object.__setattr__(self, "entries", A.astype(np.int64))

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def to_spec(self) -> ShiftSpec:
        n = self.n
        A = self.entries
        if (A.sum(axis=1) == 0).any() or (A.sum(axis=0) == 0).any():
            raise EmptyShift("every vertex needs an incoming and an outgoing edge")
        forbidden = [(x, y) for x in range(n) for y in range(n) if A[x, y] == 0]
        return validate_spec(n, forbidden)


def star_matrix(n: int) -> np.ndarray:
    """Undirected star with centre 0 and n-1 leaves."""
    A = np.zeros((n, n), dtype=np.int64)
    A[0, 1:] = 1
    A[1:, 0] = 1
    return A


def digraph_perron(g, **kw) -> SpectralReport:
    if not isinstance(g, DigraphInput):
        g = DigraphInput(np.asarray(g))
    return analyze(g.to_spec(), **kw)


def simplified_eigenvectors(report: SpectralReport):
    """u_x = 1 - sum of R_i over a_i ending in x, v_x = 1 - sum of C_i over a_i starting with x."""
    n = report.spec.q
    if report.spec.is_full_shift:
        return np.ones(n), np.ones(n)
    u = np.ones(n)
    v = np.ones(n)
    for i, a in enumerate(report.spec.forbidden):
        u[a[1]] -= report.R[i]
        v[a[0]] -= report.C[i]
    return u, v


def path_count_estimate(report: SpectralReport, x: int, y: int, k: int) -> float:
    """Asymptotic estimate theta^(k-1) v_x u_y / (1 + r'(theta)) of (A^k)_{xy}.

    Only the ratio to the exact count tends to 1; small k can be far off.
    """
    if not report.primitive:
        raise NotPrimitive("path-count estimates need a primitive matrix")
    if report.theta <= 1 + 1e-9:
        raise EntropyNotPositive(f"theta = {report.theta} gives zero entropy")
    return float(report.theta ** (k - 1) * report.v[x] * report.u[y] / report.one_plus_rprime)
