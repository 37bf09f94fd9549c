"""Exact polynomials over the integers, polynomial matrices, and root finding.

All construction is exact (Python ints). Floating point appears only in
``all_roots``, ``polish_real_root``, ``deflate_at`` and evaluation.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np

from .errors import NoConvergence, NotARoot, NumericFailure, ZeroDenominator

ROOT_TOL = 1e-10
SINGULAR_TOL = 1e-8


# raw coefficient-tuple helpers, ascending degree, no trailing zeros

def _trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _add(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, v in enumerate(b):
        out[i] += v
    return _trim(out)


def _sub(a, b):
    out = list(a) + [0] * max(0, len(b) - len(a))
    for i, v in enumerate(b):
        out[i] -= v
    return _trim(out)


def _mul(a, b):
    if not a or not b:
        return ()
    if len(a) == 1:
        return _trim(a[0] * v for v in b)
    if len(b) == 1:
        return _trim(b[0] * v for v in a)
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _scale(a, k):
    return _trim(k * v for v in a) if k else ()


def _divexact(a, b):
    """a / b over Z[z]; raises if the quotient is not an integer polynomial."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if not a:
        return ()
    if len(b) == 1:
        d = b[0]
        out = []
        for v in a:
            qv, rv = divmod(v, d)
            if rv:
                raise ArithmeticError("inexact polynomial division")
            out.append(qv)
        return tuple(out)
    rem = list(a)
    db = len(b) - 1
    lead = b[-1]
    nq = len(a) - len(b) + 1
    if nq <= 0:
        raise ArithmeticError("inexact polynomial division")
    quot = [0] * nq
    for k in range(nq - 1, -1, -1):
        c, r = divmod(rem[k + db], lead)
        if r:
            raise ArithmeticError("inexact polynomial division")
        quot[k] = c
        if c:
            for j in range(db + 1):
                rem[k + j] -= c * b[j]
    if any(rem[:db]):
        raise ArithmeticError("inexact polynomial division")
    return tuple(quot)


def _pseudo_rem(a, b):
    """prem(a, b) = lc(b)^(deg a - deg b + 1) * a mod b, exact over Z."""
    rem = list(a)
    db = len(b) - 1
    lead = b[-1]
    e = len(a) - len(b) + 1
    while len(rem) - 1 >= db and rem:
        k = len(rem) - 1 - db
        c = rem[-1]
        rem = [lead * v for v in rem]
        for j in range(db + 1):
            rem[k + j] -= c * b[j]
        rem.pop()
        e -= 1
        while rem and rem[-1] == 0:
            rem.pop()
    if e > 0:
        rem = [v * lead ** e for v in rem]
    return _trim(rem)


def horner(coeffs, x):
    """Evaluate ascending coefficients at x."""
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


class IntPolynomial:
    """Polynomial with exact integer coefficients in ascending order."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[int] = ()):
        self.coeffs = _trim(int(c) for c in coeffs)

    @classmethod
    def _raw(cls, coeffs):
        p = cls.__new__(cls)
        p.coeffs = coeffs
        return p

    @classmethod
    def monomial(cls, k: int, c: int = 1):
        return cls._raw(_trim([0] * k + [c]))

    @classmethod
    def const(cls, c: int):
        return cls._raw(_trim([c]))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, int):
            other = IntPolynomial.const(other)
        return isinstance(other, IntPolynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"IntPolynomial({list(self.coeffs)})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            mono = "" if k == 0 else ("z" if k == 1 else f"z^{k}")
            if mono and abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}{mono}"
            terms.append(("-" if c < 0 else "+", body))
        head = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        return head + "".join(f" {s} {b}" for s, b in terms[1:])

    @staticmethod
    def _coerce(other):
        if isinstance(other, IntPolynomial):
            return other.coeffs
        if isinstance(other, int):
            return _trim([other])
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else IntPolynomial._raw(_add(self.coeffs, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else IntPolynomial._raw(_sub(self.coeffs, o))

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else IntPolynomial._raw(_sub(o, self.coeffs))

    def __neg__(self):
        return IntPolynomial._raw(tuple(-v for v in self.coeffs))

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else IntPolynomial._raw(_mul(self.coeffs, o))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = (1,)
        base = self.coeffs
        while k:
            if k & 1:
                out = _mul(out, base)
            base = _mul(base, base)
            k >>= 1
        return IntPolynomial._raw(out)

    def exact_div(self, other: "IntPolynomial") -> "IntPolynomial":
        return IntPolynomial._raw(_divexact(self.coeffs, self._coerce(other)))

    def shift(self, k: int) -> "IntPolynomial":
        """Multiply by z^k; negative k divides and must be exact."""
        if k >= 0 or not self.coeffs:
            return IntPolynomial._raw(((0,) * k + self.coeffs) if self.coeffs else ())
        if any(self.coeffs[:-k]):
            raise ArithmeticError("shift would drop nonzero coefficients")
        return IntPolynomial._raw(self.coeffs[-k:])

    def z_valuation(self) -> int:
        """Multiplicity of the root z = 0."""
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        return 0

    def content(self) -> int:
        g = 0
        for c in self.coeffs:
            g = math.gcd(g, c)
        return g

    def primitive_part(self) -> "IntPolynomial":
        """Divide by the content and make the leading coefficient positive."""
        if not self.coeffs:
            return self
        g = self.content()
        if self.coeffs[-1] < 0:
            g = -g
        return IntPolynomial._raw(tuple(c // g for c in self.coeffs))

    def derivative(self) -> "IntPolynomial":
        return IntPolynomial._raw(_trim(k * c for k, c in enumerate(self.coeffs) if k))

    def __call__(self, x):
        """Horner evaluation; works for int, float, complex, Fraction or mpmath values."""
        return horner(self.coeffs, x)

    def eval_derivative(self, x):
        return self.derivative()(x)

    def scale(self) -> float:
        """Sum of absolute coefficients, the reference size for residual tests."""
        return float(sum(abs(c) for c in self.coeffs)) or 1.0

    def to_list(self) -> list:
        return list(self.coeffs)


ZERO = IntPolynomial()
ONE = IntPolynomial([1])
Z = IntPolynomial([0, 1])


def eval_poly(p: IntPolynomial, x):
    return p(x)


def eval_derivative(p: IntPolynomial, x):
    return p.eval_derivative(x)


def int_poly_gcd(a: IntPolynomial, b: IntPolynomial) -> IntPolynomial:
    """Primitive gcd over Z[z] by the subresultant PRS.

    A common power of z is split off first; correlation-derived polynomials
    often carry large ones, which would otherwise cost a long remainder chain.
    """
    if a.is_zero() and b.is_zero():
        raise ValueError("gcd(0, 0) is undefined")
    if a.is_zero():
        return b.primitive_part()
    if b.is_zero():
        return a.primitive_part()
    k = min(a.z_valuation(), b.z_valuation())
    A = a.shift(-a.z_valuation()).coeffs
    B = b.shift(-b.z_valuation()).coeffs
    if len(A) < len(B):
        A, B = B, A
    A = IntPolynomial._raw(A).primitive_part().coeffs
    B = IntPolynomial._raw(B).primitive_part().coeffs
    g = h = 1
    while True:
        delta = len(A) - len(B)
        R = _pseudo_rem(A, B)
        if not R:
            break
        if len(R) == 1:
            B = (1,)
            break
        A, B = B, tuple(v // (g * h ** delta) for v in R)
        g = A[-1]
        # h <- g^delta / h^(delta-1), exact by the subresultant theorem
        h = g ** delta // h ** (delta - 1) if delta else h
    return IntPolynomial._raw(B).primitive_part().shift(k)


class RationalFn:
    """numerator / denominator with a positive-leading denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: IntPolynomial, den: IntPolynomial):
        if den.is_zero():
            raise ZeroDenominator("denominator is identically zero")
        if den.lead < 0:
            num, den = -num, -den
        self.num = num
        self.den = den

    def __repr__(self):
        return f"RationalFn(({self.num}) / ({self.den}))"

    def __eq__(self, other):
        return (
            isinstance(other, RationalFn)
            and self.num == other.num
            and self.den == other.den
        )

    def __call__(self, x):
        return self.num(x) / self.den(x)

    def derivative_at(self, x):
        """Quotient rule at x."""
        n, d = self.num(x), self.den(x)
        dn, dd = self.num.eval_derivative(x), self.den.eval_derivative(x)
        return (dn * d - n * dd) / (d * d)


def reduce(r: RationalFn) -> RationalFn:
    """Cancel the gcd and normalise so the denominator is primitive-positive.

    The integer content common to both parts is cancelled as well.
    """
    num, den = r.num, r.den
    if den.is_zero():
        raise ZeroDenominator("denominator is identically zero")
    if num.is_zero():
        return RationalFn(ZERO, ONE)
    g = int_poly_gcd(num, den)
    if g.degree > 0:
        num, den = num.exact_div(g), den.exact_div(g)
    c = math.gcd(num.content(), den.content())
    if den.lead < 0:
        c = -c
    if abs(c) != 1:
        num = IntPolynomial._raw(tuple(v // c for v in num.coeffs))
        den = IntPolynomial._raw(tuple(v // c for v in den.coeffs))
    elif c == -1:
        num, den = -num, -den
    return RationalFn(num, den)


# ---------------------------------------------------------------- matrices

class PolyMatrix:
    """Square matrix of IntPolynomials (rows of lists)."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        rows = [[e if isinstance(e, IntPolynomial) else IntPolynomial.const(e) for e in r] for r in rows]
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("PolyMatrix must be square")
        self.rows = rows

    @property
    def size(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        return isinstance(other, PolyMatrix) and self.rows == other.rows

    def __repr__(self):
        return "PolyMatrix(" + repr([[str(e) for e in r] for r in self.rows]) + ")"

    def transpose(self) -> "PolyMatrix":
        n = self.size
        return PolyMatrix([[self.rows[j][i] for j in range(n)] for i in range(n)])

    def matmul(self, other: "PolyMatrix") -> "PolyMatrix":
        n = self.size
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = ()
                for k in range(n):
                    acc = _add(acc, _mul(self.rows[i][k].coeffs, other.rows[k][j].coeffs))
                row.append(IntPolynomial._raw(acc))
            out.append(row)
        return PolyMatrix(out)

    def entry_sum(self) -> IntPolynomial:
        acc = ()
        for r in self.rows:
            for e in r:
                acc = _add(acc, e.coeffs)
        return IntPolynomial._raw(acc)

    def row_sums(self) -> list:
        out = []
        for r in self.rows:
            acc = ()
            for e in r:
                acc = _add(acc, e.coeffs)
            out.append(IntPolynomial._raw(acc))
        return out

    def col_sums(self) -> list:
        return self.transpose().row_sums()

    def evaluate(self, x) -> np.ndarray:
        return np.array([[e(x) for e in r] for r in self.rows])


def _cofactor_det(m):
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return _sub(_mul(m[0][0], m[1][1]), _mul(m[0][1], m[1][0]))
    acc = ()
    for j in range(n):
        if not m[0][j]:
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = _mul(m[0][j], _cofactor_det(minor))
        acc = _add(acc, term) if j % 2 == 0 else _sub(acc, term)
    return acc


def _bareiss_det(m):
    a = [list(r) for r in m]
    n = len(a)
    sign = 1
    prev = (1,)
    for k in range(n - 1):
        if not a[k][k]:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return ()
        piv = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            for j in range(k + 1, n):
                t = _sub(_mul(piv, a[i][j]), _mul(aik, a[k][j]))
                a[i][j] = _divexact(t, prev) if prev != (1,) else t
        prev = piv
    d = a[n - 1][n - 1]
    return d if sign > 0 else tuple(-v for v in d)


def polymatrix_determinant(m: PolyMatrix) -> IntPolynomial:
    """Exact determinant: cofactor expansion up to 4x4, fraction-free Bareiss above."""
    raw = [[e.coeffs for e in r] for r in m.rows]
    if m.size == 0:
        return ONE
    if m.size <= 4:
        return IntPolynomial._raw(_cofactor_det(raw))
    return IntPolynomial._raw(_bareiss_det(raw))


def _bareiss_jordan(m):
    """Fraction-free Gauss-Jordan on [m | I].

    Returns (det, adj) as raw tuples, or None if m is singular.
    """
    n = len(m)
    a = [list(r) + [(1,) if i == j else () for j in range(n)] for i, r in enumerate(m)]
    width = 2 * n
    sign = 1
    prev = (1,)
    for k in range(n):
        if not a[k][k]:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return None
        piv = a[k][k]
        rowk = a[k]
        for i in range(n):
            if i == k:
                continue
            ai = a[i]
            aik = ai[k]
            for j in range(width):
                if j == k:
                    continue
                t = _mul(piv, ai[j])
                if aik and rowk[j]:
                    t = _sub(t, _mul(aik, rowk[j]))
                ai[j] = _divexact(t, prev) if prev != (1,) else t
            ai[k] = ()
        prev = piv
    # left block is d*I with d = sign*det, right block is d * m^{-1}
    d = prev
    adj = [[a[i][n + j] for j in range(n)] for i in range(n)]
    if sign < 0:
        d = tuple(-v for v in d)
        adj = [[tuple(-v for v in e) for e in r] for r in adj]
    return d, adj


def polymatrix_adjugate(m: PolyMatrix) -> PolyMatrix:
    """Adjugate with m . adj(m) = det(m) . I exactly."""
    n = m.size
    if n == 1:
        return PolyMatrix([[ONE]])
    raw = [[e.coeffs for e in r] for r in m.rows]
    res = _bareiss_jordan(raw)
    if res is not None:
        _, adj = res
        return PolyMatrix([[IntPolynomial._raw(e) for e in r] for r in adj])
    # singular: fall back to signed minors
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [row[:j] + row[j + 1:] for k, row in enumerate(raw) if k != i]
            d = _bareiss_det(minor) if len(minor) > 4 else _cofactor_det(minor)
            out[j][i] = IntPolynomial._raw(d if (i + j) % 2 == 0 else tuple(-v for v in d))
    return PolyMatrix(out)


def det_and_adjugate(m: PolyMatrix):
    """Both at once from a single elimination when m is nonsingular."""
    n = m.size
    if n == 1:
        return m.rows[0][0], PolyMatrix([[ONE]])
    raw = [[e.coeffs for e in r] for r in m.rows]
    res = _bareiss_jordan(raw)
    if res is None:
        return ZERO, polymatrix_adjugate(m)
    d, adj = res
    return IntPolynomial._raw(d), PolyMatrix([[IntPolynomial._raw(e) for e in r] for r in adj])


# ------------------------------------------------------------ root finding

def _float_coeffs(p: IntPolynomial):
    """Coefficients as floats, rescaled by a power of two if they overflow."""
    big = max(abs(c) for c in p.coeffs)
    shift = max(0, big.bit_length() - 1000)
    return [float(Fraction(c, 1 << shift)) for c in p.coeffs]


def _residual_ok(p: IntPolynomial, root: complex, tol: float) -> bool:
    with mpmath.workdps(40):
        x = mpmath.mpc(root)
        val = abs(p(x))
        scale = sum(abs(c) * abs(x) ** k for k, c in enumerate(p.coeffs))
        return val <= tol * scale


def _newton_complex(p: IntPolynomial, x0: complex, steps: int = 60) -> complex:
    dp = p.derivative()
    with mpmath.workdps(40):
        x = mpmath.mpc(x0)
        for _ in range(steps):
            d = dp(x)
            if d == 0:
                break
            step = p(x) / d
            x -= step
            if abs(step) <= mpmath.mpf(10) ** -30 * max(1, abs(x)):
                break
        return complex(x)


def all_roots(p: IntPolynomial, tol: float = ROOT_TOL) -> list:
    """All complex roots with multiplicity, from companion-matrix eigenvalues.

    LAPACK balances the companion matrix before the QR iteration. Roots whose
    backward error exceeds ``tol`` get Newton refinement in extended precision.
    """
    if p.degree < 1:
        raise ValueError("all_roots needs degree >= 1")
    k = p.z_valuation()
    roots = [0j] * k
    core = p.shift(-k)
    if core.degree >= 1:
        c = _float_coeffs(core)
        lead = c[-1]
        n = core.degree
        comp = np.zeros((n, n))
        comp[1:, :-1] = np.eye(n - 1)
        comp[:, -1] = [-v / lead for v in c[:-1]]
        eig = np.linalg.eigvals(comp)
        for r in eig:
            r = complex(r)
            if not _residual_ok(core, r, tol):
                r = _newton_complex(core, r)
                # clustered roots may only reach sqrt accuracy; accept a looser bound
                if not _residual_ok(core, r, max(tol, 1e-6)):
                    raise NumericFailure(f"root {r} fails the residual test", root=str(r))
            roots.append(r)
    return roots


def polish_real_root(p: IntPolynomial, x0: float, rel_tol: float = 1e-13, lo=None, hi=None) -> float:
    """Newton in 50-digit arithmetic; bisection on a sign-change bracket if Newton stalls."""
    return float(polish_real_root_mp(p, x0, rel_tol, lo, hi))


def polish_real_root_mp(p: IntPolynomial, x0, rel_tol: float = 1e-13, lo=None, hi=None):
    dp = p.derivative()
    with mpmath.workdps(50):
        x = mpmath.mpf(x0)
        fx = abs(p(x))
        for _ in range(200):
            d = dp(x)
            if d == 0:
                break
            nx = x - p(x) / d
            fn = abs(p(nx))
            if fn > fx and fx != 0:
                break
            done = abs(nx - x) <= mpmath.mpf(10) ** -40 * max(1, abs(nx))
            x, fx = nx, fn
            if done or fx == 0:
                return +x
        # bisection fallback on a bracket around x0
        if lo is None or hi is None:
            w = max(abs(mpmath.mpf(x0)) * 1e-6, mpmath.mpf(1e-9))
            lo, hi = mpmath.mpf(x0) - w, mpmath.mpf(x0) + w
            for _ in range(60):
                if mpmath.sign(p(lo)) * mpmath.sign(p(hi)) <= 0:
                    break
                lo, hi = lo - w, hi + w
                w *= 2
            else:
                raise NoConvergence(f"no bracketing interval near {x0}")
        lo, hi = mpmath.mpf(lo), mpmath.mpf(hi)
        flo = mpmath.sign(p(lo))
        if flo * mpmath.sign(p(hi)) > 0:
            raise NoConvergence(f"interval [{lo}, {hi}] does not bracket a root")
        for _ in range(400):
            mid = (lo + hi) / 2
            fm = mpmath.sign(p(mid))
            if fm == 0:
                return mid
            if fm == flo:
                lo = mid
            else:
                hi = mid
            if hi - lo <= rel_tol * 1e-3 * max(1, abs(mid)):
                break
        return (lo + hi) / 2


def deflate_at(coeffs, x0, tol: float = SINGULAR_TOL):
    """Synthetic division of a real-coefficient polynomial by (z - x0).

    ``coeffs`` are ascending; returns (quotient coefficients, remainder). The
    remainder must be within ``tol`` times the coefficient scale of the input.
    """
    c = list(coeffs)
    if isinstance(coeffs, IntPolynomial):
        c = list(coeffs.coeffs)
    n = len(c) - 1
    if n < 1:
        raise NotARoot("cannot deflate a constant")
    q = [0] * n
    acc = c[n]
    for k in range(n - 1, -1, -1):
        q[k] = acc
        acc = c[k] + acc * x0
    rem = acc
    scale = sum(abs(v) * abs(x0) ** k for k, v in enumerate(c)) or 1
    if abs(rem) > tol * scale:
        raise NotARoot(f"{x0} is not a root (residual {float(abs(rem)):.3g})")
    return q, rem
