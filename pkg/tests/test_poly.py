import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from perron_sft import poly
from perron_sft.errors import NotARoot, ZeroDenominator
from perron_sft.poly import (
    IntPolynomial,
    PolyMatrix,
    RationalFn,
    Z,
    _bareiss_det,
    _cofactor_det,
    all_roots,
    deflate_at,
    eval_derivative,
    eval_poly,
    int_poly_gcd,
    polish_real_root,
    polymatrix_adjugate,
    polymatrix_determinant,
    reduce,
)


def P(*c):
    return IntPolynomial(c)


small_polys = st.lists(st.integers(-4, 4), min_size=1, max_size=4).map(IntPolynomial)


@st.composite
def poly_matrices(draw, max_n=4):
    n = draw(st.integers(1, max_n))
    return PolyMatrix([[draw(small_polys) for _ in range(n)] for _ in range(n)])


class TestArithmetic:
    def test_canonical(self):
        assert P(1, 2, 0, 0).coeffs == (1, 2)
        assert P(0, 0).is_zero()

    def test_str(self):
        assert str(Z ** 3 + 2 * Z) == "z^3 + 2z"

    def test_ops(self):
        a = P(-1, 0, 1)
        assert (a.exact_div(P(-1, 1))) == P(1, 1)
        assert a.derivative() == P(0, 2)
        assert a.shift(2) == P(0, 0, -1, 0, 1)

    def test_eval(self):
        assert eval_poly(Z ** 2 + 2, 2) == 6
        assert eval_derivative(Z ** 3, 2) == 12
        # direct expansion gives 141.123... (an earlier quoted value of 139.3 is wrong)
        assert eval_poly(P(1, 1, 1, 1), 4.821125912405385) == pytest.approx(141.12304024983462, rel=1e-14)


class TestDeterminant:
    def test_mixed(self):
        m = PolyMatrix([[Z + 1, 1], [0, Z ** 3 + Z]])
        assert polymatrix_determinant(m) == (Z + 1) * (Z ** 3 + Z)
        assert polymatrix_adjugate(m).entry_sum() == Z ** 3 + 2 * Z

    def test_block(self):
        m = PolyMatrix([[P(1, 1, 1, 1), 0], [P(1, 1, 1), Z ** 3]])
        assert polymatrix_determinant(m) == P(0, 0, 0, 1, 1, 1, 1)
        assert polymatrix_adjugate(m).entry_sum() == 2 * Z ** 3

    def test_one_by_one(self):
        assert polymatrix_determinant(PolyMatrix([[Z]])) == Z
        assert polymatrix_adjugate(PolyMatrix([[Z]])) == PolyMatrix([[1]])

    @given(poly_matrices())
    def test_adjugate_identity(self, m):
        d = polymatrix_determinant(m)
        prod = m.matmul(polymatrix_adjugate(m))
        n = m.size
        for i in range(n):
            for j in range(n):
                assert prod[i, j] == (d if i == j else poly.ZERO)

    @given(poly_matrices(max_n=5))
    def test_bareiss_matches_cofactor(self, m):
        raw = [[e.coeffs for e in r] for r in m.rows]
        assert IntPolynomial._raw(_bareiss_det(raw)) == IntPolynomial._raw(_cofactor_det(raw))


class TestGcd:
    def test_examples(self):
        assert int_poly_gcd(P(-1, 0, 1), P(-1, 1)) == P(-1, 1)
        assert int_poly_gcd(P(1, 1, 1, 1), P(1, 0, 1)) == P(1, 0, 1)
        assert int_poly_gcd(P(2, 4), poly.ZERO) == P(1, 2)

    @given(small_polys, small_polys, small_polys)
    def test_common_factor(self, a, b, c):
        assume(not c.is_zero() and not (a.is_zero() and b.is_zero()))
        g = int_poly_gcd(a * c, b * c)
        assert (a * c).exact_div(g) * g == a * c
        assert (b * c).exact_div(g) * g == b * c
        assert g.degree >= c.degree


class TestReduce:
    def test_examples(self):
        r = reduce(RationalFn(P(-1, 0, 1), P(-1, 1)))
        assert (r.num, r.den) == (P(1, 1), P(1))
        r = reduce(RationalFn(2 * Z ** 3, P(0, 0, 0, 1, 1, 1, 1)))
        assert (r.num, r.den) == (P(2), P(1, 1, 1, 1))
        r = reduce(RationalFn(poly.ZERO, P(1, 1)))
        assert (r.num, r.den) == (poly.ZERO, P(1))

    def test_zero_denominator(self):
        with pytest.raises(ZeroDenominator):
            RationalFn(P(1), poly.ZERO)

    @given(small_polys, small_polys, small_polys)
    def test_value_preserved(self, a, b, c):
        assume(not b.is_zero() and not c.is_zero())
        r0 = RationalFn(a * c, b * c)
        r1 = reduce(r0)
        assert r1.den.lead > 0
        assert int_poly_gcd(r1.num, r1.den).degree == 0 or r1.num.is_zero()
        for x in np.linspace(-2.3, 2.7, 10):
            if abs(r0.den(x)) < 1e-6:
                continue
            assert r1(x) == pytest.approx(r0(x), rel=1e-12, abs=1e-12)


class TestRoots:
    def test_examples(self):
        rs = sorted(all_roots(P(1, -3, 1)), key=lambda c: c.real)
        assert rs[0].real == pytest.approx((3 - math.sqrt(5)) / 2)
        assert rs[1].real == pytest.approx((3 + math.sqrt(5)) / 2)
        assert sorted(r.real for r in all_roots(P(-4, 0, 1))) == pytest.approx([-2, 2])
        assert all_roots(P(-3, 1))[0] == pytest.approx(3)

    def test_zero_roots(self):
        assert sorted(abs(r) for r in all_roots(Z ** 3 * P(-2, 1))) == pytest.approx([0, 0, 0, 2])

    @given(st.lists(st.integers(-5, 5), min_size=3, max_size=9))
    def test_vieta(self, c):
        assume(c[-1] != 0 and c[0] != 0)
        p = IntPolynomial(c)
        rs = all_roots(p)
        assert len(rs) == p.degree
        s = sum(rs)
        assert s.real == pytest.approx(-c[-2] / c[-1], rel=1e-8, abs=1e-8)
        prod = np.prod(rs)
        assert prod.real == pytest.approx((-1) ** p.degree * c[0] / c[-1], rel=1e-8, abs=1e-8)

    def test_polish(self):
        assert polish_real_root(P(1, -3, 1), 2.6) == 2.618033988749895
        assert polish_real_root(P(-3, 1), 2.9) == 3.0
        assert polish_real_root(P(-2, 0, 1), 1.4) == 1.4142135623730951

    def test_polish_double_root_falls_back(self):
        # Newton is only linear at a double root; the answer must still be close
        x = polish_real_root(P(-1, 1) * P(-1, 1) * P(1, 1), 1.1)
        assert abs(x - 1) < 1e-6


class TestDeflate:
    def test_examples(self):
        q, rem = deflate_at([-1, 0, 1], 1.0)
        assert q == [1.0, 1] and rem == 0
        th = 2.618033988749895
        q, _ = deflate_at([1, -3, 1], th)
        assert q[0] == pytest.approx(-(3 - th)) and q[1] == 1
        with pytest.raises(NotARoot):
            deflate_at([1, 1], 0.5)

    @given(st.lists(st.integers(-5, 5), min_size=1, max_size=6), st.floats(-3, 3))
    def test_reconstruct(self, c, x0):
        base = np.array(c, dtype=float)
        full = np.convolve(base, [-x0, 1.0])
        q, rem = deflate_at(list(full), x0)
        back = np.convolve(q, [-x0, 1.0])
        scale = max(1.0, np.abs(full).max())
        assert np.abs(back - full).max() <= 1e-10 * scale
