import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from perron_sft.errors import EmptyWord, LengthOneForbiddenWord, NotReduced, SymbolOutOfRange, EmptyAlphabet
from perron_sft.words import (
    analyze_graph,
    as_word,
    build_adjacency,
    contains_forbidden,
    correlation_bits,
    correlation_polynomial,
    correlation_value,
    enumerate_allowed_words,
    has_cycle,
    validate_spec,
)

words = st.lists(st.integers(0, 2), min_size=1, max_size=7).map(tuple)


def W(s):
    return as_word(s)


def strs(ws):
    return ["".join(map(str, w)) for w in ws]


class TestValidate:
    def test_two_word_collection(self):
        spec = validate_spec(2, ["000", "11"])
        assert spec.p == 3 and spec.s == 2

    def test_not_reduced(self):
        with pytest.raises(NotReduced) as ei:
            validate_spec(2, ["00", "000"])
        assert ei.value.details["pair"] == [[0, 0], [0, 0, 0]]

    def test_full_shift(self):
        spec = validate_spec(3, [])
        assert spec.p == 2 and spec.is_full_shift

    def test_errors(self):
        with pytest.raises(SymbolOutOfRange):
            validate_spec(3, ["3"])
        with pytest.raises(SymbolOutOfRange):
            validate_spec(2, ["02"])
        with pytest.raises(LengthOneForbiddenWord):
            validate_spec(2, ["1"])
        with pytest.raises(EmptyAlphabet):
            validate_spec(1, [])
        with pytest.raises(NotReduced):
            validate_spec(2, ["01", "01"])


class TestCorrelation:
    def test_asymmetric_pair(self):
        assert correlation_polynomial(W("101001"), W("10010")).to_list() == [1, 0, 0, 1]
        assert correlation_polynomial(W("10010"), W("101001")).to_list() == [0, 1]

    def test_no_alignment(self):
        assert correlation_polynomial(W("01"), W("22")).is_zero()

    def test_empty(self):
        with pytest.raises(EmptyWord):
            correlation_bits((), (1,))

    @given(words, words)
    def test_degree_and_bits(self, x, y):
        p = correlation_polynomial(x, y)
        assert p.degree <= len(x) - 1
        assert set(p.coeffs) <= {0, 1}

    @given(words)
    def test_self_leading(self, x):
        p = correlation_polynomial(x, x)
        assert p.degree == len(x) - 1 and p.lead == 1

    @given(words, words)
    def test_reversal(self, x, y):
        assert correlation_polynomial(x[::-1], y[::-1]) == correlation_polynomial(y, x)

    @given(words, words, st.floats(-3, 3))
    def test_value_matches_poly(self, x, y, z):
        assert correlation_value(x, y, z) == pytest.approx(correlation_polynomial(x, y)(z), abs=1e-9)


def _row_identity_cases():
    rng = np.random.default_rng(5)
    cases = []
    for q, F in [(2, ["000", "11"]), (3, ["01"]), (5, ["00", "1010"]), (3, ["2100", "010", "0020"])]:
        spec = validate_spec(q, F)
        for x in enumerate_allowed_words(spec, spec.p - 1):
            for a in spec.forbidden:
                cases.append((spec, x, a, rng.uniform(-2, 3, size=5)))
    return cases


@pytest.mark.parametrize("spec,x,a,zs", _row_identity_cases())
def test_extension_identities(spec, x, a, zs):
    # sum over one-symbol extensions, with (a, a) standing in for the extension ending in a
    ends = [b for b in range(spec.q) if (x + (b,))[-len(a):] == a]
    for z in zs:
        total = 0.0
        for b in range(spec.q):
            xb = (x + (b,))[1:]
            total += correlation_value(a, a, z) if b in ends else correlation_value(xb, a, z)
        assert total == pytest.approx(z * correlation_value(x, a, z) + 1, abs=1e-9)


class TestContains:
    @pytest.mark.parametrize("F,w,exp", [(["11"], "010", False), (["11"], "0110", True), (["000", "11"], "0010", False)])
    def test_examples(self, F, w, exp):
        assert contains_forbidden(validate_spec(2, F), W(w)) is exp


class TestEnumerate:
    def test_three_state_labels(self):
        assert strs(enumerate_allowed_words(validate_spec(2, ["000", "11"]), 2)) == ["00", "01", "10"]

    def test_full(self):
        assert strs(enumerate_allowed_words(validate_spec(3, []), 1)) == ["0", "1", "2"]

    def test_fib(self):
        assert strs(enumerate_allowed_words(validate_spec(2, ["11"]), 3)) == ["000", "001", "010", "100", "101"]

    def test_empty_word(self):
        assert enumerate_allowed_words(validate_spec(2, ["11"]), 0) == [()]


class TestAdjacency:
    def test_three_state_matrix(self):
        adj = build_adjacency(validate_spec(2, ["000", "11"]))
        assert adj.entries.tolist() == [[0, 1, 0], [0, 0, 1], [1, 1, 0]]
        assert analyze_graph(adj).primitive

    def test_golden(self):
        adj = build_adjacency(validate_spec(3, ["01"]))
        assert adj.entries.tolist() == [[1, 0, 1], [1, 1, 1], [1, 1, 1]]

    def test_full(self):
        assert build_adjacency(validate_spec(2, [])).entries.tolist() == [[1, 1], [1, 1]]

    def test_no_infinite_path(self):
        # labels exist but every edge is cut, so the shift itself is empty
        adj = build_adjacency(validate_spec(2, ["00", "01", "10", "11"]))
        assert adj.entries.sum() == 0 and not has_cycle(adj)
        assert has_cycle(build_adjacency(validate_spec(2, ["11"])))

    @pytest.mark.parametrize("q,F", [(2, ["000", "11"]), (3, ["01"]), (2, ["1100", "111"]), (3, ["2100", "010", "0020"]), (4, ["12", "032", "22"])])
    def test_power_sums(self, q, F):
        spec = validate_spec(q, F)
        adj = build_adjacency(spec)
        A = adj.entries.astype(object)
        P = np.identity(adj.size, dtype=object)
        for n in range(9):
            assert P.sum() == len(enumerate_allowed_words(spec, n + spec.p - 1))
            P = P.dot(A)


class TestGraph:
    def test_period_two(self):
        ga = analyze_graph(np.array([[0, 1], [1, 0]]))
        assert ga.irreducible and ga.period == 2 and not ga.primitive

    def test_reducible(self):
        ga = analyze_graph(np.array([[1, 1], [0, 1]]))
        assert not ga.irreducible and not ga.primitive

    def test_period_three(self):
        A = np.roll(np.eye(3, dtype=int), 1, axis=1)
        assert analyze_graph(A).period == 3
