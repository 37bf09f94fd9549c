import numpy as np
import pytest

from perron_sft import oracle
from perron_sft.errors import EmptyShift, NotPrimitive, ParseError
from perron_sft.graph import DigraphInput, digraph_perron, path_count_estimate, simplified_eigenvectors, star_matrix
from perron_sft.spectral import analyze
from perron_sft.words import validate_spec


@pytest.mark.parametrize("n,theta", [(5, 2.0), (10, 3.0), (17, 4.0)])
def test_star(n, theta):
    rep = digraph_perron(star_matrix(n))
    assert rep.theta == pytest.approx(theta, abs=1e-9)
    # explicit forbidden set: 00 and every leaf-to-leaf step
    leaves = [(a, b) for a in range(1, n) for b in range(1, n)]
    assert analyze(validate_spec(n, [(0, 0)] + leaves)).theta == pytest.approx(theta, abs=1e-9)


def test_all_ones():
    rep = digraph_perron(np.ones((4, 4), dtype=int))
    assert rep.theta == 4.0 and rep.u.tolist() == [1, 1, 1, 1]


def test_two_cycle():
    rep = digraph_perron([[0, 1], [1, 0]])
    assert rep.theta == pytest.approx(1.0)
    assert rep.u == pytest.approx([0.5, 0.5]) and rep.period == 2


def test_bad_input():
    with pytest.raises(ParseError):
        DigraphInput(np.array([[0, 2], [1, 0]]))
    with pytest.raises(ParseError):
        DigraphInput(np.zeros((2, 3)))
    with pytest.raises(EmptyShift):
        digraph_perron([[1, 0], [1, 0]])


def _random_irreducible(rng, n):
    while True:
        A = (rng.random((n, n)) < 0.4).astype(int)
        perm = rng.permutation(n)
        A[perm, np.roll(perm, 1)] = 1  # a Hamiltonian cycle keeps it irreducible
        return A


def test_random_digraphs():
    rng = np.random.default_rng(8)
    for _ in range(15):
        n = int(rng.integers(2, 7))
        A = _random_irreducible(rng, n)
        rep = digraph_perron(A)
        th, _, _ = oracle.dense_perron(A)
        assert rep.theta == pytest.approx(th, rel=1e-8)
        assert (rep.adjacency.entries == A).all()
        if rep.system is not None:
            M = rep.system.M
            for i in range(M.size):
                a = rep.spec.forbidden[i]
                assert M[i, i].to_list() == ([1, 1] if a[0] == a[1] else [0, 1])
                for j in range(M.size):
                    if i != j:
                        assert M[i, j].to_list() in ([], [1])
        u, v = simplified_eigenvectors(rep)
        assert u == pytest.approx(rep.u, abs=1e-12) and v == pytest.approx(rep.v, abs=1e-12)


def test_path_estimate():
    A = np.array([[1, 0, 1], [1, 1, 1], [1, 1, 1]])
    rep = digraph_perron(A)
    Ak = np.linalg.matrix_power(A.astype(object), 40)
    for x in range(3):
        for y in range(3):
            assert path_count_estimate(rep, x, y, 40) / Ak[x, y] == pytest.approx(1, abs=1e-3)
    assert path_count_estimate(rep, 0, 1, 1) > 0


def test_path_estimate_full():
    rep = digraph_perron(np.ones((3, 3), dtype=int))
    for k in range(1, 8):
        assert path_count_estimate(rep, 0, 2, k) == pytest.approx(3 ** (k - 1))


def test_path_estimate_not_primitive():
    with pytest.raises(NotPrimitive):
        path_count_estimate(digraph_perron([[0, 1], [1, 0]]), 0, 1, 3)
