import itertools

import numpy as np
import pytest

from spheredec.linalg import RankError
from spheredec.reduction import gram_schmidt, is_lll_reduced, lll_reduce


def textbook_lll(b, delta=0.75):
    """LLL with Gram-Schmidt recomputed from scratch after every change."""
    b = [list(map(float, row)) for row in b]
    n = len(b)

    def gso():
        bstar, mu = [], [[0.0] * n for _ in range(n)]
        for i in range(n):
            v = list(b[i])
            for j in range(i):
                mu[i][j] = np.dot(b[i], bstar[j]) / np.dot(bstar[j], bstar[j])
                v = [x - mu[i][j] * y for x, y in zip(v, bstar[j])]
            bstar.append(v)
        return bstar, mu

    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            bstar, mu = gso()
            if abs(mu[k][j]) > 0.5:
                q = np.floor(mu[k][j] + 0.5)
                b[k] = [x - q * y for x, y in zip(b[k], b[j])]
        bstar, mu = gso()
        if np.dot(bstar[k], bstar[k]) >= (delta - mu[k][k - 1] ** 2) * np.dot(bstar[k - 1], bstar[k - 1]):
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            k = max(k - 1, 1)
    return np.array(b)


def check_reduced(g, red, delta=0.75):
    u = red.unimodular
    assert u.dtype.kind == "i"
    assert round(abs(np.linalg.det(u))) == 1
    np.testing.assert_allclose(u @ g, red.g_reduced, atol=1e-9 * np.abs(red.g_reduced).max())
    assert is_lll_reduced(red.g_reduced, delta)
    assert abs(np.linalg.det(red.g_reduced)) == pytest.approx(abs(np.linalg.det(g)), rel=1e-8)


def test_identity_unchanged():
    red = lll_reduce(np.eye(4))
    np.testing.assert_array_equal(red.g_reduced, np.eye(4))
    np.testing.assert_array_equal(red.unimodular, np.eye(4, dtype=int))


def test_two_dimensional_example_matches_textbook():
    g = np.array([[1.0, 0.0], [0.5, 0.001]])
    red = lll_reduce(g)
    np.testing.assert_allclose(red.g_reduced, textbook_lll(g), atol=1e-12)
    check_reduced(g, red)
    # Hermite-type bound for LLL with delta = 3/4: |b1|^2 <= 2^((n-1)/2) |det|
    assert np.sum(red.g_reduced[0] ** 2) <= np.sqrt(2) * abs(np.linalg.det(g)) + 1e-15


@pytest.mark.parametrize("n,seed", [(n, s) for n in (2, 3, 5, 8) for s in range(4)])
def test_random_bases_match_textbook(n, seed):
    g = np.random.default_rng(100 * n + seed).standard_normal((n, n))
    red = lll_reduce(g)
    check_reduced(g, red)
    np.testing.assert_allclose(red.g_reduced, textbook_lll(g), atol=1e-8)


def test_permuted_orthogonal_basis_keeps_norms():
    q, _ = np.linalg.qr(np.random.default_rng(5).standard_normal((4, 4)))
    basis = (np.array([1.0, 2.0, 3.0, 4.0])[:, None] * q)[[2, 0, 3, 1]]
    red = lll_reduce(basis)
    assert sorted(np.linalg.norm(red.g_reduced, axis=1)) == pytest.approx(
        sorted(np.linalg.norm(basis, axis=1)), rel=1e-12)


@pytest.mark.parametrize("n", [20, 40, 60])
def test_large_gaussian(n):
    g = np.random.default_rng(n).standard_normal((n, n))
    for delta in (0.75, 0.99):
        check_reduced(g, lll_reduce(g, delta), delta)


def test_idempotent():
    g = np.random.default_rng(9).standard_normal((6, 6))
    once = lll_reduce(g).g_reduced
    twice = lll_reduce(once)
    np.testing.assert_array_equal(np.abs(twice.unimodular), np.eye(6, dtype=int))
    np.testing.assert_allclose(np.abs(twice.g_reduced), np.abs(once))


def test_rank_errors():
    with pytest.raises(RankError):
        lll_reduce([[1.0, 2.0], [2.0, 4.0]])
    with pytest.raises(RankError):
        lll_reduce(np.ones((3, 2)))
    with pytest.raises(ValueError):
        lll_reduce(np.eye(2), delta=0.2)


def test_gram_schmidt_helper():
    mu, bn = gram_schmidt([[1.0, 0.0], [1.0, 2.0]])
    assert mu[1, 0] == pytest.approx(1.0)
    np.testing.assert_allclose(bn, [1.0, 4.0])
