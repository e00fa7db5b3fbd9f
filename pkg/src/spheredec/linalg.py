"""Lower-triangular generator matrices and their inverses.

Every decoder in this package consumes a square lower-triangular generator
matrix ``g`` with positive diagonal together with ``h = inv(g)``.  Arbitrary
full-rank bases (rows are basis vectors) are brought into that form by an
orthogonal factorization, which changes the lattice only by a rotation.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np


class RankError(ValueError):
    """Raised when a basis is (numerically) rank deficient."""


class SingularMatrixError(ValueError):
    """Raised when a triangular matrix has a zero on its diagonal."""


RANK_TOL = 1e-12


@dataclass(frozen=True)
class LowerTriangularPair:
    """A lower-triangular generator ``g`` and its inverse ``h``.

    ``rotation`` is the m x n matrix Q with ``basis @ Q == g`` when the pair
    was produced from a general basis; received vectors in the original
    coordinates map to decoder coordinates as ``r @ Q``.
    """

    g: np.ndarray
    h: np.ndarray
    rotation: Optional[np.ndarray] = None

    @property
    def n(self):
        return self.g.shape[0]

    def rotate(self, r):
        r = np.asarray(r, dtype=float)
        if self.rotation is None:
            return r
        return r @ self.rotation

    @classmethod
    def from_lower(cls, g):
        """Wrap an already lower-triangular ``g`` with positive diagonal."""
        g = np.array(g, dtype=float, ndmin=2)
        if g.shape[0] != g.shape[1]:
            raise ValueError("g must be square, got shape %s" % (g.shape,))
        if np.any(np.triu(g, 1) != 0):
            raise ValueError("g must be lower triangular")
        if np.any(np.diag(g) <= 0):
            raise ValueError("g must have a positive diagonal")
        return cls(g=g, h=invert_lower_triangular(g))


def invert_lower_triangular(g):
    """Inverse of a lower-triangular matrix by forward substitution.

    The result is lower triangular; entries above the diagonal are exactly 0.
    """
    g = np.array(g, dtype=float, ndmin=2)
    n = g.shape[0]
    if g.shape != (n, n):
        raise ValueError("expected a square matrix, got shape %s" % (g.shape,))
    diag = np.diag(g)
    if np.any(diag == 0) or not np.all(np.isfinite(g)):
        raise SingularMatrixError("lower-triangular matrix has a zero diagonal entry")
    h = np.zeros_like(g)
    for j in range(n):
        h[j, j] = 1.0 / g[j, j]
        for i in range(j + 1, n):
            # row i of g times column j of h must vanish
            h[i, j] = -np.dot(g[i, j:i], h[j:i, j]) / g[i, i]
    return h


def lower_triangularize(basis):
    """Rotate a full-row-rank n x m basis into lower-triangular form.

    Uses a QR factorization of ``basis.T``; columns of Q whose pivot came out
    negative are negated so the diagonal is positive.  Returns a
    :class:`LowerTriangularPair` whose ``rotation`` maps original coordinates
    to the triangular ones.
    """
    basis = np.array(basis, dtype=float, ndmin=2)
    n, m = basis.shape
    if n == 0:
        raise ValueError("empty basis")
    if n > m:
        raise RankError("basis with %d rows in R^%d cannot have full row rank" % (n, m))
    if not np.all(np.isfinite(basis)):
        raise ValueError("basis entries must be finite")

    q, rr = np.linalg.qr(basis.T, mode="reduced")
    signs = np.where(np.diag(rr) < 0, -1.0, 1.0)
    q = q * signs
    rr = rr * signs[:, None]
    pivots = np.diag(rr)
    if pivots.min() <= RANK_TOL * np.abs(pivots).max():
        raise RankError("basis is rank deficient (smallest pivot %.3g)" % pivots.min())

    g = np.tril(rr.T)
    return LowerTriangularPair(g=g, h=invert_lower_triangular(g), rotation=q)


def read_matrix(path):
    """Read the plain-text matrix format: ``n m`` then n rows of m numbers."""
    with open(path) as fh:
        tokens = fh.read().split()
    if len(tokens) < 2:
        raise ValueError("%s: missing 'n m' header" % path)
    n, m = int(tokens[0]), int(tokens[1])
    values = tokens[2:]
    if len(values) != n * m:
        raise ValueError("%s: expected %d entries, found %d" % (path, n * m, len(values)))
    return np.array([float(v) for v in values]).reshape(n, m)


def write_matrix(path, a):
    a = np.atleast_2d(np.asarray(a, dtype=float))
    with open(path, "w") as fh:
        fh.write("%d %d\n" % a.shape)
        for row in a:
            fh.write(" ".join(repr(float(x)) for x in row) + "\n")
