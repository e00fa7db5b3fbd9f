"""LLL basis reduction (floating-point Gram-Schmidt, integer transform).

Used only as preprocessing: the reduced basis is triangularized afterwards
and none of the work done here is counted.
"""
from dataclasses import dataclass

import numba
import numpy as np

from .linalg import RankError

DEFAULT_DELTA = 0.75


@dataclass(frozen=True)
class ReducedBasis:
    """``g_reduced == unimodular @ g_original``."""

    g_reduced: np.ndarray
    unimodular: np.ndarray


@numba.njit(cache=True)
def _lll(b, u, delta, rank_tol):
    n = b.shape[0]
    m = b.shape[1]
    mu = np.zeros((n, n))
    bstar = np.zeros((n, m))
    bn = np.zeros(n)  # squared norms of the Gram-Schmidt vectors

    def gram_schmidt_row(k):
        for t in range(m):
            bstar[k, t] = b[k, t]
        for j in range(k):
            dot = 0.0
            for t in range(m):
                dot += b[k, t] * bstar[j, t]
            mu[k, j] = dot / bn[j]
            for t in range(m):
                bstar[k, t] -= mu[k, j] * bstar[j, t]
        s = 0.0
        for t in range(m):
            s += bstar[k, t] * bstar[k, t]
        bn[k] = s

    scale = 0.0
    for k in range(n):
        s = 0.0
        for t in range(m):
            s += b[k, t] * b[k, t]
        scale = max(scale, s)

    gram_schmidt_row(0)
    if bn[0] <= rank_tol * scale:
        return False
    kmax = 0
    k = 1
    while k < n:
        if k > kmax:
            kmax = k
            gram_schmidt_row(k)
            if bn[k] <= rank_tol * scale:
                return False
        # size reduction of b_k against b_{k-1}, ..., b_0
        for l in range(k - 1, -1, -1):
            if abs(mu[k, l]) > 0.5:
                q = np.floor(mu[k, l] + 0.5)
                qi = np.int64(q)
                for t in range(m):
                    b[k, t] -= q * b[l, t]
                for t in range(n):
                    u[k, t] -= qi * u[l, t]
                for j in range(l):
                    mu[k, j] -= q * mu[l, j]
                mu[k, l] -= q
        if bn[k] < (delta - mu[k, k - 1] ** 2) * bn[k - 1]:
            # swap b_k and b_{k-1}, updating the Gram-Schmidt data in place
            for t in range(m):
                tmp = b[k, t]
                b[k, t] = b[k - 1, t]
                b[k - 1, t] = tmp
            for t in range(n):
                tmpi = u[k, t]
                u[k, t] = u[k - 1, t]
                u[k - 1, t] = tmpi
            for j in range(k - 1):
                tmp = mu[k, j]
                mu[k, j] = mu[k - 1, j]
                mu[k - 1, j] = tmp
            mk = mu[k, k - 1]
            bb = bn[k] + mk * mk * bn[k - 1]
            mu[k, k - 1] = mk * bn[k - 1] / bb
            for t in range(m):
                old = bstar[k - 1, t]
                bstar[k - 1, t] = bstar[k, t] + mk * old
                bstar[k, t] = -mu[k, k - 1] * bstar[k, t] + (bn[k] / bb) * old
            bn[k] = bn[k - 1] * bn[k] / bb
            bn[k - 1] = bb
            for i in range(k + 1, kmax + 1):
                t2 = mu[i, k]
                mu[i, k] = mu[i, k - 1] - mk * t2
                mu[i, k - 1] = t2 + mu[k, k - 1] * mu[i, k]
            k = max(1, k - 1)
        else:
            k += 1
    return True


def gram_schmidt(b):
    """Return ``(mu, squared_norms)`` of the Gram-Schmidt process on rows of b."""
    b = np.asarray(b, dtype=float)
    q, rr = np.linalg.qr(b.T)
    diag = np.diag(rr)
    mu = (rr / diag[:, None]).T
    return mu, diag ** 2


def is_lll_reduced(b, delta=DEFAULT_DELTA, eps=1e-9):
    mu, bn = gram_schmidt(b)
    n = len(bn)
    lower = np.tril(mu, -1)
    if np.any(np.abs(lower) > 0.5 + eps):
        return False
    for k in range(1, n):
        if bn[k] < (delta - mu[k, k - 1] ** 2) * bn[k - 1] * (1 - eps):
            return False
    return True


def lll_reduce(g, delta=DEFAULT_DELTA, max_passes=10):
    """LLL-reduce the rows of ``g``.

    Returns a :class:`ReducedBasis` whose ``g_reduced`` is recomputed as
    ``unimodular @ g`` so the two always agree exactly.  If floating-point
    drift leaves the result slightly unreduced, the reduction is rerun on
    its own output (at most ``max_passes`` times).
    """
    if not 0.25 < delta <= 1:
        raise ValueError("delta must lie in (1/4, 1], got %r" % (delta,))
    g = np.array(g, dtype=float, ndmin=2)
    n = g.shape[0]
    if n > g.shape[1]:
        raise RankError("more basis vectors than coordinates")
    u = np.eye(n, dtype=np.int64)
    for _ in range(max_passes):
        b = (u @ g).astype(float) if n else g.copy()
        step = np.eye(n, dtype=np.int64)
        if not _lll(b, step, float(delta), 1e-24):
            raise RankError("basis is rank deficient")
        u = step @ u
        if is_lll_reduced(u @ g, delta):
            break
    return ReducedBasis(g_reduced=u @ g, unimodular=u)
