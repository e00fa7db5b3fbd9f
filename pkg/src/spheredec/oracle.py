"""Brute-force closest-point search, for certifying the decoders.

Nothing here is shared with the decoding kernel: candidates are enumerated
exhaustively and scored with a direct ``||r - u @ g||**2``.
"""
from dataclasses import dataclass

import numpy as np

from .reduction import lll_reduce

MAX_CANDIDATES = 10 ** 8
_CHUNK = 1 << 16


class SearchTooLarge(ValueError):
    """The enumeration would exceed ``MAX_CANDIDATES`` points."""


@dataclass(frozen=True)
class OracleResult:
    best_u: np.ndarray
    best_sq_dist: float
    margin: float  # gap to the second-best candidate (inf if there is none)


def _grid(lo, hi):
    """All integer vectors between lo and hi, one per row."""
    if len(lo) == 0:
        return np.zeros((1, 0), dtype=np.int64)
    axes = [np.arange(a, b + 1) for a, b in zip(lo, hi)]
    return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, len(lo))


def _enumerate_box(g, r, lo, hi):
    """Exhaustively score every integer u with lo <= u <= hi.

    The coefficients are split into halves a and b, so that
    ``||r - a g_a - b g_b||^2 = ||r - a g_a||^2 + ||b g_b||^2 - 2 (r - a g_a).(b g_b)``
    becomes a matrix product over all (a, b) combinations.  Candidates within
    a small band of the minimum are rescored directly, which removes the
    cancellation error of the expansion from the reported result.
    """
    widths = hi - lo + 1
    total = int(np.prod(widths.astype(float)))
    if total > MAX_CANDIDATES:
        raise SearchTooLarge("%d candidates exceed the limit of %d" % (total, MAX_CANDIDATES))
    # split where the two grids are closest in size
    logs = np.cumsum(np.log(widths.astype(float)))
    k = int(np.argmin(np.abs(logs - logs[-1] / 2))) + 1
    ua, ub = _grid(lo[:k], hi[:k]), _grid(lo[k:], hi[k:])
    ra = r - ua @ g[:k]
    xb = ub @ g[k:]
    na = np.einsum("ij,ij->i", ra, ra)
    nb = np.einsum("ij,ij->i", xb, xb)
    band = 1e-5 + 1e-9 * (float(na.max() + nb.max()))

    lowest = np.full(2, np.inf)  # two smallest approximate scores
    cands = np.zeros((0, 2), dtype=np.int64)
    scores = np.zeros(0)
    step = max(1, _CHUNK // len(ub))
    for s in range(0, len(ua), step):
        d = na[s:s + step, None] + nb[None, :] - 2.0 * (ra[s:s + step] @ xb.T)
        flat = d.ravel()
        two = np.partition(flat, 1)[:2] if flat.size > 1 else np.array([flat[0], np.inf])
        lowest = np.sort(np.concatenate((lowest, two)))[:2]
        ia, ib = np.nonzero(d <= lowest[0] + band)
        cands = np.vstack((cands, np.column_stack((ia + s, ib))))
        scores = np.concatenate((scores, d[ia, ib]))
        keep = scores <= lowest[0] + band
        cands, scores = cands[keep], scores[keep]

    u = np.hstack((ua[cands[:, 0]], ub[cands[:, 1]])).astype(np.int64)
    diff = r - u @ g
    exact = np.einsum("ij,ij->i", diff, diff)
    order = np.argsort(exact, kind="stable")
    best = float(exact[order[0]])
    # with one candidate in the band the runner-up is far enough away that
    # its approximate score is accurate
    second = float(exact[order[1]]) if len(order) > 1 else float(lowest[1])
    return OracleResult(best_u=u[order[0]], best_sq_dist=best, margin=second - best)


def oracle_finite(g, r, u_min, u_max):
    """Exact minimiser of ``||r - u g||`` over ``{u_min..u_max}^n``."""
    g = np.asarray(g, dtype=float)
    r = np.asarray(r, dtype=float)
    if u_min > u_max:
        raise ValueError("empty range")
    n = g.shape[0]
    lo = np.full(n, u_min, dtype=np.int64)
    hi = np.full(n, u_max, dtype=np.int64)
    return _enumerate_box(g, r, lo, hi)


def babai_bound(g, h, r):
    """An upper bound on the squared distance from ``r`` to the lattice.

    The smaller of two explicit lattice points: coefficient rounding
    ``round(r @ h)`` and successive (nearest-plane) rounding, which needs
    ``g`` only to be full rank.  Returns ``(c0, rounded_point)``.
    """
    z = r @ h
    u0 = np.floor(z + 0.5)
    d0 = r - u0 @ g
    c0 = float(d0 @ d0)
    # nearest plane against the Gram-Schmidt vectors, last basis vector first
    q, rr = np.linalg.qr(g.T)
    resid = r.astype(float).copy()
    for i in range(g.shape[0] - 1, -1, -1):
        k = np.floor((resid @ q[:, i]) / rr[i, i] + 0.5)
        resid = resid - k * g[i]
    c1 = float(resid @ resid)
    return min(c0, c1), u0


def _lattice_box(g, h, r):
    """Integer box that provably holds every u at least as close as ``c0``.

    For any lattice point x = u g, ``u - r h = (x - r) h`` so by
    Cauchy-Schwarz ``|u_i - (r h)_i| <= ||x - r|| * ||h[:, i]||``.  With
    ``c0`` the squared distance of a known lattice point, the optimum lies in
    ``|u_i - (r h)_i| <= sqrt(c0) * ||h[:, i]||``.  When ``c0`` comes from
    ``round(r h)`` that point is itself inside the box by the same argument.
    """
    c0, _ = babai_bound(g, h, r)
    z = r @ h
    radius = np.sqrt(c0) * np.linalg.norm(h, axis=0) * (1 + 1e-12) + 1e-12
    return np.ceil(z - radius).astype(np.int64), np.floor(z + radius).astype(np.int64)


def oracle_lattice(g, h, r, reduce=True):
    """Exact minimiser of ``||r - u g||`` over all integer u.

    The box of :func:`_lattice_box` is enumerated in full.  With ``reduce``
    (the default) the box is built for an LLL-reduced basis ``U g`` of the
    same lattice, where it is tiny, and the minimiser ``v`` found there maps
    back as ``u = v U``.
    """
    g = np.asarray(g, dtype=float)
    h = np.asarray(h, dtype=float)
    r = np.asarray(r, dtype=float)
    if not reduce:
        lo, hi = _lattice_box(g, h, r)
        return _enumerate_box(g, r, lo, hi)
    red = lll_reduce(g)
    g_red = red.g_reduced
    h_red = np.linalg.inv(g_red)
    lo, hi = _lattice_box(g_red, h_red, r)
    res = _enumerate_box(g_red, r, lo, hi)
    return OracleResult(best_u=res.best_u @ red.unimodular,
                        best_sq_dist=res.best_sq_dist, margin=res.margin)


def box_volume(g, h, r):
    lo, hi = _lattice_box(np.asarray(g, float), np.asarray(h, float), np.asarray(r, float))
    return float(np.prod((hi - lo + 1).astype(float)))
