"""Schnorr-Euchner sphere decoders, old and new projection schemes.

One search kernel implements eight closest-point algorithms, labelled 1-8:

=====  ==========  ========  =========================
label  basis form  strategy  domain
=====  ==========  ========  =========================
1      G           old       lattice
2      G           old       finite range
3      H           old       lattice
4      H           old       finite range
5      G           new       lattice
6      G           new       finite range
7      H           new       lattice
8      H           new       finite range
=====  ==========  ========  =========================

The "old" algorithms recompute projection values from scratch (G-based) or
update whole rows of the projection matrix E (H-based) on every move down a
layer.  The "new" algorithms update only the column of E or F that is about
to be consumed, restarting at row ``d_i``, and keep ``d`` current after every
move up.  All eight visit the same layers in the same order.

The kernel is written with 1-based layer indices on padded arrays so every
statement maps onto one line of the reference pseudocode.
"""
from dataclasses import dataclass
import math

import numba
import numpy as np

from . import counting
from .counting import (
    D_COMPARE, DISPLACEMENT, E_COL_UPDATE, E_INIT_TERM, E_ROW_UPDATE,
    F_COL_UPDATE, LAMBDA_ACCUMULATE, LAMBDA_SQUARE, P_FINISH, P_SUM_TERM,
    RADIUS_COMPARE, RANGE_CHECK, ROUND, ROUNDC, SIGN_REAL, U_STEP,
    ZIGZAG_UPDATE, OpCounter, count_ops,
)
from .linalg import LowerTriangularPair

G_BASED = "G"
H_BASED = "H"
OLD = "old"
NEW = "new"


@dataclass(frozen=True)
class DecoderConfig:
    """Which of the eight algorithms to run.

    ``u_min``/``u_max`` are both None for lattice decoding and both set for a
    finite coefficient range.
    """

    basis_form: str = H_BASED
    strategy: str = NEW
    u_min: int = None
    u_max: int = None

    def __post_init__(self):
        if self.basis_form not in (G_BASED, H_BASED):
            raise ValueError("basis_form must be 'G' or 'H', got %r" % (self.basis_form,))
        if self.strategy not in (OLD, NEW):
            raise ValueError("strategy must be 'old' or 'new', got %r" % (self.strategy,))
        if (self.u_min is None) != (self.u_max is None):
            raise ValueError("u_min and u_max must be given together")
        if self.finite:
            if int(self.u_min) != self.u_min or int(self.u_max) != self.u_max:
                raise ValueError("constellation endpoints must be integers")
            if self.u_min > self.u_max:
                raise ValueError("empty coefficient range [%d, %d]" % (self.u_min, self.u_max))

    @property
    def finite(self):
        return self.u_min is not None

    @property
    def levels(self):
        return self.u_max - self.u_min + 1 if self.finite else None

    @property
    def algorithm(self):
        label = 1
        if self.finite:
            label += 1
        if self.basis_form == H_BASED:
            label += 2
        if self.strategy == NEW:
            label += 4
        return label

    @classmethod
    def from_algorithm(cls, label, u_min=None, u_max=None):
        """Config for algorithm ``label`` in 1..8; even labels need a range."""
        if label not in range(1, 9):
            raise ValueError("algorithm label must be in 1..8, got %r" % (label,))
        k = label - 1
        finite = bool(k & 1)
        if finite and u_min is None:
            raise ValueError("algorithm %d decodes a finite range; give u_min and u_max" % label)
        if not finite:
            u_min = u_max = None
        return cls(
            basis_form=H_BASED if k & 2 else G_BASED,
            strategy=NEW if k & 4 else OLD,
            u_min=u_min,
            u_max=u_max,
        )


@dataclass
class DecodeResult:
    u_hat: np.ndarray
    squared_distance: float
    counters: OpCounter
    tally: np.ndarray


@dataclass
class Trace:
    """Every candidate examined, in order.

    ``layers[k]``/``candidates[k]`` give the layer and coefficient set at
    event k, ``lambdas[k]`` the accumulated squared distance after it and
    ``projections[k]`` the projection value consumed (NaN for moves up).
    """

    layers: np.ndarray
    candidates: np.ndarray
    lambdas: np.ndarray
    projections: np.ndarray

    def events(self):
        return list(zip(self.layers.tolist(), self.candidates.tolist()))

    def __len__(self):
        return len(self.layers)


def round_nearest(x):
    """Nearest integer, ties toward +inf (``round_nearest(-0.5) == 0``)."""
    return int(math.floor(x + 0.5))


def round_clamped(x, u_min, u_max):
    """Nearest integer in ``[u_min, u_max]``, same tie rule."""
    if u_min > u_max:
        raise ValueError("empty range [%d, %d]" % (u_min, u_max))
    return min(max(round_nearest(x), u_min), u_max)


def sign_step(x):
    """-1 for x <= 0, +1 otherwise."""
    return -1 if x <= 0 else 1


@numba.njit(cache=True)
def _sign(x):
    return -1 if x <= 0 else 1


@numba.njit(cache=True)
def _round(x):
    return np.int64(np.floor(x + 0.5))


@numba.njit(cache=True)
def _roundc(x, u_min, u_max):
    v = np.int64(np.floor(x + 0.5))
    if v < u_min:
        return u_min
    if v > u_max:
        return u_max
    return v


@numba.njit(cache=True)
def _search(g_based, new, finite, u_min, u_max, n, G, H, r,
            u, delta, lam, p, yv, d, E, F, u_hat, tally,
            record, ev_layer, ev_u, ev_lam, ev_proj):
    """Run one decode.  Arrays are 1-based (index 0 unused).

    Returns ``(C, number_of_events)``; events beyond the capacity of the
    ``ev_*`` arrays are counted but not stored.
    """
    inf = np.inf
    old_h = (not g_based) and (not new)
    new_h = (not g_based) and new
    old_g = g_based and (not new)
    new_g = g_based and new
    capacity = ev_layer.shape[0]
    n_ev = 0

    C = inf
    y = 0.0
    if old_h:
        i = n
    else:
        i = n + 1
    if new:
        for j in range(1, n + 1):
            d[j] = n
    lam[n + 1] = 0.0
    if not g_based:
        for j in range(1, n + 1):
            s = 0.0
            for k in range(n, j - 1, -1):
                s += r[k] * H[k, j]
            E[n, j] = s
        tally[E_INIT_TERM] += n * (n + 1) // 2
    if new_g:
        for j in range(1, n + 1):
            F[n, j] = 0.0
    if old_h:
        if finite:
            u[n] = _roundc(E[n, n], u_min, u_max)
            tally[ROUNDC] += 1
        else:
            u[n] = _round(E[n, n])
            tally[ROUND] += 1
        y = (E[n, n] - u[n]) / H[n, n]
        delta[n] = _sign(y)
        lam[n] = y * y
        tally[DISPLACEMENT] += 1
        tally[SIGN_REAL] += 1
        tally[LAMBDA_SQUARE] += 1
        if record:
            if n_ev < capacity:
                ev_layer[n_ev] = n
                ev_u[n_ev] = u[n]
                ev_lam[n_ev] = lam[n]
                ev_proj[n_ev] = E[n, n]
            n_ev += 1

    while True:  # LOOP
        # move down while inside the sphere
        while True:
            if i != 1:
                i -= 1
                if old_h:
                    for j in range(1, i + 1):
                        E[i, j] = E[i + 1, j] - y * H[i + 1, j]
                    tally[E_ROW_UPDATE] += i
                if new_g:
                    for j in range(d[i], i, -1):
                        F[j - 1, i] = F[j, i] + u[j] * G[j, i]
                    tally[F_COL_UPDATE] += d[i] - i
                if new_h:
                    for j in range(d[i], i, -1):
                        E[j - 1, i] = E[j, i] - yv[j] * H[j, i]
                    tally[E_COL_UPDATE] += d[i] - i
                if old_g:
                    s = 0.0
                    for j in range(n, i, -1):
                        s += u[j] * G[j, i]
                    p[i] = (r[i] - s) / G[i, i]
                    tally[P_SUM_TERM] += n - i
                    tally[P_FINISH] += 1
                if new_g:
                    p[i] = (r[i] - F[i, i]) / G[i, i]
                    tally[P_FINISH] += 1

                if g_based:
                    proj = p[i]
                else:
                    proj = E[i, i]
                if finite:
                    u[i] = _roundc(proj, u_min, u_max)
                    tally[ROUNDC] += 1
                else:
                    u[i] = _round(proj)
                    tally[ROUND] += 1
                if g_based:
                    y = (p[i] - u[i]) * G[i, i]
                else:
                    y = (E[i, i] - u[i]) / H[i, i]
                if new_h:
                    yv[i] = y
                delta[i] = _sign(y)
                lam[i] = lam[i + 1] + y * y
                tally[DISPLACEMENT] += 1
                tally[SIGN_REAL] += 1
                tally[LAMBDA_ACCUMULATE] += 1
                if record:
                    if n_ev < capacity:
                        ev_layer[n_ev] = i
                        ev_u[n_ev] = u[i]
                        ev_lam[n_ev] = lam[i]
                        ev_proj[n_ev] = proj
                    n_ev += 1
            else:
                for j in range(1, n + 1):
                    u_hat[j] = u[j]
                C = lam[1]
            tally[RADIUS_COMPARE] += 1
            if not (lam[i] < C):
                break

        m = i
        # move up until a layer inside the sphere is found
        while True:
            if i == n:
                return C, n_ev
            i += 1
            if finite:
                y = inf
            u[i] += delta[i]
            delta[i] = -delta[i] - _sign(delta[i])
            tally[U_STEP] += 1
            tally[ZIGZAG_UPDATE] += 1
            if finite:
                tally[RANGE_CHECK] += 1
                if u_min <= u[i] and u[i] <= u_max:
                    if g_based:
                        y = (p[i] - u[i]) * G[i, i]
                    else:
                        y = (E[i, i] - u[i]) / H[i, i]
                    tally[DISPLACEMENT] += 1
                else:
                    u[i] += delta[i]
                    delta[i] = -delta[i] - _sign(delta[i])
                    tally[U_STEP] += 1
                    tally[ZIGZAG_UPDATE] += 1
                    tally[RANGE_CHECK] += 1
                    if u_min <= u[i] and u[i] <= u_max:
                        if g_based:
                            y = (p[i] - u[i]) * G[i, i]
                        else:
                            y = (E[i, i] - u[i]) / H[i, i]
                        tally[DISPLACEMENT] += 1
            else:
                if g_based:
                    y = (p[i] - u[i]) * G[i, i]
                else:
                    y = (E[i, i] - u[i]) / H[i, i]
                tally[DISPLACEMENT] += 1
            if new_h:
                yv[i] = y
            # an exhausted layer keeps the infinite sentinel instead of squaring it
            if y == inf:
                lam[i] = inf
            else:
                lam[i] = lam[i + 1] + y * y
            tally[LAMBDA_ACCUMULATE] += 1
            if record:
                if n_ev < capacity:
                    ev_layer[n_ev] = i
                    ev_u[n_ev] = u[i]
                    ev_lam[n_ev] = lam[i]
                    ev_proj[n_ev] = np.nan
                n_ev += 1
            tally[RADIUS_COMPARE] += 1
            if not (lam[i] >= C):
                break

        if new:
            for j in range(m, i):
                d[j] = i
            for j in range(m - 1, 0, -1):
                tally[D_COMPARE] += 1
                if d[j] < i:
                    d[j] = i
                else:
                    break


class SphereDecoder:
    """A decoder bound to one configuration and one generator matrix.

    Work arrays (including the n x n E or F matrix) are allocated once and
    reused for every call to :meth:`decode`.  Instances are not thread safe;
    use one per worker.
    """

    def __init__(self, config, pair):
        if not isinstance(pair, LowerTriangularPair):
            pair = LowerTriangularPair.from_lower(pair)
        n = pair.n
        if n == 0:
            raise ValueError("dimension must be at least 1")
        self.config = config
        self.pair = pair
        self.n = n
        size = n + 2
        self._G = np.zeros((size, size))
        self._G[1:n + 1, 1:n + 1] = pair.g
        self._H = np.zeros((size, size))
        self._H[1:n + 1, 1:n + 1] = pair.h
        self._r = np.zeros(size)
        self._u = np.zeros(size, dtype=np.int64)
        self._delta = np.zeros(size, dtype=np.int64)
        self._lam = np.zeros(size)
        self._p = np.zeros(size)
        self._yv = np.zeros(size)
        self._d = np.zeros(size, dtype=np.int64)
        self._u_hat = np.zeros(size, dtype=np.int64)
        if config.basis_form == H_BASED:
            self._E = np.zeros((size, size))
            self._F = np.zeros((1, 1))
        else:
            self._E = np.zeros((1, 1))
            self._F = np.zeros((size, size)) if config.strategy == NEW else np.zeros((1, 1))
        self._no_events_i = np.zeros(0, dtype=np.int64)
        self._no_events_f = np.zeros(0)

    def _run(self, r, record, capacity):
        cfg = self.config
        n = self.n
        r = np.asarray(r, dtype=float).ravel()
        if r.shape[0] != n:
            raise ValueError("received vector has length %d, expected %d" % (r.shape[0], n))
        if not np.all(np.isfinite(r)):
            raise ValueError("received vector must be finite")
        self._r[1:n + 1] = r
        tally = np.zeros(counting.N_STEPS, dtype=np.int64)
        if record:
            ev = (np.empty(capacity, dtype=np.int64), np.empty(capacity, dtype=np.int64),
                  np.empty(capacity), np.empty(capacity))
        else:
            ev = (self._no_events_i, self._no_events_i, self._no_events_f, self._no_events_f)
        finite = cfg.finite
        c, n_ev = _search(
            cfg.basis_form == G_BASED, cfg.strategy == NEW, finite,
            int(cfg.u_min) if finite else 0, int(cfg.u_max) if finite else 0,
            n, self._G, self._H, self._r,
            self._u, self._delta, self._lam, self._p, self._yv, self._d,
            self._E, self._F, self._u_hat, tally,
            record, *ev)
        u_hat = self._u_hat[1:n + 1].copy()
        result = DecodeResult(
            u_hat=u_hat,
            squared_distance=float(c),
            counters=count_ops(tally, cfg.levels or 2),
            tally=tally,
        )
        return result, n_ev, ev

    def decode(self, r):
        """Closest point to ``r`` (in triangular coordinates)."""
        result, _, _ = self._run(r, False, 0)
        return result

    def trace(self, r, capacity=4096):
        """Decode ``r`` and return ``(Trace, DecodeResult)``."""
        while True:
            result, n_ev, ev = self._run(r, True, capacity)
            if n_ev <= capacity:
                break
            capacity = n_ev
        layers, cands, lams, projs = (a[:n_ev].copy() for a in ev)
        return Trace(layers, cands, lams, projs), result


def decode(config, pair, r):
    """Decode ``r`` with a one-off :class:`SphereDecoder`."""
    return SphereDecoder(config, pair).decode(r)


def trace_decode(config, pair, r):
    """Like :func:`decode` but also return the ordered candidate events."""
    return SphereDecoder(config, pair).trace(r)
