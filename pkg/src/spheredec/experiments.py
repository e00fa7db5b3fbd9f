"""Complexity campaigns: count flops and intops of old vs new decoders.

For every dimension n, M random generator matrices are drawn and N received
vectors decoded per matrix by each algorithm of every (old, new) pair.  The
gain of a pair is the mean over matrices of ``sum(ops_old) / sum(ops_new)``.
"""
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
import csv
import logging
import os
import time

import numpy as np

from .decoder import DecoderConfig, SphereDecoder
from .linalg import lower_triangularize
from .reduction import DEFAULT_DELTA, lll_reduce
from .sampling import (
    CHANNEL_STREAM, VORONOI_STREAM, VoronoiSampler, pam_transmit,
    random_gaussian_matrix, rng_for,
)

log = logging.getLogger(__name__)

LATTICE = "lattice"
FINITE = "finite"
METRICS = ("flops", "intops")
WORKERS_ENV = "SPHEREDEC_WORKERS"
SLOW_UNREDUCED_DIM = 40

CSV_HEADER = ["family", "n", "L", "snr_db", "reduce", "algo_old", "algo_new",
              "metric", "gain", "M", "N", "seed"]
RAW_HEADER = ["matrix_index", "algo", "flops", "intops"]


class DecoderMismatch(RuntimeError):
    """Paired algorithms returned different points for the same input."""


class BudgetExceeded(RuntimeError):
    """The campaign did not finish before its deadline."""


def default_n_vectors(n):
    return max(20, round(20000 / n ** 2))


@dataclass(frozen=True)
class ExperimentSpec:
    family: str = LATTICE
    dims: tuple = (10,)
    m_matrices: int = 20
    n_vectors: int = None  # None: default_n_vectors(n)
    levels: int = 2
    snr_db: float = 0.0
    reduce: str = "none"
    lll_delta: float = DEFAULT_DELTA
    pairs: tuple = None  # None: both G- and H-based pairs of the family
    seed: int = 0
    allow_slow: bool = False

    def __post_init__(self):
        if self.family not in (LATTICE, FINITE):
            raise ValueError("family must be 'lattice' or 'finite'")
        if not self.dims or min(self.dims) < 1:
            raise ValueError("dims must be a nonempty list of positive integers")
        if self.m_matrices < 1 or (self.n_vectors is not None and self.n_vectors < 1):
            raise ValueError("M and N must be >= 1")
        if self.reduce not in ("none", "lll"):
            raise ValueError("reduce must be 'none' or 'lll'")
        if self.family == FINITE:
            if self.reduce != "none":
                raise ValueError("reduction would change a finite constellation; use reduce='none'")
            if self.levels < 2:
                raise ValueError("L-PAM needs L >= 2")
            if not np.isfinite(self.snr_db):
                raise ValueError("snr_db must be finite")
        parity = 1 if self.family == LATTICE else 0
        for old, new in self.algorithm_pairs:
            for a in (old, new):
                if a not in range(1, 9) or a % 2 != parity:
                    raise ValueError("algorithm %r does not decode the %s family" % (a, self.family))
        if (self.family == LATTICE and self.reduce == "none" and not self.allow_slow
                and max(self.dims) > SLOW_UNREDUCED_DIM):
            raise ValueError("unreduced lattice decoding above n=%d needs allow_slow"
                             % SLOW_UNREDUCED_DIM)

    @property
    def algorithm_pairs(self):
        if self.pairs is not None:
            return tuple(tuple(p) for p in self.pairs)
        return ((1, 5), (3, 7)) if self.family == LATTICE else ((2, 6), (4, 8))

    @property
    def algorithms(self):
        return tuple(sorted({a for p in self.algorithm_pairs for a in p}))

    def vectors_for(self, n):
        return self.n_vectors if self.n_vectors is not None else default_n_vectors(n)


def gain(ops_old, ops_new):
    """Mean over matrices of the ratio of per-matrix operation totals."""
    ops_old = np.asarray(ops_old, dtype=float)
    ops_new = np.asarray(ops_new, dtype=float)
    if ops_old.shape != ops_new.shape or ops_old.ndim != 1 or len(ops_old) == 0:
        raise ValueError("need equally many per-matrix totals for both algorithms")
    if np.any(ops_new <= 0):
        raise ZeroDivisionError("per-matrix total of the new algorithm is zero")
    return float(np.mean(ops_old / ops_new))


@dataclass
class GainReport:
    spec: ExperimentSpec
    n_vectors: dict = field(default_factory=dict)  # n -> N
    raw: dict = field(default_factory=dict)  # (n, algo) -> int array (M, 2)

    def totals(self, n, algo, metric):
        return self.raw[(n, algo)][:, METRICS.index(metric)]

    def gain(self, n, pair, metric="flops"):
        old, new = pair
        return gain(self.totals(n, old, metric), self.totals(n, new, metric))

    def rows(self):
        s = self.spec
        finite = s.family == FINITE
        out = []
        for n in s.dims:
            for pair in s.algorithm_pairs:
                for metric in METRICS:
                    out.append({
                        "family": s.family,
                        "n": n,
                        "L": s.levels if finite else "",
                        "snr_db": repr(float(s.snr_db)) if finite else "",
                        "reduce": s.reduce,
                        "algo_old": pair[0],
                        "algo_new": pair[1],
                        "metric": metric,
                        "gain": repr(self.gain(n, pair, metric)),
                        "M": s.m_matrices,
                        "N": self.n_vectors[n],
                        "seed": s.seed,
                    })
        return out

    def raw_rows(self):
        """Per-matrix totals; ``matrix_index`` runs over dims in order, M per dim."""
        out = []
        for k, n in enumerate(self.spec.dims):
            for j in range(self.spec.m_matrices):
                for algo in self.spec.algorithms:
                    flops, intops = self.raw[(n, algo)][j]
                    out.append({"matrix_index": k * self.spec.m_matrices + j,
                                "algo": algo, "flops": int(flops), "intops": int(intops)})
        return out

    def to_csv(self, path):
        """Write the gain table to ``path`` and raw totals to ``<stem>.raw.csv``."""
        path = str(path)
        stem = path[:-4] if path.endswith(".csv") else path
        with open(path, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=CSV_HEADER, lineterminator="\n")
            w.writeheader()
            w.writerows(self.rows())
        raw_path = stem + ".raw.csv"
        with open(raw_path, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=RAW_HEADER, lineterminator="\n")
            w.writeheader()
            w.writerows(self.raw_rows())
        return path, raw_path


def prepare_matrix(spec, n, j):
    """Generator matrix j of dimension n: ``(raw, pair)``; raw is reduced if requested."""
    g = random_gaussian_matrix(n, spec.seed, j)
    if spec.reduce == "lll":
        g = lll_reduce(g, spec.lll_delta).g_reduced
    return g, lower_triangularize(g)


def received_vectors(spec, n, j, g, pair):
    """Yield the N received vectors for matrix j, in decoder coordinates."""
    N = spec.vectors_for(n)
    if spec.family == LATTICE:
        sampler = VoronoiSampler(pair)
        for i in range(N):
            yield sampler.sample(rng_for(spec.seed, VORONOI_STREAM, n, j, i))
    else:
        for i in range(N):
            _, r = pam_transmit(g, spec.levels, spec.snr_db,
                                rng_for(spec.seed, CHANNEL_STREAM, n, j, i))
            yield pair.rotate(r)


def run_matrix(spec, n, j, deadline=None):
    """Decode all vectors of matrix j; returns ``{algo: [flops, intops]}``."""
    g, pair = prepare_matrix(spec, n, j)
    if spec.family == LATTICE:
        configs = {a: DecoderConfig.from_algorithm(a) for a in spec.algorithms}
    else:
        configs = {a: DecoderConfig.from_algorithm(a, 0, spec.levels - 1) for a in spec.algorithms}
    decoders = {a: SphereDecoder(c, pair) for a, c in configs.items()}
    totals = {a: np.zeros(2, dtype=np.int64) for a in decoders}
    for i, r in enumerate(received_vectors(spec, n, j, g, pair)):
        results = {}
        for a, dec in decoders.items():
            if deadline is not None and time.time() > deadline:
                raise BudgetExceeded("deadline reached at n=%d, matrix %d, vector %d" % (n, j, i))
            res = dec.decode(r)
            results[a] = res
            totals[a] += (res.counters.flops, res.counters.intops)
        for old, new in spec.algorithm_pairs:
            if not np.array_equal(results[old].u_hat, results[new].u_hat):
                raise DecoderMismatch(
                    "algorithms %d and %d disagree: seed=%d n=%d matrix=%d vector=%d\n"
                    "g=%r\nr=%r\nu_%d=%r\nu_%d=%r" % (
                        old, new, spec.seed, n, j, i, pair.g.tolist(), r.tolist(),
                        old, results[old].u_hat.tolist(), new, results[new].u_hat.tolist()))
    return totals


def _run_task(args):
    spec, n, j, deadline = args
    return n, j, run_matrix(spec, n, j, deadline)


def default_workers():
    env = os.environ.get(WORKERS_ENV)
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def run_experiment(spec, workers=None, deadline=None):
    """Run every (dimension, matrix) task of ``spec`` and collect a report.

    ``deadline`` is an absolute ``time.time()`` value; when it passes,
    :class:`BudgetExceeded` is raised.  Results do not depend on ``workers``.
    """
    workers = default_workers() if workers is None else workers
    report = GainReport(spec=spec)
    for n in spec.dims:
        report.n_vectors[n] = spec.vectors_for(n)
        for a in spec.algorithms:
            report.raw[(n, a)] = np.zeros((spec.m_matrices, 2), dtype=np.int64)
    tasks = [(spec, n, j, deadline) for n in spec.dims for j in range(spec.m_matrices)]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_task, tasks))
    else:
        results = []
        for t in tasks:
            results.append(_run_task(t))
            log.debug("n=%d matrix %d done", t[1], t[2])
    for n, j, totals in results:
        for a, tot in totals.items():
            report.raw[(n, a)][j] = tot
    return report


def verify_instance(n, trial, seed):
    """Check four decoders on one random instance against the oracle.

    Even trials are lattice instances (algorithms 1, 3, 5, 7, LLL-reduced
    Gaussian basis, Gaussian received vector); odd trials are finite-range
    instances (algorithms 2, 4, 6, 8) with alternating 2- and 4-PAM.
    Returns a list of ``(algorithm, ok, message)``.
    """
    from .oracle import oracle_finite, oracle_lattice

    g = random_gaussian_matrix(n, seed, trial)
    rng = rng_for(seed, VORONOI_STREAM, n, trial)
    if trial % 2 == 0:
        pair = lower_triangularize(lll_reduce(g).g_reduced)
        r = rng.standard_normal(n) * 2.0
        expected = oracle_lattice(pair.g, pair.h, r)
        configs = [DecoderConfig.from_algorithm(a) for a in (1, 3, 5, 7)]
    else:
        levels = 2 if trial % 4 == 1 else 4
        pair = lower_triangularize(g)
        _, r = pam_transmit(g, levels, 0.0, rng)
        r = pair.rotate(r)
        expected = oracle_finite(pair.g, r, 0, levels - 1)
        configs = [DecoderConfig.from_algorithm(a, 0, levels - 1) for a in (2, 4, 6, 8)]
    out = []
    for cfg in configs:
        res = SphereDecoder(cfg, pair).decode(r)
        diff = r - res.u_hat @ pair.g
        dist = float(diff @ diff)
        ok = abs(dist - expected.best_sq_dist) <= 1e-9 * max(1.0, expected.best_sq_dist)
        if expected.margin > 1e-6:
            ok = ok and np.array_equal(res.u_hat, expected.best_u)
        msg = "" if ok else "n=%d trial=%d seed=%d: got %r (%.17g), oracle %r (%.17g)" % (
            n, trial, seed, res.u_hat.tolist(), dist,
            expected.best_u.tolist(), expected.best_sq_dist)
        out.append((cfg.algorithm, ok, msg))
    return out


def verify(dims, trials, seed):
    """Run :func:`verify_instance` over ``dims x trials``; returns ``(passed, total, failures)``."""
    passed = total = 0
    failures = []
    for n in dims:
        for t in range(trials):
            for algo, ok, msg in verify_instance(n, t, seed):
                total += 1
                if ok:
                    passed += 1
                else:
                    failures.append("algorithm %d: %s" % (algo, msg))
    return passed, total, failures
