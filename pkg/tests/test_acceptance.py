"""Acceptance criteria, one test each, each printing a single PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` (or ``-m slow``).  The
n = 50 and n = 60 lattice campaigns behind criteria 3, 4 and 6 run under a
wall-clock budget, ``SPHEREDEC_ACCEPTANCE_BUDGET_S`` seconds (default 1200).
When the budget runs out the affected criteria report FAIL with the data
gathered so far.
"""
import os
import sys
import time

import numpy as np
import pytest

from spheredec.decoder import DecoderConfig, SphereDecoder
from spheredec.experiments import BudgetExceeded, ExperimentSpec, run_experiment
from spheredec.linalg import LowerTriangularPair, lower_triangularize
from spheredec.oracle import oracle_finite, oracle_lattice
from spheredec.reduction import lll_reduce
from spheredec.sampling import VoronoiSampler, pam_transmit, rng_for

pytestmark = pytest.mark.slow

BUDGET_S = float(os.environ.get("SPHEREDEC_ACCEPTANCE_BUDGET_S", "1200"))
SEED = 1
LLL_DELTA = 0.99
TREND_DIMS = (10, 20, 30, 40, 50, 60)
ACCEPT_STREAM = 77


def report(capsys, number, ok, detail):
    line = "%s criterion %d: %s" % ("PASS" if ok else "FAIL", number, detail)
    with capsys.disabled():
        sys.stdout.write("\n" + line + "\n")
    assert ok, line


def config(label, levels=None):
    if label % 2:
        return DecoderConfig.from_algorithm(label)
    return DecoderConfig.from_algorithm(label, 0, levels - 1)


def close(a, b):
    return abs(a - b) <= 1e-9 * max(abs(b), 1e-300) or a == b


@pytest.fixture(scope="module")
def trend():
    """LLL-reduced lattice campaign over TREND_DIMS, one dimension at a time."""
    deadline = time.time() + BUDGET_S
    reports, stopped = {}, None
    for n in TREND_DIMS:
        spec = ExperimentSpec(dims=(n,), m_matrices=20, reduce="lll", lll_delta=LLL_DELTA,
                              pairs=((1, 5), (3, 7)), seed=SEED)
        try:
            reports[n] = run_experiment(spec, deadline=deadline)
        except BudgetExceeded as exc:
            stopped = "budget of %.0fs exhausted (%s)" % (BUDGET_S, exc)
            break
    return reports, stopped


def summary(reports, pair, metric="flops"):
    return ", ".join("n=%d: %.3f" % (n, r.gain(n, pair, metric)) for n, r in sorted(reports.items()))


def test_criterion_1_oracle_equivalence(capsys):
    bad, checked = [], 0
    for n in range(2, 9):
        for t in range(1000):
            rng = rng_for(SEED, ACCEPT_STREAM, 1, n, t)
            pair = lower_triangularize(rng.standard_normal((n, n)))
            r = rng.standard_normal(n) * 2.0
            ref = oracle_lattice(pair.g, pair.h, r)
            for a in (1, 3, 5, 7):
                res = SphereDecoder(config(a), pair).decode(r)
                checked += 1
                if not close(res.squared_distance, ref.best_sq_dist) or (
                        ref.margin > 1e-6 and res.u_hat.tolist() != ref.best_u.tolist()):
                    bad.append(("lattice", n, t, a))
    for levels in (2, 4):
        for n in range(2, 11):
            for t in range(1000):
                rng = rng_for(SEED, ACCEPT_STREAM, 2, levels, n, t)
                g = rng.standard_normal((n, n))
                pair = lower_triangularize(g)
                _, r = pam_transmit(g, levels, float(t % 3) * 5.0, rng)
                r = pair.rotate(r)
                ref = oracle_finite(pair.g, r, 0, levels - 1)
                for a in (2, 4, 6, 8):
                    res = SphereDecoder(config(a, levels), pair).decode(r)
                    checked += 1
                    if not close(res.squared_distance, ref.best_sq_dist) or (
                            ref.margin > 1e-6 and res.u_hat.tolist() != ref.best_u.tolist()):
                        bad.append(("finite", levels, n, t, a))
    report(capsys, 1, not bad, "%d decodes checked against brute force, %d mismatches %s"
           % (checked, len(bad), bad[:5]))


def test_criterion_2_identical_traces(capsys):
    mismatches, instances = [], 10_000
    for k in range(instances):
        n = 2 + k % 31
        rng = rng_for(SEED, ACCEPT_STREAM, 3, k)
        g = rng.standard_normal((n, n))
        if n > 16:
            g = lll_reduce(g).g_reduced
        pair = lower_triangularize(g)
        if k % 2 == 0:
            r = rng.standard_normal(n) * 2.0
            group, levels = (1, 3, 5, 7), None
        else:
            levels = 4 if n <= 16 and k % 4 == 1 else 2
            _, r = pam_transmit(g, levels, 0.0, rng)
            r = pair.rotate(r)
            group = (2, 4, 6, 8)
        traces = [SphereDecoder(config(a, levels), pair).trace(r) for a in group]
        ref_trace, ref_res = traces[0]
        for a, (tr, res) in zip(group[1:], traces[1:]):
            if (not np.array_equal(tr.layers, ref_trace.layers)
                    or not np.array_equal(tr.candidates, ref_trace.candidates)
                    or not np.array_equal(res.u_hat, ref_res.u_hat)):
                mismatches.append((k, n, a))
    report(capsys, 2, not mismatches, "%d instances (n=2..32), %d trace mismatches %s"
           % (instances, len(mismatches), mismatches[:5]))


def test_criterion_3_headline_gain(capsys, trend):
    reports, stopped = trend
    if 60 not in reports:
        report(capsys, 3, False, "n=60 campaign not completed: %s; gains (3,7) so far: %s"
               % (stopped, summary(reports, (3, 7))))
    g = reports[60].gain(60, (3, 7))
    report(capsys, 3, 3.0 <= g <= 5.0, "flop gain (3,7) at n=60 = %.3f, band [3, 5]" % g)


def test_criterion_4_linear_trend(capsys, trend):
    reports, stopped = trend
    dims = sorted(reports)
    if tuple(dims) != TREND_DIMS:
        report(capsys, 4, False, "only n=%s completed: %s; gains (1,5): %s; (3,7): %s"
               % (dims, stopped, summary(reports, (1, 5)), summary(reports, (3, 7))))
    parts, ok = [], True
    for pair in ((1, 5), (3, 7)):
        gains = np.array([reports[n].gain(n, pair) for n in dims])
        slope, icpt = np.polyfit(dims, gains, 1)
        resid = gains - (slope * np.array(dims) + icpt)
        r2 = 1 - np.sum(resid ** 2) / np.sum((gains - gains.mean()) ** 2)
        inc = bool(np.all(np.diff(gains) > 0))
        ok = ok and inc and r2 >= 0.9
        parts.append("%s gains %s increasing=%s R2=%.3f" % (pair, np.round(gains, 3).tolist(), inc, r2))
    report(capsys, 4, ok, "; ".join(parts))


def test_criterion_5_intop_penalty(capsys, trend):
    reports, stopped = trend
    high = [n for n in sorted(reports) if n >= 40]
    if not high:
        report(capsys, 5, False, "no campaign at n >= 40 completed: %s" % stopped)
    parts, ok = [], True
    for n in high:
        for old, new in ((1, 5), (3, 7)):
            ratio = reports[n].gain(n, (new, old), "intops")
            ok = ok and ratio <= 1.25
            parts.append("n=%d %d/%d=%.3f" % (n, new, old, ratio))
    note = "" if stopped is None else " (larger n not completed: budget)"
    report(capsys, 5, ok, "intops(new)/intops(old): %s, limit 1.25%s" % (", ".join(parts), note))


def test_criterion_6_flop_dominance(capsys, trend):
    reports, stopped = trend
    if 60 not in reports:
        known = ", ".join("n=%d: %.2f" % (n, r.totals(n, 3, "flops").sum() / r.totals(n, 3, "intops").sum())
                          for n, r in sorted(reports.items()))
        report(capsys, 6, False, "n=60 campaign not completed: %s; algorithm 3 flops/intops so far: %s"
               % (stopped, known))
    r = reports[60]
    ratio = r.totals(60, 3, "flops").sum() / r.totals(60, 3, "intops").sum()
    report(capsys, 6, ratio >= 5, "algorithm 3 flops/intops at n=60 = %.2f, need >= 5" % ratio)


def test_criterion_7_finite_ordering(capsys):
    gains = {}
    for snr in (0.0, 5.0, 10.0):
        spec = ExperimentSpec(family="finite", dims=(40,), m_matrices=20, levels=2, snr_db=snr,
                              pairs=((2, 6), (4, 8)), seed=SEED)
        rep = run_experiment(spec)
        gains[snr] = (rep.gain(40, (2, 6)), rep.gain(40, (4, 8)))
    ok_a = gains[0.0][0] > gains[10.0][0] and gains[0.0][1] > gains[10.0][1]
    ok_b = all(gg > gh for gg, gh in gains.values())
    detail = ", ".join("%gdB G=%.3f H=%.3f" % (s, gg, gh) for s, (gg, gh) in gains.items())
    report(capsys, 7, ok_a and ok_b, "%s; low SNR higher: %s; G above H: %s" % (detail, ok_a, ok_b))


def test_criterion_8_voronoi(capsys):
    nonzero = 0
    for j in range(10):
        g = lll_reduce(rng_for(SEED, ACCEPT_STREAM, 8, j).standard_normal((8, 8))).g_reduced
        pair = lower_triangularize(g)
        sampler = VoronoiSampler(pair)
        check = SphereDecoder(config(7), pair)
        rng = rng_for(SEED, ACCEPT_STREAM, 9, j)
        for _ in range(1000):
            nonzero += bool(check.decode(sampler.sample(rng)).u_hat.any())
    n = 8
    cubic = VoronoiSampler(LowerTriangularPair.from_lower(np.eye(n)))
    rng = rng_for(SEED, ACCEPT_STREAM, 10)
    m2 = np.mean([np.sum(cubic.sample(rng) ** 2) for _ in range(10_000)])
    rel = abs(m2 - n / 12) / (n / 12)
    report(capsys, 8, nonzero == 0 and rel <= 0.05,
           "10000 samples, %d not decoding to 0; cubic second moment %.4f vs %.4f (%.2f%%)"
           % (nonzero, m2, n / 12, 100 * rel))


FROZEN = [
    (3, [[1.0]], [0.3], None, (8, 0)),
    (7, [[1.0]], [0.3], None, (10, 0)),
    (1, [[1.0, 0.0], [0.0, 1.0]], [0.4, -0.3], None, (26, 4)),
    (3, [[1.0, 0.0], [0.0, 1.0]], [0.4, -0.3], None, (26, 4)),
    (7, [[1.0, 0.0], [0.0, 1.0]], [0.4, -0.3], None, (28, 4)),
    (4, [[1.0, 0.0], [0.0, 1.0]], [-0.2, 0.7], 2, (26, 6)),
]


def test_criterion_9_counting_audit(capsys):
    got = []
    for alg, g, r, levels, expected in FROZEN:
        res = SphereDecoder(config(alg, levels), LowerTriangularPair.from_lower(g)).decode(r)
        got.append(((res.counters.flops, res.counters.intops), expected))
    ok = all(a == b for a, b in got)
    report(capsys, 9, ok, "frozen (flops, intops): %s" % ", ".join("%s==%s" % p for p in got))


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v", "-p", "no:cacheprovider"]))
