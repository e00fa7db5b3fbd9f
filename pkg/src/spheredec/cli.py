"""Command-line entry point: ``spheredec decode | verify | experiment``.

decode output grammar (one line each)::

    u_hat=<int> <int> ... dist2=<float>
    flops=<int> intops=<int>

Floats are printed with ``repr`` so they round-trip exactly.
"""
import argparse
import sys

import numpy as np

from .decoder import DecoderConfig, SphereDecoder
from .experiments import (
    FINITE, LATTICE, BudgetExceeded, DecoderMismatch, ExperimentSpec,
    run_experiment, verify,
)
from .linalg import (
    LowerTriangularPair, invert_lower_triangular, lower_triangularize, read_matrix,
)
from .reduction import DEFAULT_DELTA


def parse_dims(text):
    """``"2..6"`` (inclusive), ``"10:10:60"`` (start:step:stop, inclusive) or ``"4,8,16"``."""
    try:
        if ".." in text:
            lo, hi = text.split("..")
            return list(range(int(lo), int(hi) + 1))
        if ":" in text:
            parts = [int(p) for p in text.split(":")]
            if len(parts) != 3 or parts[1] < 1:
                raise ValueError
            start, step, stop = parts
            return list(range(start, stop + 1, step))
        return [int(p) for p in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError("bad dimension list %r" % text)


def parse_pairs(text):
    try:
        pairs = []
        for chunk in text.split(";"):
            old, new = chunk.split(",")
            pairs.append((int(old), int(new)))
        return tuple(pairs)
    except ValueError:
        raise argparse.ArgumentTypeError("pairs look like '3,7;1,5', got %r" % text)


def build_parser():
    parser = argparse.ArgumentParser(prog="spheredec", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decode", help="decode one received vector")
    p.add_argument("--matrix-file", required=True, help="basis in 'n m' + rows text format")
    p.add_argument("--h-form", action="store_true",
                   help="the file holds the lower-triangular inverse H instead of a basis")
    p.add_argument("--algorithm", type=int, required=True, choices=range(1, 9))
    p.add_argument("--r", type=float, nargs="+", required=True, help="received vector")
    p.add_argument("--umin", type=int)
    p.add_argument("--umax", type=int)

    p = sub.add_parser("verify", help="compare all eight decoders with brute force")
    p.add_argument("--dims", type=parse_dims, default=parse_dims("2..6"))
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("experiment", help="measure old/new operation-count gains")
    p.add_argument("--family", choices=(LATTICE, FINITE), default=LATTICE)
    p.add_argument("--dims", type=parse_dims, required=True)
    p.add_argument("--M", type=int, default=20, dest="m_matrices", help="generator matrices per n")
    p.add_argument("--N", type=int, default=None, dest="n_vectors",
                   help="vectors per matrix (default max(20, round(20000/n^2)))")
    p.add_argument("--L", type=int, default=2, dest="levels", help="PAM levels (finite family)")
    p.add_argument("--snr-db", type=float, default=0.0)
    p.add_argument("--reduce", choices=("none", "lll"), default="none")
    p.add_argument("--lll-delta", type=float, default=DEFAULT_DELTA)
    p.add_argument("--pairs", type=parse_pairs, default=None, help="e.g. '1,5;3,7'")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--allow-slow", action="store_true",
                   help="permit unreduced lattice decoding above n=40")
    p.add_argument("--workers", type=int, default=None,
                   help="worker processes (default $SPHEREDEC_WORKERS or CPU count)")
    p.add_argument("--out", required=True, help="CSV path; raw totals go to <stem>.raw.csv")
    return parser


def _decode(args, out):
    a = read_matrix(args.matrix_file)
    if args.h_form:
        g = invert_lower_triangular(a)
        pair = LowerTriangularPair.from_lower(g)
        basis = g
    else:
        basis = a
        pair = lower_triangularize(a)
    r = np.array(args.r)
    if r.shape[0] != basis.shape[1]:
        raise ValueError("--r has %d entries, the basis has %d columns" % (r.shape[0], basis.shape[1]))
    finite = args.algorithm % 2 == 0
    if finite and (args.umin is None or args.umax is None):
        raise ValueError("algorithm %d needs --umin and --umax" % args.algorithm)
    cfg = DecoderConfig.from_algorithm(args.algorithm, args.umin, args.umax)
    res = SphereDecoder(cfg, pair).decode(pair.rotate(r))
    diff = r - res.u_hat @ basis
    out.write("u_hat=%s dist2=%r\n" % (" ".join(str(int(u)) for u in res.u_hat), float(diff @ diff)))
    out.write("flops=%d intops=%d\n" % (res.counters.flops, res.counters.intops))
    return 0


def _verify(args, out):
    passed, total, failures = verify(args.dims, args.trials, args.seed)
    for f in failures:
        out.write("FAIL %s\n" % f)
    out.write("passed %d/%d\n" % (passed, total))
    return 0 if passed == total else 1


def _experiment(args, out):
    spec = ExperimentSpec(
        family=args.family, dims=tuple(args.dims), m_matrices=args.m_matrices,
        n_vectors=args.n_vectors, levels=args.levels, snr_db=args.snr_db,
        reduce=args.reduce, lll_delta=args.lll_delta, pairs=args.pairs,
        seed=args.seed, allow_slow=args.allow_slow,
    )
    report = run_experiment(spec, workers=args.workers)
    path, raw_path = report.to_csv(args.out)
    for row in report.rows():
        out.write("n=%s %s/%s %s gain=%s\n" % (row["n"], row["algo_old"], row["algo_new"],
                                               row["metric"], row["gain"]))
    out.write("wrote %s and %s\n" % (path, raw_path))
    return 0


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {"decode": _decode, "verify": _verify, "experiment": _experiment}
    try:
        return handlers[args.command](args, out)
    except DecoderMismatch as exc:
        sys.stderr.write("mismatch (reproduce with the values below):\n%s\n" % exc)
        return 3
    except BudgetExceeded as exc:
        sys.stderr.write("%s\n" % exc)
        return 4
    except (ValueError, OSError) as exc:
        sys.stderr.write("spheredec: error: %s\n" % exc)
        return 2


if __name__ == "__main__":
    sys.exit(main())
