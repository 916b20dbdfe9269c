"""Command-line front end.

Subcommands:

* run     -- stream one problem instance through an engine, optionally
             verifying against the reference DP and dumping a probe trace
* trials  -- sample the structured hard distribution and report the
             per-arrival LCS/Hamming/edit facts
* probes  -- amortised probe-count scaling table for the edit engine
* itree   -- interval-tree transfer report for a trace (from a file or
             an inline run)

Exit codes: 0 success, 1 usage error, 2 verification failure, 3 I/O
error.  All randomness flows through numpy's default PCG64 generator
seeded from --seed, so equal invocations produce byte-identical output.
The PROBESTREAM_THREADS environment variable caps worker processes for
multi-trial commands (default 1).
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys

import numpy as np

from . import hardness, oracles, transfer
from .core import as_codes
from .editsim import EditStream, ProbedNaiveEdit, run_edit_stream
from .memory import AccessLog

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFY = 2
EXIT_IO = 3


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("PROBESTREAM_THREADS", "1")))
    except ValueError:
        return 1


def _load_codes(path: str, fmt: str) -> np.ndarray:
    try:
        if fmt == "bytes":
            with open(path, "rb") as fh:
                return np.frombuffer(fh.read(), dtype=np.uint8).astype(np.int64)
        with open(path) as fh:
            return np.asarray([int(tok) for tok in fh.read().split()],
                              dtype=np.int64)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}", EXIT_IO)
    except ValueError as exc:
        raise CliError(f"bad integer codes in {path}: {exc}", EXIT_USAGE)


def _emit(rows, header, fmt, out=None):
    out = sys.stdout if out is None else out
    if fmt == "json":
        json.dump([dict(zip(header, r)) for r in rows], out, indent=0)
        out.write("\n")
    else:
        w = csv.writer(out)
        w.writerow(header)
        w.writerows(rows)


def cmd_run(args) -> int:
    if args.fixed:
        F = _load_codes(args.fixed, args.input_format)
        n = len(F)
    else:
        n = args.n
        rng = np.random.default_rng(args.seed)
        F = rng.integers(0, 1 << args.delta, n, dtype=np.int64)
    if args.stream:
        S = _load_codes(args.stream, args.input_format)
    else:
        rng = np.random.default_rng([args.seed, 1])
        S = rng.integers(0, 1 << args.delta, 3 * n, dtype=np.int64)
    if args.problem != "edit" and len(S) < 3 * n:
        raise CliError("window problems need a stream of length >= 3n",
                       EXIT_USAGE)

    if args.problem == "edit" and args.alg in ("alg1", "alg2"):
        if n & (n - 1):
            raise CliError("the cell-probe engine needs |F| a power of two "
                           "(pad the input first)", EXIT_USAGE)
        delta = max(args.delta, int(F.max()).bit_length(),
                    int(S.max()).bit_length(), 1)
        outputs, eng = run_edit_stream(F, S, w=args.w, variant=args.alg,
                                       delta=delta,
                                       charge_arrival=args.charge_arrival)
        mem = eng.mem
    else:
        outputs = oracles.stream_outputs(args.problem, F, S, mod=args.mod)
        mem = None

    if args.verify:
        if args.problem == "edit" and mem is not None:
            ref = oracles.online_edit_naive(F, S)
        else:
            ref = oracles.stream_outputs(args.problem, F, S, mod=args.mod)
        if not np.array_equal(outputs, ref):
            print("verification FAILED", file=sys.stderr)
            return EXIT_VERIFY
        print(f"verified {len(outputs)} outputs", file=sys.stderr)

    if args.trace:
        if mem is None or mem.log is None:
            raise CliError("--trace needs an engine run (edit alg1/alg2)",
                           EXIT_USAGE)
        try:
            if args.trace.endswith(".csv"):
                mem.log.to_csv(args.trace)
            else:
                mem.log.to_binary(args.trace)
        except OSError as exc:
            raise CliError(f"cannot write trace: {exc}", EXIT_IO)

    _emit([(t, int(v)) for t, v in enumerate(outputs)], ("t", "output"),
          args.format)
    if mem is not None:
        print(f"probes: reads={mem.read_probes} writes={mem.write_probes}",
              file=sys.stderr)
    return EXIT_OK


def cmd_trials(args) -> int:
    rep = hardness.trial_suite(
        args.n, args.trials, args.seed,
        include_min_edit=not args.no_min_edit,
        lcs_oracle=args.lcs_oracle,
        workers=_workers())
    records = rep.pop("records")
    rows = [tuple("" if r[c] is None else r[c]
                  for c in hardness.REPORT_COLUMNS) for r in records]
    if args.out:
        try:
            with open(args.out, "w", newline="") as fh:
                _emit(rows, hardness.REPORT_COLUMNS, args.format, out=fh)
        except OSError as exc:
            raise CliError(f"cannot write report: {exc}", EXIT_IO)
    else:
        _emit(rows, hardness.REPORT_COLUMNS, args.format)
    json.dump(rep, sys.stderr if args.out is None else sys.stdout, indent=2)
    (sys.stderr if args.out is None else sys.stdout).write("\n")
    if rep["squeeze_violations"] or rep["conditional_violations"]:
        return EXIT_VERIFY
    return EXIT_OK


def measure_amortized(n: int, w: int, seed: int, *, variant: str = "alg2",
                      delta: int = 2) -> float:
    """Amortised probes per arrival over the window [n, 2n)."""
    rng = np.random.default_rng([seed, n, w])
    F = rng.integers(0, 1 << delta, n, dtype=np.int64)
    S = rng.integers(0, 1 << delta, 2 * n, dtype=np.int64)
    eng = EditStream(F, w=w, variant=variant, delta=delta)
    eng.mem.log = None  # probe counters suffice; skip per-cell logging
    before = None
    for i, sym in enumerate(S.tolist()):
        if i == n:
            before = eng.mem.total_probes
        eng.arrival(sym)
    return (eng.mem.total_probes - before) / n


def fit_scaling(points) -> float:
    """Least-squares constant c for probes ~ c * (log2 n)^2 / w, in log space."""
    logs = [math.log(p / ((math.log2(n) ** 2) / w)) for n, w, p in points]
    return math.exp(sum(logs) / len(logs))


def cmd_probes(args) -> int:
    sizes = [int(x) for x in args.n_list.split(",")]
    points = []
    for n in sizes:
        p = measure_amortized(n, args.w, args.seed, variant=args.alg,
                              delta=args.delta)
        points.append((n, args.w, p))
    c = fit_scaling(points)
    rows = []
    for n, w, p in points:
        model = c * (math.log2(n) ** 2) / w
        rows.append((n, w, f"{p:.4f}", f"{model:.4f}", f"{p / model:.4f}"))
    _emit(rows, ("n", "w", "amortized_probes", "model", "ratio"), args.format)
    print(f"fit c = {c:.4f}", file=sys.stderr)
    return EXIT_OK


def cmd_itree(args) -> int:
    if args.trace:
        try:
            log = AccessLog.from_binary(args.trace)
        except (OSError, ValueError) as exc:
            raise CliError(f"cannot load trace: {exc}", EXIT_IO)
        n = args.n
    else:
        rng = np.random.default_rng(args.seed)
        n = args.n
        F = rng.integers(0, 1 << args.delta, n, dtype=np.int64)
        S = rng.integers(0, 1 << args.delta, n, dtype=np.int64)
        if args.alg == "naive":
            eng = ProbedNaiveEdit(F, w=args.w)
        else:
            eng = EditStream(F, w=args.w, variant=args.alg, delta=args.delta)
        eng.run(S)
        log = eng.mem.log
    rep = transfer.transfer_report(log, n)
    json.dump(rep, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="probestream",
                                description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--n", type=int, default=64)
        sp.add_argument("--w", type=int, default=64)
        sp.add_argument("--delta", type=int, default=2)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--format", choices=("csv", "json"), default="csv")

    sp = sub.add_parser("run", help="stream one instance through an engine")
    common(sp)
    sp.add_argument("--problem",
                    choices=("edit", "hamming", "convolution", "lcs"),
                    default="edit")
    sp.add_argument("--alg", choices=("naive", "alg1", "alg2"),
                    default="alg2")
    sp.add_argument("--mod", type=int, default=0,
                    help="reduce convolution outputs modulo this")
    sp.add_argument("--verify", action="store_true")
    sp.add_argument("--charge-arrival", action="store_true",
                    help="also charge reading the arriving symbol")
    sp.add_argument("--trace", help="write the probe trace here "
                                    "(.csv for text, else binary)")
    sp.add_argument("--fixed", help="file with the fixed string")
    sp.add_argument("--stream", help="file with the stream")
    sp.add_argument("--input-format", choices=("bytes", "ints"),
                    default="ints")
    sp.set_defaults(fn=cmd_run)

    sp = sub.add_parser("trials", help="hard-distribution trial suite")
    common(sp)
    sp.add_argument("--trials", type=int, default=10)
    sp.add_argument("--no-min-edit", action="store_true")
    sp.add_argument("--lcs-oracle", choices=("auto", "dp", "pi"),
                    default="auto")
    sp.add_argument("--out", help="write the record CSV here")
    sp.set_defaults(fn=cmd_trials)

    sp = sub.add_parser("probes", help="amortised probe scaling table")
    common(sp)
    sp.add_argument("--n-list", default="256,512,1024,2048,4096,8192")
    sp.add_argument("--alg", choices=("alg1", "alg2"), default="alg2")
    sp.set_defaults(fn=cmd_probes)

    sp = sub.add_parser("itree", help="interval-tree transfer report")
    common(sp)
    sp.add_argument("--trace", help="binary trace from a prior run")
    sp.add_argument("--alg", choices=("naive", "alg1", "alg2"),
                    default="alg2")
    sp.set_defaults(fn=cmd_itree)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.fn(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
