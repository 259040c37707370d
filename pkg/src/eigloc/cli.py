"""Command-line entry point: ``eigloc <subcommand> ...``.

Exit codes:
  0  claims/conclusions verified
  1  usage, parse or I/O error (including degenerate SBM parameters)
  2  localize: c <= 0, boundary case, or bounds not applicable
  3  signature: condition fails (or holds only degenerately)
  4  a checked claim was violated numerically
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import math
import sys

import numpy as np

from . import experiment, mmio, sbm, signature as sig
from .localize import (
    LandmarkAntiAligned,
    counterexample_antidiag,
    counterexample_diag,
    localize,
)
from .linalg import SymmetricMatrix

DIGITS = 12


class CliError(Exception):
    pass


def _num(v):
    if isinstance(v, float):
        return float(f"{v:.{DIGITS}g}") if math.isfinite(v) else None
    return v


def _render(record: dict, fmt: str) -> str:
    record = {k: _num(v) for k, v in record.items()}
    if fmt == "json":
        return json.dumps(record, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(record.keys())
        w.writerow("" if v is None else v for v in record.values())
        return buf.getvalue()
    width = max(len(k) for k in record)
    return "".join(f"{k:<{width}}  {'-' if v is None else v}\n" for k, v in record.items())


def _emit(text: str, out):
    if out in (None, "-"):
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        mmio.atomic_write(out, text)


def _read_matrix(path):
    try:
        return mmio.read_matrix(path)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}") from exc
    except ValueError as exc:
        raise CliError(f"{path}: {exc}") from exc


def _landmark(spec: str, n: int):
    if spec == "ones":
        return np.ones(n)
    kind, _, path = spec.partition(":")
    if kind not in ("planted", "vector") or not path:
        raise CliError(f"bad landmark spec {spec!r}; use ones, planted:<file> or vector:<file>")
    try:
        x = mmio.read_vector(path)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}") from exc
    except ValueError as exc:
        raise CliError(f"{path}: {exc}") from exc
    if x.size != n:
        raise CliError(f"landmark has length {x.size}, matrix has order {n}")
    if kind == "planted" and not np.all(np.abs(x) == 1):
        raise CliError("planted landmark must have entries +1/-1")
    if not np.any(x):
        raise CliError("landmark must be nonzero")
    return x


def cmd_localize(args):
    a = _read_matrix(args.matrix)
    x = _landmark(args.landmark, a.n)
    try:
        report = localize(a, x)
    except LandmarkAntiAligned as exc:
        c = exc.c
        _emit(_render({"c": c, "status": "anti-aligned", "note": str(exc)}, args.format),
              args.out)
        return 2
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    record = report.to_dict()
    if not report.verified:
        status, code = "claim violated", 4
    elif not report.simple_dominant_guaranteed:
        status, code = ("boundary case" if report.xi is not None else "bounds not applicable"), 2
    else:
        status, code = "verified", 0
    record["status"] = status
    _emit(_render(record, args.format), args.out)
    return code


def cmd_signature(args):
    if args.n is not None and not (1 <= args.k and 2 * args.k < args.n):
        _bad_k(args.k, args.n)
    a = _read_matrix(args.matrix)
    if args.n is not None and a.n != args.n:
        raise CliError(f"matrix has order {a.n}, --n says {args.n}")
    if not (1 <= args.k and 2 * args.k < a.n):
        _bad_k(args.k, a.n)
    if args.variant == "plain":
        if args.alpha is not None:
            raise CliError("--alpha applies to --variant shifted only")
        report = sig.check_signature(a, args.k)
    elif args.variant == "shifted":
        if args.alpha is None:
            raise CliError("--variant shifted needs --alpha")
        report = sig.check_signature_shifted(a, args.k, args.alpha)
    else:
        report = sig.check_signature_variance(a, args.k)
    record = report.to_dict()
    if not report.condition_holds:
        status, code = "condition fails", 3
    elif report.degenerate:
        status, code = "degenerate: shifted matrix vanishes, no conclusions", 3
    elif report.conclusions_hold:
        status, code = ("equality case" if report.condition_lhs == report.condition_rhs
                        else "verified"), 0
    else:
        status, code = "claim violated", 4
    record["status"] = status
    _emit(_render(record, args.format), args.out)
    return code


def _bad_k(k, n):
    raise CliError(f"k must satisfy 1 <= k < n/2, got k={k}, n={n}")


def _params(n, p_in, p_out, seed, args):
    try:
        return sbm.SbmParams(n, p_in, p_out, seed, loopless=args.loopless,
                             permute=args.permute, strict=not args.allow_reversed)
    except ValueError as exc:
        raise CliError(str(exc)) from exc


def _summary_text(s):
    lines = [
        f"n={s.params['n']} p_in={s.params['p_in']} p_out={s.params['p_out']} "
        f"seed={s.params['seed']} trials={s.trials}",
    ]
    if s.error:
        lines.append(f"error: {s.error}")
        return "\n".join(lines) + "\n"
    fields = ("gamma", "xi_bar", "mu_pred", "completed", "skipped", "gap_flag_count",
              "frac_cos_ok", "frac_lambda_ok", "frac_rel_gap_ok", "mean_accuracy",
              "frac_accuracy_ok", "epsilon", "epsilon_acc", "lambda_slack")
    for f in fields:
        v = getattr(s, f)
        lines.append(f"  {f:<17} {'absent' if v is None else _num(v)}")
    return "\n".join(lines) + "\n"


def _run_grid(args, grid):
    try:
        return experiment.sweep(grid, args.trials, args.epsilon, args.epsilon_acc,
                                args.lambda_slack, args.threads)
    except ValueError as exc:
        raise CliError(str(exc)) from exc


def _write_summaries(args, summaries, single):
    if args.trials_csv:
        mmio.atomic_write(args.trials_csv, _sweep_csv(summaries))
    if args.format == "json":
        text = summaries[0].to_json(DIGITS) if single else experiment.summaries_json(summaries, DIGITS)
    elif args.format == "csv":
        text = _sweep_csv(summaries) if not single else experiment.trials_csv(summaries[0].results, DIGITS)
    else:
        text = "".join(_summary_text(s) for s in summaries)
    _emit(text, args.out)
    return 1 if any(s.error for s in summaries) else 0


def _sweep_csv(summaries):
    parts = []
    for i, s in enumerate(summaries):
        extra = {"n": s.params["n"], "p_in": s.params["p_in"], "p_out": s.params["p_out"]}
        text = experiment.trials_csv(s.results, DIGITS, extra)
        parts.append(text if i == 0 else text.split("\n", 1)[1])
    return "".join(parts)


def cmd_sbm_run(args):
    params = _params(args.n, args.pin, args.pout, args.seed, args)
    try:
        sbm.gamma(params.p_in, params.p_out)
    except sbm.DegenerateModelError as exc:
        raise CliError(str(exc)) from exc
    summaries = _run_grid(args, [params])
    return _write_summaries(args, summaries, single=True)


def cmd_sbm_sweep(args):
    grid = [_params(n, pi, po, args.seed, args)
            for n, pi, po in itertools.product(args.n, args.pin, args.pout)]
    summaries = _run_grid(args, grid)
    return _write_summaries(args, summaries, single=False)


def cmd_gen_example(args):
    landmark = None
    sidecar = None
    kind = args.kind
    if kind == "blockj":
        _need(args, "k", "n")
        if not (1 <= args.k and 2 * args.k < args.n):
            _bad_k(args.k, args.n)
        a = sig.blockJ_example(args.k, args.n)
    elif kind == "ones":
        _need(args, "n")
        a = SymmetricMatrix(np.ones((args.n, args.n)))
    elif kind in ("ce-diag", "ce-antidiag"):
        if args.y:
            y = mmio.read_vector(args.y)
        else:
            _need(args, "m")
            y = np.ones(args.m)
        build = counterexample_diag if kind == "ce-diag" else counterexample_antidiag
        try:
            a, landmark = build(y)
        except ValueError as exc:
            raise CliError(str(exc)) from exc
    elif kind == "sbm":
        _need(args, "n")
        params = _params(args.n, args.pin, args.pout, args.seed, args)
        s = sbm.sample(params)
        a, landmark, sidecar = s.adjacency, s.planted, s.metadata_json()
    else:  # argparse restricts choices
        raise CliError(f"unknown example {kind!r}")
    if args.landmark_out and landmark is not None:
        mmio.write_vector(args.landmark_out, landmark)
    if args.sidecar and sidecar is not None:
        mmio.atomic_write(args.sidecar, sidecar)
    mmio.write_matrix(args.out, a, fmt=args.mm_format, comment=f"eigloc gen-example {kind}")
    return 0


def _need(args, *names):
    missing = [f"--{n}" for n in names if getattr(args, n) is None]
    if missing:
        raise CliError(f"gen-example {args.kind} needs {', '.join(missing)}")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser():
    p = _Parser(prog="eigloc", description=(
        "Localize dominant eigenpairs with Frobenius inner products, check "
        "eigenvector sign patterns, and run two-block SBM experiments."))
    sub = p.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    def output_opts(sp, default="json"):
        sp.add_argument("--format", choices=("json", "csv", "text"), default=default)
        sp.add_argument("--out", help="output path (default stdout); written atomically")

    sp = sub.add_parser("localize", help="bounds on the rightmost eigenpair of A from a landmark")
    sp.add_argument("--matrix", default="-", help="Matrix Market file, '-' for stdin")
    sp.add_argument("--landmark", default="ones", help="ones | planted:<file> | vector:<file>")
    output_opts(sp)
    sp.set_defaults(func=cmd_localize)

    sp = sub.add_parser("signature", help="sign pattern of the leading eigenvector")
    sp.add_argument("--matrix", default="-", help="Matrix Market file, '-' for stdin")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--n", type=int, help="expected order; validated before reading")
    sp.add_argument("--variant", choices=("plain", "shifted", "variance"), default="plain")
    sp.add_argument("--alpha", type=float)
    output_opts(sp)
    sp.set_defaults(func=cmd_signature)

    def sbm_opts(sp, many):
        nargs = "+" if many else None
        sp.add_argument("--n", type=int, required=True, nargs=nargs)
        sp.add_argument("--pin", type=float, required=True, nargs=nargs)
        sp.add_argument("--pout", type=float, required=True, nargs=nargs)
        sp.add_argument("--trials", type=int, default=100)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--epsilon", type=float, default=0.05)
        sp.add_argument("--epsilon-acc", type=float, default=0.02)
        sp.add_argument("--lambda-slack", type=float, default=0.1)
        sp.add_argument("--threads", type=int, help="overrides EIGLOC_THREADS")
        sp.add_argument("--loopless", action="store_true")
        sp.add_argument("--permute", action="store_true")
        sp.add_argument("--allow-reversed", action="store_true",
                        help="permit p_out > p_in (negative controls)")
        sp.add_argument("--trials-csv", help="also write one CSV row per trial here")
        output_opts(sp, default="text")

    sp = sub.add_parser("sbm-run", help="Monte-Carlo batch at one parameter point")
    sbm_opts(sp, many=False)
    sp.set_defaults(func=cmd_sbm_run)

    sp = sub.add_parser("sbm-sweep", help="batches over the grid n x pin x pout")
    sbm_opts(sp, many=True)
    sp.set_defaults(func=cmd_sbm_sweep)

    sp = sub.add_parser("gen-example", help="write an example matrix as Matrix Market")
    sp.add_argument("kind", choices=("blockj", "ones", "ce-diag", "ce-antidiag", "sbm"))
    sp.add_argument("--k", type=int)
    sp.add_argument("--n", type=int)
    sp.add_argument("--m", type=int, help="block size for ce-* with y = ones(m)")
    sp.add_argument("--y", help="vector file for ce-* examples")
    sp.add_argument("--pin", type=float, default=0.9)
    sp.add_argument("--pout", type=float, default=0.05)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--loopless", action="store_true")
    sp.add_argument("--permute", action="store_true")
    sp.add_argument("--allow-reversed", action="store_true")
    sp.add_argument("--landmark-out", help="write the example's landmark vector here")
    sp.add_argument("--sidecar", help="JSON metadata for sbm samples")
    sp.add_argument("--mm-format", choices=("coordinate", "array"), default="coordinate")
    sp.add_argument("--out", help="output path (default stdout)")
    sp.set_defaults(func=cmd_gen_example)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"eigloc {args.subcommand}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"eigloc {args.subcommand}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
