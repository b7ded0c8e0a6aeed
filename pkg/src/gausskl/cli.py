"""Command-line front-end.

Subcommands::

    gausskl kl P.json Q.json [--breakdown] [--mc N] [--seed S]
    gausskl vae-kl PARAMS.json [--grad-check] [--step H] [--tolerance REL]
    gausskl identity-check --dim K --trials T [--seed S] [--tolerance REL]

All accept ``--output {text,json}``. Exit status: 0 success, 1 a check
failed, 2 usage or input error.
"""

import argparse
import sys

import jsonschema
import numpy as np

from . import exceptions as exc
from .divergence import kl
from .gaussian import Gaussian
from .identities import ALGEBRAIC_RTOL, run_identity_suite
from .montecarlo import mc_kl
from .report import DISTRIBUTION_SCHEMA, VAE_PARAMS_SCHEMA, RunReport, loads_strict
from .vae import VaeKlParams, finite_difference_check, vae_kl_batch

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
GRAD_CHECK_TOL = 1e-6
MC_SIGMAS = 4.0


class InputError(Exception):
    """Bad user input; the message is printed as the diagnostic."""


def _load(path, schema):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror or e}") from e
    try:
        doc = loads_strict(text)
        jsonschema.validate(doc, schema)
    except ValueError as e:
        raise InputError(f"malformed spec in {path}: {e}") from e
    except jsonschema.ValidationError as e:
        raise InputError(f"malformed spec in {path}: {e.message}") from e
    return doc


def _numeric_error(path, e):
    if isinstance(e, exc.DimensionMismatch):
        return InputError(f"dimension mismatch in {path}: {e}")
    if isinstance(e, exc.NotPositiveDefinite):
        return InputError(f"covariance in {path} is not positive definite ({e})")
    if isinstance(e, exc.NotSymmetric):
        return InputError(f"covariance in {path} is not symmetric: {e}")
    if isinstance(e, exc.NonPositiveVariance):
        return InputError(f"non-positive variance in {path}: {e}")
    if isinstance(e, exc.NonFinite):
        return InputError(f"non-finite value in {path}: {e}")
    if isinstance(e, exc.RaggedBatch):
        return InputError(f"ragged batch in {path}: {e}")
    return InputError(f"invalid input in {path}: {e}")


def load_distribution(path):
    spec = _load(path, DISTRIBUTION_SCHEMA)
    try:
        if "cov" in spec:
            cov = spec["cov"]
            if any(len(row) != len(cov) for row in cov):
                raise exc.DimensionMismatch("cov must be a square matrix")
            return spec, Gaussian.full(spec["mean"], cov)
        return spec, Gaussian.diagonal(spec["mean"], spec["var"])
    except exc.GaussKLError as e:
        raise _numeric_error(path, e) from e


def load_vae_params(path):
    spec = _load(path, VAE_PARAMS_SCHEMA)
    mu, log_var = spec["mu"], spec["log_var"]
    try:
        batched = isinstance(mu[0], list)
        if batched != isinstance(log_var[0], list):
            raise exc.RaggedBatch("mu and log_var must both be rows or both be batches")
        if not batched:
            mu, log_var = [mu], [log_var]
        if len(mu) != len(log_var):
            raise exc.RaggedBatch(f"{len(mu)} mu rows but {len(log_var)} log_var rows")
        if len({len(r) for r in mu} | {len(r) for r in log_var}) != 1:
            raise exc.RaggedBatch("rows have differing lengths")
        rows = [VaeKlParams(m, lv) for m, lv in zip(mu, log_var)]
    except exc.GaussKLError as e:
        raise _numeric_error(path, e) from e
    return spec, rows


def _fmt(x):
    return f"{x:.6g}"


def run_kl(args):
    p_spec, p = load_distribution(args.p_file)
    q_spec, q = load_distribution(args.q_file)
    if p.dim != q.dim:
        raise InputError(f"dimension mismatch: P has dimension {p.dim}, Q has dimension {q.dim}")
    bd = kl(p, q)
    report = RunReport(
        command="kl",
        inputs={"p": p_spec, "q": q_spec},
        closed_form={**bd.to_dict(), "reported_total": bd.reported_total},
    )
    lines = [f"KL(P || Q) = {_fmt(bd.reported_total)}"]
    if args.breakdown:
        lines += [f"H1 = {_fmt(bd.h1)}", f"H2 = {_fmt(bd.h2)}", f"H3 = {_fmt(bd.h3)}"]
    if args.mc is not None:
        est = mc_kl(p, q, args.mc, args.seed)
        verdict = "PASS" if est.agrees_with(bd.total, MC_SIGMAS) else "FAIL"
        report.mc = est.to_dict()
        report.status["mc_agreement"] = verdict
        lines += [
            f"MC estimate = {_fmt(est.mean)} +/- {_fmt(est.std_error)} (n={est.n}, seed={est.seed})",
            f"MC agreement ({MC_SIGMAS:g} sigma): {verdict}",
        ]
    return report, lines


def run_vae_kl(args):
    spec, rows = load_vae_params(args.params_file)
    batch = vae_kl_batch(rows)
    values = [float(v) for v in batch.values]
    report = RunReport(
        command="vae-kl",
        inputs={"params": spec},
        closed_form={"values": values, "mean": batch.mean},
    )
    lines = [f"row {i}: KL = {_fmt(v)}" for i, v in enumerate(values)]
    lines.append(f"mean KL = {_fmt(batch.mean)}")
    if args.grad_check:
        tol = GRAD_CHECK_TOL if args.tolerance is None else args.tolerance
        err = max(finite_difference_check(r, args.step) for r in rows)
        verdict = "PASS" if err <= tol else "FAIL"
        report.gradient_check = err
        report.status["gradient_check"] = verdict
        lines.append(f"gradient check: max relative error = {_fmt(err)} (tolerance {tol:g}): {verdict}")
    return report, lines


def run_identity_check(args):
    rtol = ALGEBRAIC_RTOL if args.tolerance is None else args.tolerance
    results = run_identity_suite(args.dim, args.trials, args.seed, rtol=rtol)
    report = RunReport(
        command="identity-check",
        inputs={"dim": args.dim, "trials": args.trials, "seed": args.seed, "tolerance": rtol},
        identities=[r.to_dict() for r in results],
        status={r.name: "PASS" if r.passed else "FAIL" for r in results},
    )
    width = max(len(r.name) for r in results)
    lines = [
        f"{r.name:<{width}}  {r.kind:<11}  max deviation {_fmt(r.max_deviation):>11}"
        f"  threshold {_fmt(r.threshold):>11}  {'PASS' if r.passed else 'FAIL'}"
        for r in results
    ]
    return report, lines


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _seed(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _positive_float(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not (np.isfinite(value) and value > 0):
        raise argparse.ArgumentTypeError(f"must be a positive finite number, got {text!r}")
    return value


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", choices=("text", "json"), default="text")

    parser = argparse.ArgumentParser(
        prog="gausskl", description="Closed-form KL divergence between Gaussians."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("kl", parents=[common], help="KL(P || Q) from two distribution files")
    p.add_argument("p_file")
    p.add_argument("q_file")
    p.add_argument("--breakdown", action="store_true", help="print the H1/H2/H3 terms")
    p.add_argument("--mc", type=_positive_int, metavar="N", help="Monte Carlo cross-check with N samples")
    p.add_argument("--seed", type=_seed, default=0)
    p.set_defaults(func=run_kl)

    v = sub.add_parser("vae-kl", parents=[common], help="VAE regularizer from mu/log_var")
    v.add_argument("params_file")
    v.add_argument("--grad-check", action="store_true")
    v.add_argument("--step", type=_positive_float, default=1e-5)
    v.add_argument("--tolerance", type=_positive_float, help="gradient check tolerance (default 1e-6)")
    v.set_defaults(func=run_vae_kl)

    i = sub.add_parser("identity-check", parents=[common], help="randomized trace and moment identities")
    i.add_argument("--dim", type=_positive_int, required=True)
    i.add_argument("--trials", type=_positive_int, required=True)
    i.add_argument("--seed", type=_seed, default=0)
    i.add_argument("--tolerance", type=_positive_float, help="algebraic tolerance (default 1e-10)")
    i.set_defaults(func=run_identity_check)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "kl" and args.mc is not None and args.mc < 2:
        parser.error("--mc needs at least 2 samples")
    try:
        report, lines = args.func(args)
    except InputError as e:
        print(f"gausskl: error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except exc.GaussKLError as e:
        print(f"gausskl: error: {e}", file=sys.stderr)
        return EXIT_INPUT
    if args.output == "json":
        print(report.to_json())
    else:
        print("\n".join(lines))
    return EXIT_OK if report.passed else EXIT_FAIL


def entry_point():
    sys.exit(main())
