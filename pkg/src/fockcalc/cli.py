"""Command-line surface.

Subcommands::

    lambda      subset weight, truncated weight sums, series upper bound
    norm        weighted test-chain or dual-chain norm of a functional
    apply       operator pipeline, e.g. annihilate:2,create:2,expect
    decompose   mean/per-site split with residual table
    cov         covariance report for a pair of functionals
    verify      randomized identity suites -> JSON report, exit 1 on violation
    bridge      pathwise oracle checks, observable evaluation and CSV export

Functional arguments name JSON files ('-' reads stdin).  Exit codes: 0 all
checks passed, 1 an identity check failed, 2 usage or schema error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from .bridge import build_space, check_intertwining, evaluate, mc_estimate, path_expectation, write_observable_csv
from .clark_ocone import decompose
from .corpus import random_functionals
from .covariance import cov_identity
from .errors import FockCalcError
from .functional import FockFunctional, norm_dual, norm_p
from .gamma import gamma_weight_sum, lambda_weight, weight_sum_bound
from .operators import apply_pipeline
from .serialization import (
    covariance_to_obj,
    decomposition_to_obj,
    functional_to_obj,
    parse_functional,
    parse_subset,
)
from .suite import SUITE_NAMES, SuiteConfig, run_suite


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r") as handle:
        return handle.read()


def _load_functional(path: str) -> FockFunctional:
    return parse_functional(_read_text(path))


def _emit(payload, out: Optional[str]) -> None:
    text = json.dumps(payload, indent=2)
    if out:
        with open(out, "w") as handle:
            handle.write(text + "\n")
    else:
        print(text)


def _cmd_lambda(args) -> int:
    if args.sum:
        if args.p is None or args.n is None:
            raise FockCalcError("lambda --sum needs --p and --n")
        print(repr(gamma_weight_sum(args.p, args.n)))
        return 0
    if args.bound:
        if args.p is None:
            raise FockCalcError("lambda --bound needs --p")
        print(repr(weight_sum_bound(args.p)))
        return 0
    if args.subset is None:
        raise FockCalcError("lambda needs a subset argument, --sum, or --bound")
    try:
        raw = json.loads(args.subset)
    except json.JSONDecodeError as exc:
        raise FockCalcError(f"subset must be a JSON array: {exc.msg}") from None
    sigma = parse_subset(raw)
    print(repr(lambda_weight(sigma)))
    return 0


def _cmd_norm(args) -> int:
    phi = _load_functional(args.file)
    level = args.p if args.p is not None else 0.0
    value = norm_dual(phi, level) if args.dual else norm_p(phi, level)
    print(repr(value))
    return 0


def _cmd_apply(args) -> int:
    phi = _load_functional(args.file)
    result = apply_pipeline(phi, args.pipeline)
    _emit(functional_to_obj(result), args.out)
    return 0


def _cmd_decompose(args) -> int:
    phi = _load_functional(args.file)
    q_probe = tuple(args.q) if args.q else (0.0, 1.0, 2.0)
    report = decompose(phi, q_probe)
    _emit(decomposition_to_obj(report), args.out)
    return 0


def _cmd_cov(args) -> int:
    phi = _load_functional(args.file)
    psi = _load_functional(args.other)
    level = args.p if args.p is not None else 0.0
    _emit(covariance_to_obj(cov_identity(phi, psi, level)), args.out)
    return 0


def _cmd_verify(args) -> int:
    cfg = SuiteConfig(
        suite=args.suite,
        trials=args.trials,
        seed=args.seed,
        support_max=args.support_max,
        max_terms=args.max_terms,
        p_grid=tuple(args.p) if args.p else (0.0, 1.0, 2.0),
        tolerance=args.tolerance,
        horizon=args.horizon,
        threads=args.threads,
    )
    report = run_suite(cfg)
    _emit(report, args.out)
    return 0 if report["pass"] else 1


def _cmd_bridge(args) -> int:
    if args.eval is not None:
        phi = _load_functional(args.eval)
        if args.mode == "sampled":
            space = build_space(args.horizon, "sampled", M=args.paths, seed=args.seed)
            mean, stderr = mc_estimate(phi, space)
            payload = {"mean": [mean.real, mean.imag], "stderr": stderr,
                       "paths": space.num_paths, "seed": args.seed}
        else:
            space = build_space(args.horizon, "exhaustive")
            mean = path_expectation(evaluate(phi, space))
            payload = {"expectation": [mean.real, mean.imag], "paths": space.num_paths}
        if args.csv:
            write_observable_csv(evaluate(phi, space), args.csv)
            payload["csv"] = args.csv
        _emit(payload, args.out)
        return 0

    if args.k is not None:
        # Single-site intertwining sweep over a fresh corpus.
        corpus = random_functionals(
            args.trials, args.seed, support_max=args.horizon - 1
        )
        gap = max(max(check_intertwining(phi, args.k, args.horizon)) for phi in corpus)
        record = {
            "check": "intertwining",
            "N": args.horizon,
            "k": args.k,
            "trials": len(corpus),
            "max_gap": gap,
            "tolerance": 1e-10,
            "pass": bool(gap <= 1e-10),
        }
        report = {"suite": "bridge", "checks": [record], "pass": record["pass"]}
        _emit(report, args.out)
        return 0 if record["pass"] else 1

    cfg = SuiteConfig(
        suite="bridge",
        trials=args.trials,
        seed=args.seed,
        horizon=args.horizon,
        threads=args.threads,
    )
    report = run_suite(cfg)
    _emit(report, args.out)
    return 0 if report["pass"] else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fockcalc",
        description="Chaotic calculus on sparse Fock coefficients with an exhaustive path oracle.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_lambda = sub.add_parser("lambda", help="subset weights and weight sums")
    p_lambda.add_argument("subset", nargs="?", help="JSON array, e.g. '[1,3]'")
    p_lambda.add_argument("--sum", action="store_true", help="truncated weight sum over subsets of {0..n-1}")
    p_lambda.add_argument("--bound", action="store_true", help="series upper bound for the untruncated sum")
    p_lambda.add_argument("--p", type=float, help="weight exponent")
    p_lambda.add_argument("--n", type=int, help="truncation: exclusive upper bound on subset elements")
    p_lambda.set_defaults(func=_cmd_lambda)

    p_norm = sub.add_parser("norm", help="weighted norm of a functional")
    p_norm.add_argument("file", help="functional JSON ('-' for stdin)")
    p_norm.add_argument("--p", type=float, help="chain level (default 0)")
    p_norm.add_argument("--dual", action="store_true", help="dual-chain norm instead of test-chain")
    p_norm.set_defaults(func=_cmd_norm)

    p_apply = sub.add_parser("apply", help="apply an operator pipeline")
    p_apply.add_argument("file", help="functional JSON ('-' for stdin)")
    p_apply.add_argument("--pipeline", required=True,
                         help="comma-separated tags: annihilate:k, create:k, condexp:k, expect")
    p_apply.add_argument("--out", help="write result JSON here instead of stdout")
    p_apply.set_defaults(func=_cmd_apply)

    p_dec = sub.add_parser("decompose", help="mean/per-site decomposition report")
    p_dec.add_argument("file", help="functional JSON ('-' for stdin)")
    p_dec.add_argument("--q", type=float, action="append",
                       help="dual level for the residual table (repeatable; default 0 1 2)")
    p_dec.add_argument("--out", help="write report JSON here instead of stdout")
    p_dec.set_defaults(func=_cmd_decompose)

    p_cov = sub.add_parser("cov", help="covariance report for two functionals")
    p_cov.add_argument("file", help="first functional JSON")
    p_cov.add_argument("other", help="second functional JSON")
    p_cov.add_argument("--p", type=float, help="dual level (default 0)")
    p_cov.add_argument("--out", help="write report JSON here instead of stdout")
    p_cov.set_defaults(func=_cmd_cov)

    p_verify = sub.add_parser("verify", help="randomized identity suites")
    p_verify.add_argument("--suite", choices=SUITE_NAMES, default="all")
    p_verify.add_argument("--trials", type=int, default=500)
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--support-max", type=int, default=10, dest="support_max")
    p_verify.add_argument("--max-terms", type=int, default=24, dest="max_terms")
    p_verify.add_argument("--p", type=float, action="append",
                          help="chain level grid (repeatable; default 0 1 2)")
    p_verify.add_argument("--tolerance", type=float, default=1e-12,
                          help="identity tolerance; 0 invites spurious float-rounding failures")
    p_verify.add_argument("--horizon", type=int, default=8, help="bridge-suite horizon")
    p_verify.add_argument("--threads", type=int, default=1,
                          help="worker threads; results are identical for any value")
    p_verify.add_argument("--out", help="write report JSON here instead of stdout")
    p_verify.set_defaults(func=_cmd_verify)

    p_bridge = sub.add_parser("bridge", help="pathwise oracle checks and evaluation")
    p_bridge.add_argument("--horizon", type=int, default=8)
    p_bridge.add_argument("--trials", type=int, default=200)
    p_bridge.add_argument("--seed", type=int, default=0)
    p_bridge.add_argument("--threads", type=int, default=1)
    p_bridge.add_argument("--k", type=int, help="restrict to the intertwining check at this site")
    p_bridge.add_argument("--eval", help="evaluate this functional JSON on the path space")
    p_bridge.add_argument("--mode", choices=["exhaustive", "sampled"], default="exhaustive")
    p_bridge.add_argument("--paths", type=int, help="sample count for --mode sampled")
    p_bridge.add_argument("--csv", help="export the evaluated observable as CSV here")
    p_bridge.add_argument("--out", help="write report JSON here instead of stdout")
    p_bridge.set_defaults(func=_cmd_bridge)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FockCalcError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
