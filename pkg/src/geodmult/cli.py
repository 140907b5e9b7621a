"""Command-line front end: single-shot computations, verification suites,
and sweep orchestration with machine-readable output.

Every subcommand emits an output envelope (command, inputs, result,
provenance, version) as JSON by default or flattened CSV with --format csv;
numeric fields carry 15 significant digits in either format.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 budget or
tolerance infeasibility.
"""

from __future__ import annotations

import argparse
import csv as _csv
import io
import json
import os
import sys
from dataclasses import dataclass, field
from typing import Any

from . import __version__, arith, fourier, meansquare, verification
from .lfunctions import ClassNumber, EulerTruncated, LogSin, LStrategy, SmoothedSeries, l_one, strategy_tag
from .meansquare import ToleranceError
from .multiplicity import Congruence, GroupContext, Quaternion, beta

USAGE_ERROR, VERIFY_ERROR, BUDGET_ERROR = 2, 1, 3


@dataclass
class OutputEnvelope:
    command: str
    inputs: dict[str, Any]
    result: Any
    provenance: dict[str, Any] = field(default_factory=dict)
    version: str = __version__

    def to_dict(self) -> dict[str, Any]:
        return {
            "command": self.command,
            "inputs": _round15(self.inputs),
            "result": _round15(self.result),
            "provenance": _round15(self.provenance),
            "version": self.version,
        }


def _round15(obj: Any) -> Any:
    """Normalize every float to 15 significant digits, recursively."""
    if isinstance(obj, bool):
        return obj
    if isinstance(obj, float):
        return float(f"{obj:.15g}")
    if isinstance(obj, complex):
        return {"re": float(f"{obj.real:.15g}"), "im": float(f"{obj.imag:.15g}")}
    if isinstance(obj, dict):
        return {k: _round15(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round15(v) for v in obj]
    return obj


def _flatten(prefix: str, obj: Any, rows: list[tuple[str, Any]]) -> None:
    if isinstance(obj, dict):
        for k, v in obj.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), v, rows)
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            _flatten(f"{prefix}[{i}]", v, rows)
    else:
        rows.append((prefix, obj))


def emit(envelope: OutputEnvelope, fmt: str) -> None:
    data = envelope.to_dict()
    if fmt == "json":
        print(json.dumps(data, indent=2))
        return
    rows: list[tuple[str, Any]] = []
    _flatten("", data, rows)
    buf = io.StringIO()
    writer = _csv.writer(buf)
    writer.writerow(["key", "value"])
    writer.writerows(rows)
    sys.stdout.write(buf.getvalue())


def parse_strategy(text: str) -> LStrategy:
    """Strategy grammar: class-number | log-sin | smoothed[:SCALE:CUTOFF] |
    euler[:PRIME_BOUND]."""
    parts = text.split(":")
    name = parts[0]
    if name == "class-number":
        return ClassNumber()
    if name == "log-sin":
        return LogSin()
    if name == "smoothed":
        if len(parts) == 1:
            return SmoothedSeries()
        if len(parts) == 3:
            return SmoothedSeries(float(parts[1]), int(parts[2]))
        raise argparse.ArgumentTypeError("smoothed takes zero or two parameters (smoothed:SCALE:CUTOFF)")
    if name == "euler":
        return EulerTruncated(int(parts[1])) if len(parts) == 2 else EulerTruncated()
    raise argparse.ArgumentTypeError(f"unknown strategy {text!r}")


def _context(args: argparse.Namespace) -> GroupContext:
    if args.quaternion is not None:
        return Quaternion(args.quaternion)
    return Congruence(args.level if args.level is not None else 1)


def _add_context_args(p: argparse.ArgumentParser) -> None:
    group = p.add_mutually_exclusive_group()
    group.add_argument("--level", type=int, default=None, help="congruence level Q (odd squarefree)")
    group.add_argument("--quaternion", type=int, default=None, help="quaternion reduced discriminant d_B")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="geodmult",
        description="Weighted multiplicities of closed geodesics: values, Fourier coefficients, mean squares.",
    )
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument("--seed", type=int, default=None, help="seed for randomized factor splitting")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("beta", help="weighted multiplicity of one trace")
    p.add_argument("--t", type=int, required=True)
    _add_context_args(p)
    p.add_argument("--strategy", type=parse_strategy, default=SmoothedSeries())

    p = sub.add_parser("lvalue", help="L(1, chi_D) by one strategy")
    p.add_argument("--disc", type=int, required=True)
    p.add_argument("--strategy", type=parse_strategy, default=ClassNumber())

    p = sub.add_parser("coeff", help="Fourier coefficient at a/p^c")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--a", type=int, required=True)
    _add_context_args(p)
    p.add_argument("--method", choices=("closed", "dft", "series"), default="closed")
    p.add_argument("--b", type=int, default=None, help="b-indexed summand instead of the assembled factor")
    p.add_argument("--tol", type=float, default=1e-12)

    p = sub.add_parser("avalue", help="Fourier mass A(p^c)")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--c", type=int, required=True)
    _add_context_args(p)
    p.add_argument("--method", choices=("closed", "numeric"), default="closed")

    p = sub.add_parser("kappa", help="Euler-product mean square")
    _add_context_args(p)
    p.add_argument("--prime-bound", type=int, default=100_000)
    p.add_argument("--tol", type=float, default=1e-3)
    p.add_argument("--factors", action="store_true", help="include per-prime factors")

    p = sub.add_parser("empirical", help="running mean / mean-square sweep")
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--stride", type=int, default=1000)
    _add_context_args(p)
    p.add_argument("--strategy", type=parse_strategy, default=SmoothedSeries())
    p.add_argument("--resume", type=str, default=None, help="checkpoint CSV to resume and append")
    p.add_argument("--out", type=str, default=None, help="checkpoint CSV to write")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--reproducible", action="store_true", default=True)
    p.add_argument("--budget-seconds", type=float, default=None)

    p = sub.add_parser("verify", help="run acceptance suites; nonzero exit on failure")
    p.add_argument("--suite", action="append", default=None, help="suite name (repeatable); default: all")
    p.add_argument("--n-max", type=int, default=100_000, help="empirical sweep length")
    p.add_argument("--workers", type=int, default=None)
    return parser


def _cmd_beta(args) -> OutputEnvelope:
    ctx = _context(args)
    value = beta(args.t, ctx, args.strategy)
    return OutputEnvelope(
        "beta",
        {"t": args.t, "context": ctx.tag},
        value,
        {"strategy": strategy_tag(args.strategy)},
    )


def _cmd_lvalue(args) -> OutputEnvelope:
    value = l_one(args.disc, args.strategy)
    return OutputEnvelope(
        "lvalue",
        {"disc": args.disc},
        value,
        {"strategy": strategy_tag(args.strategy)},
    )


def _cmd_coeff(args) -> OutputEnvelope:
    ctx = _context(args)
    from .multiplicity import flavor_of

    flavor = flavor_of(args.p, ctx)
    side = "quaternion" if isinstance(ctx, Quaternion) else "congruence"
    if args.b is not None:
        if args.method == "closed":
            value = fourier.closed_form_coeff_b(args.p, args.b, args.c, args.a, side)
        else:
            phase = fourier.RationalPhase.reduce(args.a, args.p**args.c) if args.c else fourier.RationalPhase(0, 1)
            value = fourier.dft_coefficient(args.p, args.b, flavor, phase)
        prov = {"flavor": flavor.value, "b": args.b}
    elif args.method == "closed":
        value = fourier.closed_form_assembled(args.p, args.c, args.a, side)
        prov = {"flavor": flavor.value}
    else:  # dft | series: the b-series assembled from exact per-b DFTs
        value = fourier.series_coefficient(args.p, args.c, args.a, ctx, args.tol)
        prov = {"flavor": flavor.value, "tol": args.tol}
    prov["method"] = args.method
    return OutputEnvelope(
        "coeff",
        {"p": args.p, "c": args.c, "a": args.a, "context": ctx.tag},
        value,
        prov,
    )


def _cmd_avalue(args) -> OutputEnvelope:
    ctx = _context(args)
    value = fourier.a_value(args.p, args.c, ctx, method=args.method)
    return OutputEnvelope(
        "avalue",
        {"p": args.p, "c": args.c, "context": ctx.tag},
        value,
        {"method": args.method},
    )


def _cmd_kappa(args) -> OutputEnvelope:
    ctx = _context(args)
    res = meansquare.kappa(ctx, args.prime_bound, args.tol, keep_factors=args.factors)
    result: dict[str, Any] = {"value": res.value, "tail_bound": res.tail_bound}
    if res.per_prime_factors is not None:
        result["per_prime_factors"] = [[p, v] for p, v in res.per_prime_factors]
    return OutputEnvelope(
        "kappa",
        {"context": ctx.tag},
        result,
        {"prime_bound": res.prime_bound, "tol": args.tol},
    )


def _cmd_empirical(args) -> OutputEnvelope:
    ctx = _context(args)
    series = meansquare.empirical(
        ctx,
        args.n_max,
        checkpoint_stride=args.stride,
        strategy=args.strategy,
        workers=args.workers,
        reproducible=args.reproducible,
        csv_path=args.out,
        resume=args.resume,
        budget_seconds=args.budget_seconds,
    )
    if series.truncated and not series.checkpoints:
        raise ToleranceError("budget exhausted before the first checkpoint")
    result = {
        "checkpoints": [[c.n, c.mean, c.mean_square] for c in series.checkpoints],
        "final_mean": series.final.mean,
        "final_mean_square": series.final.mean_square,
        "truncated": series.truncated,
    }
    env = OutputEnvelope(
        "empirical",
        {"n_max": args.n_max, "stride": args.stride, "context": ctx.tag},
        result,
        {"strategy": series.strategy_tag, "workers": args.workers},
    )
    if series.truncated:
        env.provenance["budget_exceeded"] = True
    return env


def _cmd_verify(args) -> tuple[OutputEnvelope, int]:
    names = args.suite
    if names:
        unknown = [n for n in names if n not in verification.SUITES]
        if unknown:
            raise argparse.ArgumentTypeError(f"unknown suite(s): {', '.join(unknown)}")
    kwargs = {}
    if names is None or "empirical" in names:
        kwargs = {"n_max": args.n_max, "workers": args.workers}
    results = verification.run_suites(names, **kwargs)
    for r in results:
        print(r.line(), file=sys.stderr)
    failed = [r for r in results if not r.ok]
    env = OutputEnvelope(
        "verify",
        {"suites": names or sorted(verification.SUITES)},
        {
            "passed": sum(r.passed for r in results),
            "warnings": sum((not r.passed) and r.warning for r in results),
            "failed": len(failed),
            "checks": [[r.suite, r.name, "pass" if r.passed else ("warn" if r.warning else "fail")] for r in results],
        },
    )
    return env, (VERIFY_ERROR if failed else 0)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits on usage errors / --help
        return int(exc.code or 0)
    if args.seed is not None:
        arith.set_splitting_seed(args.seed)
    if os.environ.get("GEODESIC_CACHE_DIR"):
        arith.load_factor_cache(os.environ["GEODESIC_CACHE_DIR"])
    try:
        if args.command == "verify":
            env, code = _cmd_verify(args)
            emit(env, args.format)
            return code
        handler = {
            "beta": _cmd_beta,
            "lvalue": _cmd_lvalue,
            "coeff": _cmd_coeff,
            "avalue": _cmd_avalue,
            "kappa": _cmd_kappa,
            "empirical": _cmd_empirical,
        }[args.command]
        env = handler(args)
        emit(env, args.format)
        return 0
    except ToleranceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BUDGET_ERROR
    except (ValueError, argparse.ArgumentTypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    finally:
        if os.environ.get("GEODESIC_CACHE_DIR"):
            arith.save_factor_cache(os.environ["GEODESIC_CACHE_DIR"])


if __name__ == "__main__":
    sys.exit(main())
