"""Command line front end: ``monolab measure|bounds|verify|reproduce``."""

from __future__ import annotations

import argparse
import json
import math
import shlex
import sys
import warnings

import numpy as np

from . import __version__, bounds, report, verify
from .kernels import DomainError
from .linalg import RENORMALIZE_TOL, InputError, PartitionSpec, StateVector, load_state
from .measures import MeasureKind, pairwise_measures, parse_qubit, pure_concurrence, qubit_label
from .states import WClassParams, decoherence_free_state, random_pure_state, w_class_state


def parse_lambdas(text: str) -> WClassParams:
    try:
        lam = [float(v) for v in text.split(",")]
    except ValueError as exc:
        raise InputError(f"--lambda expects comma-separated numbers, got {text!r}") from exc
    if len(lam) != 4:
        raise InputError(f"--lambda expects four amplitudes, got {len(lam)}")
    norm = math.sqrt(math.fsum(v * v for v in lam))
    if abs(norm - 1.0) > RENORMALIZE_TOL:
        raise InputError(f"--lambda has norm {norm:.9g}; must be 1 within {RENORMALIZE_TOL}")
    return WClassParams(tuple(v / norm for v in lam))


def resolve_state(spec: str, lambdas: str | None, seed: int) -> StateVector:
    """``wclass`` (with --lambda), ``dfs``, ``file:<path>`` or ``random:<n>``."""
    if spec == "wclass":
        if lambdas is None:
            raise InputError("--state wclass needs --lambda l1,l2,l3,l4")
        return w_class_state(parse_lambdas(lambdas))
    if spec == "dfs":
        return decoherence_free_state()
    if spec.startswith("file:"):
        return load_state(spec[5:])
    if spec.startswith("random:"):
        return random_pure_state(int(spec[7:]), seed)
    raise InputError(f"unknown state {spec!r}; use wclass, dfs, file:<path> or random:<n>")


def parse_grid(text: str) -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 3:
        raise InputError(f"--grid expects lo:hi:n, got {text!r}")
    lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    if n < 1 or hi < lo:
        raise InputError(f"--grid needs n >= 1 and lo <= hi, got {text!r}")
    return np.linspace(lo, hi, n)


def _s_value(text: str | None):
    if text is None or text == "auto-mid":
        return text
    return float(text)


def _manifest(args, argv, **notes) -> report.RunManifest:
    return report.RunManifest(
        command=shlex.join(["monolab", *argv]),
        seed=args.seed,
        timestamp=report.manifest_timestamp(args.stamp),
        notes={k: str(v) for k, v in notes.items()},
    )


# -- subcommands -------------------------------------------------------------


def cmd_measure(args, argv) -> int:
    psi = resolve_state(args.state, args.lambdas, args.seed)
    mv = pairwise_measures(psi, args.anchor, args.kind)
    labeled = mv.labeled()
    manifest = _manifest(args, argv)
    if args.format == "json":
        doc = {"manifest": dict(manifest.items()), "kind": mv.kind.value, "anchor": qubit_label(mv.anchor), "values": labeled}
        text = json.dumps(doc, indent=2) + "\n"
    else:
        lines = manifest.comment_lines()
        lines.append(",".join(["kind", "anchor", *labeled]))
        lines.append(",".join([mv.kind.value, qubit_label(mv.anchor), *(report.fmt(v) for v in labeled.values())]))
        text = "\n".join(lines) + "\n"
    report.write_output(text, args.out)
    return 0


def _anchor_values(psi, anchor, kind):
    mv = pairwise_measures(psi, anchor, kind)
    m = bounds.OrderedMeasures.from_values(mv.values, 2.0)
    if m.dropped:
        warnings.warn(f"dropped {m.dropped} vanishing pairwise value(s)", stacklevel=2)
    truth = pure_concurrence(psi, PartitionSpec((mv.anchor,), psi.n_qubits))
    return m, truth


def cmd_bounds(args, argv) -> int:
    psi = resolve_state(args.state, args.lambdas, args.seed)
    grid = parse_grid(args.grid) if args.grid else bounds.default_grid(args.regime)
    notes = {}
    if args.regime == "sandwich":
        inputs = bounds.partition_inputs(psi)
        curve = bounds.sandwich_curve(inputs, grid, args.side)
        truth = bounds.partition_concurrence(psi)
        notes.update(side=args.side, dropped=inputs.coa_A.dropped + inputs.coa_B1.dropped)
    else:
        kind = MeasureKind.CONCURRENCE if args.regime == "monogamy" else MeasureKind.COA
        m, truth = _anchor_values(psi, parse_qubit(args.anchor), kind)
        notes["dropped"] = m.dropped
        if args.regime == "polygamy-low":
            curve = bounds.polygamy_low_curve(m, grid)
        else:
            s = bounds.resolve_s(m, _s_value(args.s))
            notes["s"] = report.fmt(s)
            build = bounds.monogamy_curve if args.regime == "monogamy" else bounds.polygamy_high_curve
            curve = build(m, grid, s)
    fam = dict(curve.families)
    fam["C_independent"] = truth ** np.asarray(grid)
    curve = bounds.BoundCurve(grid, fam)
    report.write_output(report.render(curve, _manifest(args, argv, **notes), args.format), args.out)
    return 0


def cmd_reproduce(args, argv) -> int:
    grid = parse_grid(args.grid) if args.grid else None
    curve, notes = report.reproduce_example(args.example, grid)
    report.write_output(report.render(curve, _manifest(args, argv, example=args.example, **notes), args.format), args.out)
    return 0


def cmd_verify(args, argv) -> int:
    if args.lemma:
        results = [verify.verify_lemma(args.lemma, args.trials, args.seed)]
    else:
        results = verify.verify_all(args.trials, args.seed, args.states)
    manifest = _manifest(args, argv)
    if args.format == "json":
        text = json.dumps({"manifest": dict(manifest.items()), "results": [r.as_dict() for r in results]}, indent=2) + "\n"
    else:
        text = "\n".join([*manifest.comment_lines(), *(r.line() for r in results)]) + "\n"
    report.write_output(text, args.out)
    return 0 if all(r.passed for r in results) else 1


# -- parser ------------------------------------------------------------------


def _global_flags(suppress: bool) -> argparse.ArgumentParser:
    # the same flags are accepted before and after the subcommand; the
    # subcommand copy must not clobber a value given up front
    p = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--seed", type=int, default=d(0), help="PRNG seed (default 0)")
    p.add_argument("--out", default=d(None), help="output file (default stdout)")
    p.add_argument("--format", choices=("csv", "json"), default=d("csv"))
    p.add_argument("--stamp", action="store_true", default=d(False), help="record wall-clock time in the manifest")
    return p


def _state_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--state", required=True, help="wclass | dfs | file:<path> | random:<n>")
    p.add_argument("--lambda", dest="lambdas", help="four W-class amplitudes, comma separated")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="monolab", description=__doc__, parents=[_global_flags(False)], allow_abbrev=False)
    parser.add_argument("--version", action="version", version=f"monolab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    common = [_global_flags(True)]

    p = sub.add_parser("measure", parents=common, allow_abbrev=False, help="pairwise concurrence or CoA for one anchor")
    _state_flags(p)
    p.add_argument("--anchor", default="A")
    p.add_argument("--kind", choices=[k.value for k in MeasureKind], default="concurrence")
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("bounds", parents=common, allow_abbrev=False, help="bound curves over an exponent grid")
    p.add_argument("regime", choices=("monogamy", "polygamy-high", "polygamy-low", "sandwich"))
    _state_flags(p)
    p.add_argument("--anchor", default="A")
    p.add_argument("--s", help="free parameter: a number or auto-mid (default: lower end + 1e-9)")
    p.add_argument("--grid", help="lo:hi:n (default: the regime interval with 81 points)")
    p.add_argument("--side", choices=("lower", "upper"), default="lower", help="sandwich side")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("verify", parents=common, allow_abbrev=False, help="sampled checks of the inequality chains")
    p.add_argument("--lemma", choices=verify.LEMMAS)
    p.add_argument("--trials", type=int, default=10**6)
    p.add_argument("--states", type=int, default=None, help="random states per qubit count (default min(trials, 10^4))")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("reproduce", parents=common, allow_abbrev=False, help="curve tables for the worked examples")
    p.add_argument("example", choices=report.EXAMPLES)
    p.add_argument("--grid", help="lo:hi:n (default: the regime interval with 81 points)")
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            code = args.func(args, argv)
    except (InputError, DomainError, OSError) as exc:
        print(f"monolab: error: {exc}", file=sys.stderr)
        return 2
    for w in caught:
        print(f"monolab: warning: {w.message}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
