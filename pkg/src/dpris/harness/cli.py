"""Command-line entry point.

Exit codes: 0 success, 1 I/O failure, 2 validation error, 3 property failure.
The worker count comes from ``DPRIS_WORKERS`` and never changes output bytes.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

from ..config import ConfigError, reference_config
from ..threshold import required_size
from . import output
from .experiments import RUNNERS
from .spec import ExperimentKind, load_config, load_system
from .verify import run_checks

EXIT_OK, EXIT_IO, EXIT_INVALID, EXIT_PROPERTY = 0, 1, 2, 3


def _u64(text: str) -> int:
    v = int(text, 0)
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dpris", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, config_required):
        p.add_argument("--config", type=Path, required=config_required, help="TOML spec file")
        p.add_argument("--seed", type=_u64, help="master seed (overrides the file)")
        p.add_argument("--trials", type=int, help="Monte Carlo trials per point")

    for kind in ExperimentKind:
        p = sub.add_parser(kind.value, help=f"run a {kind.value} and write CSV")
        common(p, True)
        p.add_argument("--out", type=Path, help="CSV output path ('-' for stdout)")
        p.add_argument("--gnuplot", action="store_true", help="also write a .gp script next to the CSV")

    p = sub.add_parser("required-size", help="print L_req and the gap coefficients")
    p.add_argument("--config", type=Path, help="spec file; only [system] is read (default: reference scenario)")
    p.add_argument("--out", type=Path, help="write the report here instead of stdout")

    p = sub.add_parser("verify", help="run the property suite")
    common(p, False)
    return ap


def _run_experiment(args) -> int:
    kind = ExperimentKind(args.command)
    spec = load_config(args.config, kind=kind)
    changes = {}
    if args.seed is not None:
        changes["seed"] = args.seed
    if args.trials is not None:
        changes["trials"] = args.trials
    if args.out is not None:
        changes["output_path"] = args.out
    if args.gnuplot:
        changes["gnuplot"] = True
    spec = dataclasses.replace(spec, **changes)
    runner, columns = RUNNERS[kind]
    rows = runner(spec)
    text = output.render_csv(kind.value, columns, rows)
    out = spec.output_path
    if out is None or str(out) == "-":
        sys.stdout.write(text)
        return EXIT_OK
    output.write_text(out, text)
    if spec.gnuplot:
        gp = output.render_gnuplot(kind.value, columns, out.name, rows)
        output.write_text(out.with_suffix(".gp"), gp)
    print(f"wrote {len(rows)} rows to {out}", file=sys.stderr)
    return EXIT_OK


def _run_required_size(args) -> int:
    cfg = load_system(args.config) if args.config else reference_config()
    res = required_size(cfg)
    c = res.coefficients
    lines = [
        f"power_db = {cfg.power_db!r}",
        f"l_req = {'' if res.l_req is None else res.l_req}",
        f"continuous_root = {res.continuous_root!r}",
        f"asymptotic_l = {'' if res.asymptotic_l is None else res.asymptotic_l}",
        f"d1 = {c.d1!r}",
        f"d2 = {c.d2!r}",
        f"d3 = {c.d3!r}",
    ]
    if res.reason:
        lines.append(f"reason = {res.reason}")
    text = "\n".join(lines) + "\n"
    if args.out:
        output.write_text(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _run_verify(args) -> int:
    cfg = load_system(args.config) if args.config else reference_config()
    results = run_checks(cfg, trials=args.trials or 20_000, seed=args.seed or 0)
    for r in results:
        print(r.line())
    return EXIT_OK if all(r.passed for r in results) else EXIT_PROPERTY


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "trials", None) is not None and args.trials < 1:
        print("error: trials: must be a positive integer", file=sys.stderr)
        return EXIT_INVALID
    try:
        if args.command == "required-size":
            return _run_required_size(args)
        if args.command == "verify":
            return _run_verify(args)
        return _run_experiment(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
