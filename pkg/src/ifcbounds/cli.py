"""Command-line front end.

Examples
--------
  ifcbounds bound --family FullySymmetric --power-db 20 --alpha 1
  ifcbounds bound --channel channel.json --bounds kra,th1 --format csv
  ifcbounds sweep --family CyclicSymmetric --power-db 20 --alpha 0:1.6:0.01 --out cyc.csv
  ifcbounds verify --suite lemma --samples 100 --seed 42

Exit codes: 0 ok, 1 verification failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from .channel import ChannelMatrix, Family, FamilySpec, build_family, load_channel_or_family
from .classic import _jsonable
from .sweep import (AlphaRange, channel_at_alpha, crossovers, evaluate_bounds, parse_bounds,
                    run_sweep, tightest_of)
from .verify import SUITES, run_suite

EXIT_OK, EXIT_VERIFY_FAIL, EXIT_BAD_INPUT = 0, 1, 2


def parse_complex(text: str) -> complex:
    """``"re,im"`` or ``"re"``."""
    parts = [p.strip() for p in text.split(",")]
    if len(parts) == 1:
        return complex(float(parts[0]), 0.0)
    if len(parts) == 2:
        return complex(float(parts[0]), float(parts[1]))
    raise ValueError(f"expected re,im but got {text!r}")


def _complex_arg(text: str) -> complex:
    try:
        return parse_complex(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _add_channel_args(p: argparse.ArgumentParser, alpha_help: str, alpha_default=None):
    p.add_argument("--channel", type=Path, help="JSON file with {'H': ...} or {'family': ...}")
    p.add_argument("--family", help="FullySymmetric, CyclicSymmetric, MixedStrongVeryStrong or Custom")
    p.add_argument("--power-db", type=float, default=20.0, help="SNR P in dB (default 20)")
    p.add_argument("--h1", type=_complex_arg, default=0j, help="cross gain h1 as re,im")
    p.add_argument("--h2", type=_complex_arg, default=0j, help="cross gain h2 as re,im")
    p.add_argument("--alpha", default=alpha_default, help=alpha_help)
    p.add_argument("--bounds", default=None, help="comma list from kra,etw,th1,th2,mac (default all)")
    p.add_argument("--seed", type=int, default=0, help="seed for the MAC multistart")
    p.add_argument("--out", type=Path, default=None, help="output file (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ifcbounds",
                                     description="Sum-rate outer bounds for the 3-user Gaussian IFC.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bound", help="evaluate bounds on one channel")
    _add_channel_args(p, "single alpha; sets the family cross-gain magnitude")
    p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("sweep", help="sweep the interference exponent alpha")
    _add_channel_args(p, "start:stop:step (default 0:1.6:0.01)", "0:1.6:0.01")
    p.add_argument("--format", choices=("json", "csv"), default="csv")
    p.add_argument("--workers", type=int, default=1, help="process pool size for rows")

    p = sub.add_parser("verify", help="run an oracle-agreement suite")
    p.add_argument("--suite", choices=SUITES, required=True)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, default=None, help="write the JSON report here as well")
    p.add_argument("--workers", type=int, default=1)
    return parser


def _family_from_args(args) -> FamilySpec | None:
    if args.family is None:
        return None
    return FamilySpec(Family.parse(args.family), args.power_db, args.h1, args.h2)


def _resolve_bound_channel(args) -> ChannelMatrix:
    if args.channel is not None:
        loaded = load_channel_or_family(args.channel.read_text())
        if isinstance(loaded, ChannelMatrix):
            if args.alpha is not None:
                raise ValueError("--alpha needs a family, not an explicit channel")
            return loaded
        family = loaded
    else:
        family = _family_from_args(args)
    if family is None:
        raise ValueError("give --channel or --family")
    if args.alpha is not None:
        return channel_at_alpha(family, float(args.alpha))
    return build_family(family)


def _emit(text: str, out: Path | None):
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def cmd_bound(args) -> int:
    ch = _resolve_bound_channel(args)
    results = evaluate_bounds(ch, parse_bounds(args.bounds), seed=args.seed)
    values = {n: r.value_bits for n, r in results.items()}
    if args.format == "json":
        doc = {"channel": ch.to_json(), "bounds": {n: r.to_json() for n, r in results.items()},
               "tightest": tightest_of(values)}
        text = json.dumps(_jsonable(doc), indent=2) + "\n"
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["bound", "value_bits"])
        for n, v in values.items():
            w.writerow([n, format(v, ".12g")])
        text = buf.getvalue()
    _emit(text, args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    if args.channel is not None:
        loaded = load_channel_or_family(args.channel.read_text())
        if isinstance(loaded, ChannelMatrix):
            raise ValueError("sweeps need a family description, not an explicit channel")
        family = loaded
    else:
        family = _family_from_args(args)
        if family is None:
            raise ValueError("give --family or --channel with a family description")
    table = run_sweep(family, AlphaRange.parse(args.alpha), parse_bounds(args.bounds),
                      seed=args.seed, workers=args.workers)
    if args.format == "csv":
        text = table.to_csv()
    else:
        text = json.dumps(table.to_json(), indent=2) + "\n"
    cross = json.dumps(crossovers(table), indent=2) + "\n"
    _emit(text, args.out)
    if args.out is None:
        sys.stderr.write(cross)
    else:
        args.out.with_name(args.out.stem + ".crossovers.json").write_text(cross)
    return EXIT_OK


def cmd_verify(args) -> int:
    report = run_suite(args.suite, args.samples, args.seed, workers=args.workers)
    text = json.dumps(report.to_json(), indent=2) + "\n"
    sys.stdout.write(text)
    if args.out is not None:
        args.out.write_text(text)
    return EXIT_OK if report.passed else EXIT_VERIFY_FAIL


_COMMANDS = {"bound": cmd_bound, "sweep": cmd_sweep, "verify": cmd_verify}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, OSError) as exc:
        # IFCError and json.JSONDecodeError are ValueError subclasses
        print(f"ifcbounds: error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
