"""Command-line entry point: ``shufflelab <command> ...``.

Exit codes: 0 success, 1 a verification failed, 2 invalid input.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction
from typing import Sequence

from .bounds import bound_rows, bounds_csv
from .config import CapExceeded, thread_count
from .exact_engine import curve_csv, distance_curve
from .lifting import build_eigenbasis, iter_dump
from .shuffles import KINDS, ShuffleSpec
from .spectra import build_catalog
from .group_core import BiPartition
from .suites import SUITES, run_suite

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


def _number(text: str):
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return Fraction(text) if "/" in text else float(text)
    except ValueError:
        raise UsageError(f"not a number: {text!r}") from None


def parse_shuffle(text: str | None, kind: str | None = None, n: int | None = None,
                  alpha: str | None = None, weights: str | None = None) -> ShuffleSpec:
    """``--shuffle`` as a JSON object or ``kind=OST,n=5[,alpha=1]``; loose flags override."""
    fields: dict = {}
    if text:
        text = text.strip()
        if text.startswith("{"):
            try:
                fields = json.loads(text)
            except json.JSONDecodeError as exc:
                raise UsageError(f"bad --shuffle JSON: {exc}") from None
            if not isinstance(fields, dict):
                raise UsageError("--shuffle JSON must be an object")
        else:
            for part in filter(None, text.split(",")):
                key, sep, value = part.partition("=")
                if not sep:
                    raise UsageError(f"bad --shuffle field {part!r}; expected key=value")
                key = key.strip()
                if key == "weights":
                    fields[key] = value.split(":")
                elif key == "n":
                    fields[key] = int(value)
                elif key == "alpha":
                    fields[key] = _number(value)
                else:
                    fields[key] = value.strip()
    if kind is not None:
        fields["kind"] = kind
    if n is not None:
        fields["n"] = n
    if alpha is not None:
        fields["alpha"] = _number(alpha)
    if weights is not None:
        fields["weights"] = weights.split(",")
    if "kind" not in fields or "n" not in fields:
        raise UsageError("a shuffle needs a kind and n")
    if isinstance(fields.get("alpha"), Fraction):
        raise UsageError("alpha must be an integer or a decimal")
    try:
        return ShuffleSpec.from_json(fields)
    except (ValueError, TypeError, KeyError) as exc:
        raise UsageError(str(exc)) from None


def parse_shape(text: str):
    """``3,2,1`` or a bi-partition ``2,1|1`` (either side may be empty)."""
    def part(s: str) -> tuple[int, ...]:
        s = s.strip().strip("()")
        if not s:
            return ()
        try:
            out = tuple(int(x) for x in re.split(r"[,\s]+", s) if x)
        except ValueError:
            raise UsageError(f"bad shape {text!r}") from None
        if any(x <= 0 for x in out) or list(out) != sorted(out, reverse=True):
            raise UsageError(f"{text!r} is not a partition")
        return out

    if "|" in text:
        first, second = text.split("|", 1)
        return BiPartition(part(first), part(second))
    return part(text)


def parse_grid(text: str) -> list[int]:
    """``0,5,10`` or ``0:100:5`` (start:stop:step, stop inclusive)."""
    try:
        if ":" in text:
            bits = [int(x) for x in text.split(":")]
            start, stop = bits[0], bits[1]
            step = bits[2] if len(bits) > 2 else 1
            if step <= 0:
                raise ValueError
            return list(range(start, stop + 1, step))
        return [int(x) for x in text.split(",") if x.strip()]
    except (ValueError, IndexError):
        raise UsageError(f"bad grid {text!r}") from None


def _add_shuffle_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--shuffle", help='JSON such as \'{"kind":"OST","n":5}\' or kind=OST,n=5,alpha=1')
    p.add_argument("--kind", choices=KINDS)
    p.add_argument("--n", type=int)
    p.add_argument("--alpha")
    p.add_argument("--weights", help="comma-separated explicit weights w(1),...,w(n)")


def _spec(args) -> ShuffleSpec:
    return parse_shuffle(args.shuffle, args.kind, args.n, args.alpha, args.weights)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="shufflelab", description="Transposition shuffles on S_n and B_n.")
    parser.add_argument("--out", help="write to this file instead of stdout")
    parser.add_argument("--threads", type=int, help="worker cap (default: SHUFFLE_LAB_THREADS or 1)")
    parser.add_argument("--seed", type=int, default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eigs", help="eigenvalue catalog as CSV")
    _add_shuffle_flags(p)
    p.add_argument("--exact", action="store_true", help="add p/q strings; rejects irrational weights")

    p = sub.add_parser("curve", help="exact d_TV and d_sep from the identity")
    _add_shuffle_flags(p)
    p.add_argument("--t-max", type=int, required=True)
    p.add_argument("--exact", action="store_true", help="rational arithmetic with p/q columns")

    p = sub.add_parser("bounds", help="spectral upper and fixed-point lower bounds")
    _add_shuffle_flags(p)
    p.add_argument("--t-grid", required=True, help="0,5,10 or start:stop:step")
    p.add_argument("--m", type=float, default=2.0, help="window V_n holds the top ceil(n/m) positions")
    p.add_argument("--no-exact", action="store_true", help="skip the exact distance column")

    p = sub.add_parser("verify", help="run a self-check suite")
    p.add_argument("--suite", choices=sorted(SUITES), required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--samples", type=int, default=1000, help="random vectors per n (identities)")

    p = sub.add_parser("lift", help="dump lifted eigenvectors for one shape")
    p.add_argument("--shape", required=True, help="3,2,1 or 2,1|1 for a bi-partition")
    _add_shuffle_flags(p)

    p = sub.add_parser("simulate", help="run a Monte-Carlo experiment manifest")
    p.add_argument("--experiment", required=True, help="path to a JSON manifest")
    return parser


def _run(args) -> tuple[int, str]:
    cmd = args.command
    if cmd == "eigs":
        spec = _spec(args)
        if args.exact and not spec.exact:
            raise UsageError(f"{spec} has irrational weights; drop --exact")
        return EXIT_OK, build_catalog(spec).to_csv(exact=args.exact)
    if cmd == "curve":
        spec = _spec(args)
        if args.t_max < 0:
            raise UsageError("--t-max must be non-negative")
        if args.exact and not spec.exact:
            raise UsageError(f"{spec} has irrational weights; drop --exact")
        rows = distance_curve(spec, args.t_max, exact=args.exact, exact_values=args.exact)
        return EXIT_OK, curve_csv(rows)
    if cmd == "bounds":
        spec = _spec(args)
        if not spec.reversible:
            raise UsageError(f"{spec} is not reversible; the l2 bound does not apply")
        grid = parse_grid(args.t_grid)
        if any(t < 0 for t in grid):
            raise UsageError("grid times must be non-negative")
        rows = bound_rows(spec, grid, args.m, with_exact=False if args.no_exact else None)
        return EXIT_OK, bounds_csv(rows)
    if cmd == "verify":
        if args.n_max < 1:
            raise UsageError("--n-max must be positive")
        kwargs = {"samples": args.samples, "seed": args.seed} if args.suite == "identities" else {}
        report = run_suite(args.suite, args.n_max, **kwargs)
        return (EXIT_OK if report.passed else EXIT_FAILED), "\n".join(report.lines()) + "\n"
    if cmd == "lift":
        spec = _spec(args)
        shape = parse_shape(args.shape)
        return EXIT_OK, "".join(iter_dump(build_eigenbasis(shape, spec)))
    if cmd == "simulate":
        from .simulation import run_manifest

        try:
            with open(args.experiment, encoding="utf-8") as fh:
                manifest = json.load(fh)
        except OSError as exc:
            raise UsageError(f"cannot read manifest: {exc}") from None
        except json.JSONDecodeError as exc:
            raise UsageError(f"bad manifest JSON: {exc}") from None
        if "seed" not in manifest:
            manifest["seed"] = args.seed
        return EXIT_OK, run_manifest(manifest, threads=thread_count(args.threads))
    raise UsageError(f"unknown command {cmd}")  # pragma: no cover


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        code, text = _run(args)
    except (UsageError, CapExceeded, ValueError, KeyError) as exc:
        print(f"shufflelab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
