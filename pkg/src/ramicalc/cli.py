"""Command-line front end.

Exit status: 0 on success, 1 when data fails validation (the broken invariant
is printed on stderr), 2 on unreadable or malformed input.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile
from pathlib import Path
from typing import List, Optional

from . import io as rio
from .errors import DomainError, InconsistentDataError, MalformedInputError, NotInvertibleError, ValidationError
from .galois import sigma_function
from .gl import pairing_varsigma, structure_function, tame_lift_structure, varsigma_table
from .herbrand import HerbrandBundle, interpolate_psi, transfer_radius
from .plf import PLFunction, format_rational, from_csv, to_csv
from .svg import plot_svg
from .ultrametric import validate_ultrametric

EXIT_OK, EXIT_INVALID, EXIT_MALFORMED = 0, 1, 2


class _Invalid(Exception):
    """A validator produced a non-empty report."""


def _max_denom() -> Optional[int]:
    raw = os.environ.get("RAMICALC_MAX_DENOM")
    if not raw:
        return None
    try:
        value = int(raw)
    except ValueError:
        raise MalformedInputError(f"RAMICALC_MAX_DENOM must be an integer, got {raw!r}") from None
    if value < 1:
        raise MalformedInputError("RAMICALC_MAX_DENOM must be positive")
    return value


def _emit(text: str, out: Optional[str]):
    if out is None:
        sys.stdout.write(text)
        return
    target = Path(out)
    fd, tmp = tempfile.mkstemp(dir=target.parent or ".", prefix=f".{target.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _profile(path, md):
    return rio.profile_from_json(rio.read_json(path), md)


def _decomp(path):
    return rio.decomposition_from_json(rio.read_json(path))


def _csv(path) -> PLFunction:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise MalformedInputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return from_csv(text)
    except (KeyError, ValueError, TypeError, ZeroDivisionError) as exc:
        if isinstance(exc, ValidationError):
            raise
        raise MalformedInputError(f"{path}: not a breakpoint CSV ({exc})") from None


def _bundle(args, md) -> HerbrandBundle:
    return HerbrandBundle.build(_profile(args.profile, md), _decomp(args.decomp))


def cmd_sigma(args, md):
    _emit(to_csv(sigma_function(_decomp(args.decomp))), args.out)


def cmd_phi(args, md):
    _emit(to_csv(structure_function(_profile(args.profile, md))), args.out)


def cmd_psi(args, md):
    _emit(to_csv(_bundle(args, md).psi), args.out)


def cmd_lift(args, md):
    prof = _profile(args.profile, md)
    _emit(rio.dumps(rio.profile_to_json(tame_lift_structure(prof, args.e))), args.out)


def cmd_transfer(args, md):
    eps = rio.parse_rational(args.eps, md)
    psi = _csv(args.psi) if args.psi else _bundle(args, md).psi
    _emit(format_rational(transfer_radius(psi, eps)) + "\n", args.out)


def cmd_interpolate(args, md):
    samples = rio.samples_from_json(rio.read_json(args.samples), md)
    m = rio.parse_rational(args.m, md)
    D = [rio.parse_rational(v, md) for v in args.D.split(",") if v.strip()] if args.D else []
    reference = _csv(args.reference) if args.reference else None
    rep = interpolate_psi(samples, m, D, reference)
    for line in rep.lines():
        print(line, file=sys.stderr)
    if not rep.ok:
        raise _Invalid("interpolation failed")
    if reference is None:
        _emit(to_csv(rep.psi), args.out)


def cmd_validate(args, md):
    if args.ultrametric:
        rep = validate_ultrametric(rio.table_from_json(rio.read_json(args.ultrametric), md))
        for line in rep.lines():
            print(line)
        if not rep.ok:
            raise _Invalid("ultrametric table is invalid")
    if args.profile:
        _profile(args.profile, md)
    if args.decomp:
        _decomp(args.decomp)
    if args.samples:
        rio.samples_from_json(rio.read_json(args.samples), md)
    if args.profile and args.decomp:
        for note in _bundle(args, md).notes:
            print(f"note: {note}")
    print("valid")


def cmd_pair(args, md):
    if args.table:
        table = rio.table_from_json(rio.read_json(args.table), md)
        raw = rio.read_json(args.profiles)
        if not isinstance(raw, dict):
            raise MalformedInputError("--profiles must hold an object mapping labels to profiles")
        profiles = {lab: rio.profile_from_json(obj, md) for lab, obj in raw.items()}
        _emit(rio.dumps(rio.table_to_json(varsigma_table(profiles, table))), args.out)
        return
    if not (args.profile1 and args.profile2 and args.a is not None):
        raise MalformedInputError("pair needs --profile1, --profile2 and --a, or --table and --profiles")
    p1, p2 = _profile(args.profile1, md), _profile(args.profile2, md)
    a = rio.parse_rational(args.a, md)
    _emit(format_rational(pairing_varsigma(p1, p2, a)) + "\n", args.out)


def cmd_plot(args, md):
    functions = []
    for item in args.csv or []:
        label, sep, path = item.partition("=")
        if not sep:
            label, path = Path(item).stem, item
        functions.append((label, _csv(path)))
    if args.profile and args.decomp:
        b = _bundle(args, md)
        functions += [("Phi", b.phi), ("Sigma", b.sigma), ("Psi", b.psi)]
    elif args.profile or args.decomp:
        raise MalformedInputError("plot needs both --profile and --decomp")
    if not functions:
        raise MalformedInputError("nothing to plot")
    _emit(plot_svg(functions), args.out)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ramicalc", description="Exact Herbrand-function calculator.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sigma", help="decomposition function as breakpoint CSV")
    p.add_argument("--decomp", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sigma)

    p = sub.add_parser("phi", help="structure function as breakpoint CSV")
    p.add_argument("--profile", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_phi)

    p = sub.add_parser("psi", help="Herbrand function as breakpoint CSV")
    p.add_argument("--profile", required=True)
    p.add_argument("--decomp", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_psi)

    p = sub.add_parser("lift", help="tame lift of a totally wild profile")
    p.add_argument("--e", type=int, required=True)
    p.add_argument("--profile", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_lift)

    p = sub.add_parser("transfer", help="radius psi(eps)")
    p.add_argument("--eps", required=True)
    p.add_argument("--psi", help="Herbrand function CSV (instead of --profile/--decomp)")
    p.add_argument("--profile")
    p.add_argument("--decomp")
    p.add_argument("--out")
    p.set_defaults(func=cmd_transfer)

    p = sub.add_parser("interpolate", help="reconstruct or verify psi from twist samples")
    p.add_argument("--samples", required=True)
    p.add_argument("--m", required=True)
    p.add_argument("--D", help="comma-separated excluded points")
    p.add_argument("--reference", help="breakpoint CSV to verify against")
    p.add_argument("--out")
    p.set_defaults(func=cmd_interpolate)

    p = sub.add_parser("validate", help="validate input files")
    p.add_argument("--ultrametric")
    p.add_argument("--profile")
    p.add_argument("--decomp")
    p.add_argument("--samples")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("pair", help="conductor-formula pairing")
    p.add_argument("--profile1")
    p.add_argument("--profile2")
    p.add_argument("--a")
    p.add_argument("--table")
    p.add_argument("--profiles", help="JSON object mapping table labels to profiles")
    p.add_argument("--out")
    p.set_defaults(func=cmd_pair)

    p = sub.add_parser("plot", help="SVG overlay of functions")
    p.add_argument("--csv", action="append", help="LABEL=FILE breakpoint CSV (repeatable)")
    p.add_argument("--profile")
    p.add_argument("--decomp")
    p.add_argument("--out")
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "transfer" and not args.psi and not (args.profile and args.decomp):
        print("error: transfer needs --psi or both --profile and --decomp", file=sys.stderr)
        return EXIT_MALFORMED
    try:
        args.func(args, _max_denom())
    except MalformedInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except (ValidationError, InconsistentDataError, DomainError, NotInvertibleError) as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except _Invalid as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
