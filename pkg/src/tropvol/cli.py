"""Command line front end: JSON in, canonical JSON out.

Exit status is 0 on success, 1 when a verification fails and 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import jsonio
from .arrangement import bergman_fan
from .cone import Cone
from .degeneration import (
    build_degeneration,
    is_compactly_arranged,
    is_generically_unimodular,
    is_specifically_reduced,
    prepare_model,
)
from .fan import Fan, unimodularize, validate_fan
from .grassmann import verify_classification
from .jsonio import canonical_json
from .normalfan import normal_fan, refined_normal_fan
from .strata import TorusEvaluator, volume_ledger


class InputError(Exception):
    pass


def _load(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from e
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"{path}:{e.lineno}:{e.colno}: {e.msg}") from e


def _parse(loader, path: str):
    data = _load(path)
    try:
        return loader(data)
    except (KeyError, TypeError, ValueError, AttributeError) as e:
        raise InputError(f"{path}: {type(e).__name__}: {e}") from e


def _emit(value, out: str | None) -> None:
    data = canonical_json(value)
    if out:
        Path(out).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)


def cmd_cone(args) -> int:
    c = _parse(jsonio.cone_from_json, args.input)
    out = {
        "cone": c,
        "dual": c.dual(),
        "dim": c.dim,
        "strongly_convex": c.is_strongly_convex(),
        "faces": sorted(c.faces()),
    }
    if c.is_strongly_convex():
        out["simplicial"] = c.is_simplicial()
        out["unimodular"] = c.is_unimodular()
    _emit(out, args.out)
    return 0


def cmd_fan(args) -> int:
    f = _parse(jsonio.fan_from_json, args.input)
    if args.validate:
        rep = validate_fan(f)
        _emit(
            {
                "valid": rep.valid,
                "missing_faces": [{"cone": c, "face": g} for c, g in rep.missing_faces],
                "bad_pairs": [[a, b] for a, b in rep.bad_pairs],
            },
            args.out,
        )
        return 0 if rep.valid else 1
    if args.unimodularize:
        f = unimodularize(f, args.budget)
    _emit(f, args.out)
    return 0


def cmd_normal_fan(args) -> int:
    u = _parse(jsonio.config_from_json, args.config)
    if args.fan:
        base = _parse(jsonio.fan_from_json, args.fan)
        f = refined_normal_fan(base, u.flattened() if u.kappa is not None else u, workers=args.threads)
    else:
        f = normal_fan(u)
    _emit(f, args.out)
    return 0


def cmd_bergman(args) -> int:
    lf = _parse(jsonio.arrangement_from_json, args.input)
    _emit(bergman_fan(lf), args.out)
    return 0


def _degeneration_inputs(args):
    base = _parse(jsonio.fan_from_json, args.fan)
    u = _parse(jsonio.config_from_json, args.config)
    if u.kappa is None:
        raise InputError(f"{args.config}: a weight 'kappa' is required")
    if u.m_rank != base.n:
        raise InputError("configuration rank differs from base fan rank")
    return base, u


def cmd_degenerate(args) -> int:
    base, u = _degeneration_inputs(args)
    if args.prepare:
        l0, df = prepare_model(base, u, args.budget, workers=args.threads)
    else:
        l0, df = args.l, build_degeneration(base, u, args.l, workers=args.threads)
    out = jsonio.classification_to_json(df)
    out["properties"] = {
        "generically_unimodular": is_generically_unimodular(df),
        "specifically_reduced": is_specifically_reduced(df),
        "compactly_arranged": is_compactly_arranged(df),
    }
    out["l"] = str(l0)
    _emit(out, args.out)
    return 0


def cmd_ledger(args) -> int:
    base, u = _degeneration_inputs(args)
    df = build_degeneration(base, u, args.l, workers=args.threads)
    led = volume_ledger(df, u, TorusEvaluator(u.rank), args.seed)
    _emit(led, args.out)
    return 0


def cmd_grassmann(args) -> int:
    rep = verify_classification(args.n, args.d, args.l, exhaustive=args.exhaustive or None, seed=args.seed, workers=args.threads)
    out = {
        "n": rep.n,
        "d": rep.d,
        "l": rep.l,
        "exhaustive": rep.exhaustive,
        "pass": rep.passed,
        "checks": rep.checks,
        "bounded_cones": rep.bounded,
        "details": {k: v for k, v in rep.details.items()},
    }
    if rep.ledger is not None:
        out["ledger"] = rep.ledger
    _emit(out, args.out)
    return 0 if rep.passed else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=1, help="worker processes")
    common.add_argument("--budget", type=int, default=10_000, help="cap on stellar subdivisions")

    p = argparse.ArgumentParser(prog="tropvol", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("cone", parents=[common], help="canonical form, dual and faces of a cone")
    s.add_argument("input")
    s.set_defaults(func=cmd_cone)

    s = sub.add_parser("fan", parents=[common], help="canonicalize, validate or unimodularize a fan")
    s.add_argument("input")
    s.add_argument("--validate", action="store_true")
    s.add_argument("--unimodularize", action="store_true")
    s.set_defaults(func=cmd_fan)

    s = sub.add_parser("normal-fan", parents=[common], help="normal fan of a configuration")
    s.add_argument("--config", required=True)
    s.add_argument("--fan", help="base fan to refine")
    s.set_defaults(func=cmd_normal_fan)

    s = sub.add_parser("bergman", parents=[common], help="fan of chains of flats of an arrangement")
    s.add_argument("input")
    s.set_defaults(func=cmd_bergman)

    for name, func, helptext in (
        ("degenerate", cmd_degenerate, "degeneration fan with height flags"),
        ("ledger", cmd_ledger, "signed ledger of bounded strata (torus case)"),
    ):
        s = sub.add_parser(name, parents=[common], help=helptext)
        s.add_argument("--fan", required=True)
        s.add_argument("--config", required=True)
        s.add_argument("--l", type=int, default=1)
        if name == "degenerate":
            s.add_argument("--prepare", action="store_true", help="unimodularize and rescale")
        s.set_defaults(func=func)

    s = sub.add_parser("grassmann", parents=[common], help="verify the Gr(2,n) classification")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--l", type=int, default=1)
    s.add_argument("--exhaustive", action="store_true", help="enumerate the whole fan")
    s.set_defaults(func=cmd_grassmann)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    try:
        return args.func(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (ValueError, KeyError) as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())
