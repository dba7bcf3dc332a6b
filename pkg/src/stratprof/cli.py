"""Command-line front end.

Exit codes: 0 definite verdict or success, 1 bad input, 2 bad usage,
3 unknown verdict.
"""

from __future__ import annotations

import argparse
import itertools
import sys
from collections.abc import Callable, Sequence

from . import comb, engine, finite
from .core import Divergent, InvalidProfile, Profile
from .engine import HOLDS, FAILS, Verdict
from .families import FAMILY_NAMES, BadFamily, EndingOption, build_family, truncate, unfold
from .textio import ParseError, parse_profile, serialize_profile

PREDICATES = ("conv", "always-conv", "div", "pe", "spe", "bi", "ratf", "ratinf")
EXIT_OK, EXIT_INPUT, EXIT_USAGE, EXIT_UNKNOWN = 0, 1, 2, 3


class InputError(Exception):
    pass


def _bool(x: bool) -> Verdict:
    return HOLDS if x else FAILS


def _finite_only(fn: Callable[[Profile], bool]) -> Callable[[Profile], bool]:
    def run(s: Profile) -> bool:
        try:
            return fn(s)
        except finite.NotFinite:
            raise InputError("this predicate needs an acyclic profile") from None
    return run


_PROFILE_PREDS: dict[str, Callable[[Profile], bool]] = {
    "conv": engine.convergent,
    "always-conv": engine.always_convergent,
    "div": engine.divergent,
    "pe": engine.pe,
    "spe": engine.spe,
    "bi": _finite_only(finite.bi),
    "ratf": _finite_only(finite.rat_f),
    "ratinf": engine.rat_inf,
}


def check_profile(s: Profile, pred: str) -> Verdict:
    return _bool(_PROFILE_PREDS[pred](s))


def check_comb(spec: comb.CombSpec, w: comb.CombChoiceWord, pred: str, bound: int) -> Verdict:
    if pred == "conv":
        return _bool(comb.comb_convergent(spec, w))
    if pred == "always-conv":
        return _bool(comb.comb_always_convergent(spec, w))
    if pred == "div":
        return _bool(comb.comb_divergent(spec, w))
    if pred == "pe":
        return _bool(comb.comb_pe(spec, w))
    if pred == "spe":
        return _bool(comb.comb_spe(spec, w).valid)
    if pred == "ratinf":
        return comb.comb_rat_inf(spec, w, bound)
    raise InputError(f"{pred} is defined for finite profiles only, not for combs")


def _read(path: str) -> Profile:
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    try:
        return parse_profile(text)
    except ParseError as exc:
        raise InputError(f"{path}: {exc}") from None


def _params(items: Sequence[str]) -> dict[str, str]:
    out = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise InputError(f"--param expects KEY=VALUE, got {item!r}")
        out[key] = value
    return out


def _verdict_exit(v: Verdict, out) -> int:
    print(v, file=out)
    return EXIT_OK if v.definite else EXIT_UNKNOWN


def cmd_check(args, out) -> int:
    return _verdict_exit(check_profile(_read(args.input), args.pred), out)


def _choice_line(s: Profile) -> str:
    names = {i: f"n{k}" for k, i in enumerate(s.reachable)}
    return " ".join(f"{names[i]}={s.nodes[i].choice}" for i in s.internal_ids)


def cmd_enumerate(args, out) -> int:
    g = _read(args.input)
    ids = g.internal_ids
    if len(ids) > args.bound:
        raise InputError(f"{len(ids)} decision nodes exceeds --bound {args.bound}")
    test = _PROFILE_PREDS[args.pred] if args.pred else (lambda s: True)
    count = 0
    for combo in itertools.product((1, 2), repeat=len(ids)):
        s = g.with_choices(dict(zip(ids, combo)))
        if test(s):
            count += 1
            print(serialize_profile(s) if args.emit == "text" else _choice_line(s), file=out)
    print(f"# {count} of {2 ** len(ids)} profiles", file=out)
    return EXIT_OK


def _emit(s: Profile, fmt: str, out) -> None:
    out.write(serialize_profile(s, fmt))


def cmd_family(args, out) -> int:
    try:
        bundle = build_family(args.name, _params(args.param))
    except BadFamily as exc:
        raise InputError(str(exc)) from None
    if args.profile is None:
        if args.check or args.emit:
            raise InputError("--check and --emit need --profile")
        for name in sorted(bundle.profiles):
            print(f"{name}: {bundle.profiles[name]}" if bundle.is_comb else name, file=out)
        return EXIT_OK
    try:
        p = bundle.profile(args.profile)
    except BadFamily as exc:
        raise InputError(str(exc)) from None
    if bundle.is_comb:
        if args.emit:
            try:
                _emit(comb.to_profile(bundle.game, p), args.emit, out)
            except comb.NotRational as exc:
                raise InputError(f"cannot emit {args.name}: {exc}") from None
        if args.check:
            return _verdict_exit(check_comb(bundle.game, p, args.check, args.bound), out)
        return EXIT_OK
    if args.emit:
        _emit(p, args.emit, out)
    if args.check:
        return _verdict_exit(check_profile(p, args.check), out)
    return EXIT_OK


def cmd_unfold(args, out) -> int:
    ending = EndingOption(args.ending)
    if args.family:
        try:
            bundle = build_family(args.family, _params(args.param))
        except BadFamily as exc:
            raise InputError(str(exc)) from None
        if not bundle.is_comb:
            raise InputError(f"{args.family} is not a comb family; save a profile and unfold the file")
        s = unfold(bundle.game, args.depth, ending)
    else:
        if args.param:
            raise InputError("--param applies to --family only")
        try:
            s = truncate(_read(args.input), args.depth, ending)
        except Divergent:
            raise InputError("takeall needs every cut node to be convergent") from None
        except ValueError as exc:
            raise InputError(str(exc)) from None
    _emit(s, args.emit, out)
    return EXIT_OK


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="stratprof", description="Rationality checks on strategy profiles.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="evaluate a predicate on a profile file")
    c.add_argument("--pred", required=True, choices=PREDICATES)
    c.add_argument("input", help="profile file, or - for stdin")
    c.set_defaults(run=cmd_check)

    e = sub.add_parser("enumerate", help="list the profiles of a game satisfying a predicate")
    e.add_argument("--pred", choices=PREDICATES)
    e.add_argument("--bound", type=_positive, default=finite.DEFAULT_ENUMERATION_BOUND,
                   help="refuse games with more decision nodes (default %(default)s)")
    e.add_argument("--emit", choices=("choices", "text"), default="choices")
    e.add_argument("input")
    e.set_defaults(run=cmd_enumerate)

    f = sub.add_parser("family", help="named games from the literature")
    f.add_argument("name", choices=FAMILY_NAMES)
    f.add_argument("--param", action="append", default=[], metavar="KEY=VALUE")
    f.add_argument("--profile")
    f.add_argument("--check", choices=PREDICATES)
    f.add_argument("--emit", choices=("text", "dot"))
    f.add_argument("--bound", type=_positive, default=comb.DEFAULT_WITNESS_BOUND,
                   help="witness search bound for ratinf on combs (default %(default)s)")
    f.set_defaults(run=cmd_family)

    u = sub.add_parser("unfold", help="cut a comb family or a profile file to a finite game")
    src = u.add_mutually_exclusive_group(required=True)
    src.add_argument("--family", choices=FAMILY_NAMES)
    src.add_argument("input", nargs="?")
    u.add_argument("--param", action="append", default=[], metavar="KEY=VALUE")
    u.add_argument("--depth", type=_positive, required=True)
    u.add_argument("--ending", choices=[o.value for o in EndingOption], required=True)
    u.add_argument("--emit", choices=("text", "dot"), default="text")
    u.set_defaults(run=cmd_unfold)
    return p


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.run(args, out)
    except (InputError, InvalidProfile, finite.TooLarge) as exc:
        print(f"stratprof: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
