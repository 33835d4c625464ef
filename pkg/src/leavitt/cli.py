"""Command-line surface over the whole library.

Outputs are canonical text certificates: identical inputs produce
byte-identical output on every run and platform.  Exit codes: 0 success,
1 mathematically impossible request (NotUnitary, NoIsomorphism,
NotFixed, ...), 2 ill-formed input.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__, textio
from .core import Shape
from .dynamics import cc_closed_form, cc_count, germ, germ_rank, act
from .errors import LeavittError, ParseError
from .isomorphisms import (aap_data, aap_hom, aap_inverse_hom, gcd_iso)
from .matrices import is_unitary
from .thompson import compose, equals, from_matrix, inverse, is_basis, to_matrix


def _read_arg(value: str) -> str:
    """Positional record arguments: literal text, @file, or '-' for stdin."""
    if value == "-":
        return sys.stdin.read()
    if value.startswith("@"):
        with open(value[1:], "r", encoding="utf-8") as fh:
            return fh.read()
    return value


def _shape(args) -> Shape:
    return Shape(args.r, args.t)


def _parse_dims(text):
    try:
        m, n = text.lower().split("x")
        return int(m), int(n)
    except ValueError as exc:
        raise ParseError(f"bad dims {text!r}; expected MxN") from exc


def _emit_element(elem) -> None:
    if (elem.m, elem.n) == (1, 1):
        print(textio.format_element(elem))
    else:
        print(textio.format_matrix(elem))


def _cmd_normalize(args):
    dims = _parse_dims(args.dims) if args.dims else None
    elem = textio.parse_any_element(_read_arg(args.expr), _shape(args), dims)
    _emit_element(elem)
    return 0


def _cmd_mul(args):
    shape = _shape(args)
    a = textio.parse_any_element(_read_arg(args.a), shape)
    b = textio.parse_any_element(_read_arg(args.b), shape)
    _emit_element(a * b)
    return 0


def _cmd_involute(args):
    elem = textio.parse_any_element(_read_arg(args.expr), _shape(args))
    _emit_element(elem.involute())
    return 0


def _cmd_is_unitary(args):
    elem = textio.parse_any_element(_read_arg(args.expr), _shape(args))
    wit = is_unitary(elem)
    print(json.dumps({"left": wit.left, "right": wit.right,
                      "unitary": wit.unitary}, sort_keys=True))
    return 0


def _cmd_to_treepair(args):
    elem = textio.parse_any_element(_read_arg(args.expr), _shape(args))
    g = from_matrix(elem, max_escalation=args.max_escalation)
    print(textio.treepair_to_json(g))
    return 0


def _cmd_to_matrix(args):
    g = textio.treepair_from_json(_read_arg(args.pair))
    print(textio.format_matrix(to_matrix(g)))
    return 0


def _cmd_compose(args):
    g = textio.treepair_from_json(_read_arg(args.g))
    h = textio.treepair_from_json(_read_arg(args.h))
    print(textio.treepair_to_json(compose(g, h)))
    return 0


def _cmd_inverse(args):
    g = textio.treepair_from_json(_read_arg(args.pair))
    print(textio.treepair_to_json(inverse(g)))
    return 0


def _cmd_equal(args):
    g = textio.treepair_from_json(_read_arg(args.g))
    h = textio.treepair_from_json(_read_arg(args.h))
    print("true" if equals(g, h) else "false")
    return 0


def _cmd_is_basis(args):
    A = textio.leafset_from_json(_read_arg(args.leafset))
    print("true" if is_basis(A, use_unitary_shortcut=not args.generic)
          else "false")
    return 0


def _cmd_aap_iso(args):
    data = aap_data(args.r, args.m)
    if args.show == "hom":
        print(textio.hom_to_json(aap_hom(args.r, args.m)))
    elif args.show == "pi":
        window = range(0, 2 * args.m + 1)
        for s in range(2, args.r + 1):
            members = " ".join(str(i) for i in window
                               if data.orbit_rep(i) == s)
            print(f"orbit[{s}]: {members}")
        for (s, j), v in sorted(data.sharp.items()):
            print(f"{s}#{j} = {v}")
    elif args.show == "Y":
        print(textio.format_matrix(data.Y))
    else:  # preimages
        for key in sorted(data.preimages):
            val = textio.format_element(data.preimages[key])
            if key[0] == "e":
                print(f"e[{key[1]},{key[2]}] = {val}")
            elif key[0] == "ye":
                print(f"y{key[1]} e[1,{key[1]}] = {val}")
            else:
                print(f"y{key[1]} e[1,1] = {val}")
    return 0


def _cmd_gcd_iso(args):
    h = gcd_iso(args.r, args.t, args.m1, args.m2)
    print(textio.hom_to_json(h))
    return 0


def _load_hom(args):
    count = sum(1 for v in (args.hom, args.aap, args.gcd) if v)
    if count != 1:
        raise ParseError("give exactly one of --hom, --aap, --gcd")
    if args.hom:
        return textio.hom_from_json(_read_arg(args.hom))
    if args.aap:
        r, m = args.aap
        return aap_inverse_hom(r, m) if args.inverse else aap_hom(r, m)
    r, t, m1, m2 = args.gcd
    h = gcd_iso(r, t, m1, m2)
    return h.inverse if args.inverse else h


def _cmd_apply_hom(args):
    h = _load_hom(args)
    dims = (h.source_m, h.source_m)
    elem = textio.parse_any_element(_read_arg(args.expr), h.shape, dims)
    _emit_element(h.apply(elem))
    return 0


def _cmd_verify_hom(args):
    h = _load_hom(args)
    print("true" if h.verify() else "false")
    return 0


def _cmd_act(args):
    g = textio.treepair_from_json(_read_arg(args.pair))
    p = textio.parse_point(_read_arg(args.point), g.m, g.shape)
    print(textio.format_point(act(g, p)))
    return 0


def _cmd_germ(args):
    g = textio.treepair_from_json(_read_arg(args.pair))
    p = textio.parse_point(_read_arg(args.point), g.m, g.shape)
    print(json.dumps(list(germ(g, p))))
    return 0


def _cmd_germ_rank(args):
    p = textio.parse_point(_read_arg(args.point), args.m, _shape(args))
    print(germ_rank(p))
    return 0


def _cmd_cc(args):
    if args.closed_form:
        print(cc_closed_form(args.p, args.a, args.r, args.m))
    else:
        print(cc_count(args.p, args.a, args.r, args.m))
    return 0


class _GrammarAction(argparse.Action):
    def __call__(self, parser, namespace, values, option_string=None):
        print(textio.GRAMMAR)
        parser.exit(0)


def _add_shape_flags(sub, t_default=None):
    sub.add_argument("--r", type=int, required=True, help="ring rank (>= 2)")
    if t_default is None:
        sub.add_argument("--t", type=int, required=True,
                         help="tensor length (>= 1)")
    else:
        sub.add_argument("--t", type=int, default=t_default)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="leavitt",
        description="Exact computation in Leavitt matrix rings and the "
                    "Brin-Higman-Thompson groups.")
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--grammar", nargs=0, action=_GrammarAction,
                        help="print the text-format specification and exit")
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("normalize", help="normal form of a raw expression")
    _add_shape_flags(sub)
    sub.add_argument("--dims", help="declared dims MxN for flat unit terms")
    sub.add_argument("expr")
    sub.set_defaults(func=_cmd_normalize)

    sub = subs.add_parser("mul", help="product of two elements or matrices")
    _add_shape_flags(sub)
    sub.add_argument("a")
    sub.add_argument("b")
    sub.set_defaults(func=_cmd_mul)

    sub = subs.add_parser("involute", help="conjugate transpose")
    _add_shape_flags(sub)
    sub.add_argument("expr")
    sub.set_defaults(func=_cmd_involute)

    sub = subs.add_parser("is-unitary", help="check u u* = I and u* u = I")
    _add_shape_flags(sub)
    sub.add_argument("expr")
    sub.set_defaults(func=_cmd_is_unitary)

    sub = subs.add_parser("to-treepair",
                          help="tree pair of a positive unitary matrix")
    _add_shape_flags(sub)
    sub.add_argument("--max-escalation", type=int, default=4)
    sub.add_argument("expr")
    sub.set_defaults(func=_cmd_to_treepair)

    sub = subs.add_parser("to-matrix", help="matrix image of a tree pair")
    sub.add_argument("pair")
    sub.set_defaults(func=_cmd_to_matrix)

    sub = subs.add_parser("compose", help="compose two tree pairs (g then h)")
    sub.add_argument("g")
    sub.add_argument("h")
    sub.set_defaults(func=_cmd_compose)

    sub = subs.add_parser("inverse", help="inverse of a tree pair")
    sub.add_argument("pair")
    sub.set_defaults(func=_cmd_inverse)

    sub = subs.add_parser("equal", help="group equality of two tree pairs")
    sub.add_argument("g")
    sub.add_argument("h")
    sub.set_defaults(func=_cmd_equal)

    sub = subs.add_parser("is-basis",
                          help="is a leaf set reachable by expansions")
    sub.add_argument("--generic", action="store_true",
                     help="force the backtracking engine even for t <= 2")
    sub.add_argument("leafset")
    sub.set_defaults(func=_cmd_is_basis)

    sub = subs.add_parser("aap-iso",
                          help="direct isomorphism scalars ~ Mat_m data")
    sub.add_argument("--r", type=int, required=True)
    sub.add_argument("--m", type=int, required=True)
    sub.add_argument("--show", choices=["hom", "pi", "Y", "preimages"],
                     default="hom")
    sub.set_defaults(func=_cmd_aap_iso)

    sub = subs.add_parser("gcd-iso",
                          help="isomorphism Mat_m1 ~ Mat_m2 when gcds agree")
    sub.add_argument("--r", type=int, required=True)
    sub.add_argument("--t", type=int, required=True)
    sub.add_argument("--m1", type=int, required=True)
    sub.add_argument("--m2", type=int, required=True)
    sub.set_defaults(func=_cmd_gcd_iso)

    for name, fn in (("apply-hom", _cmd_apply_hom),
                     ("verify-hom", _cmd_verify_hom)):
        sub = subs.add_parser(name)
        sub.add_argument("--hom", help="homomorphism record (@file, -, or text)")
        sub.add_argument("--aap", nargs=2, type=int, metavar=("R", "M"))
        sub.add_argument("--gcd", nargs=4, type=int,
                         metavar=("R", "T", "M1", "M2"))
        sub.add_argument("--inverse", action="store_true",
                         help="use the recorded inverse direction")
        if name == "apply-hom":
            sub.add_argument("expr")
        sub.set_defaults(func=fn)

    sub = subs.add_parser("act", help="apply a tree pair to a Cantor point")
    sub.add_argument("pair")
    sub.add_argument("point")
    sub.set_defaults(func=_cmd_act)

    sub = subs.add_parser("germ", help="germ of a tree pair at a fixed point")
    sub.add_argument("pair")
    sub.add_argument("point")
    sub.set_defaults(func=_cmd_germ)

    sub = subs.add_parser("germ-rank",
                          help="number of rational coordinates of a point")
    _add_shape_flags(sub)
    sub.add_argument("--m", type=int, required=True)
    sub.add_argument("point")
    sub.set_defaults(func=_cmd_germ_rank)

    sub = subs.add_parser("cc",
                          help="conjugacy classes of cyclic subgroups of "
                               "order dividing p^a")
    sub.add_argument("--p", type=int, required=True)
    sub.add_argument("--a", type=int, required=True)
    sub.add_argument("--r", type=int, required=True)
    sub.add_argument("--m", type=int, required=True)
    sub.add_argument("--closed-form", action="store_true")
    sub.set_defaults(func=_cmd_cc)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"ParseError: {exc}", file=sys.stderr)
        return 2
    except LeavittError as exc:
        name = type(exc).__name__
        if name.endswith("Error"):
            name = name[:-5]
        print(f"{name}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
