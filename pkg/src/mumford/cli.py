"""Command line entry point: ``mumford <subcommand> ...``.

Every subcommand writes one compact JSON document to stdout, keys in a fixed
order (``tree`` can emit DOT instead).  Exit status: 0 on success, 1 for a typed library error, 2 for
malformed input.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

from . import classifier, groups, schottky, tree
from .errors import MumfordError
from .padic import from_text, is_prime, make_field, to_text


class MalformedInput(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise MalformedInput(message)


def _frac_text(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, help="residue characteristic")
    common.add_argument("--precision", type=int, default=64, help="working precision in uniformizer digits")
    common.add_argument("--format", choices=("json", "dot"), default="json")
    common.add_argument("--in", dest="infile", help="read the JSON payload from this file instead of stdin")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="mumford", description=__doc__.splitlines()[0], parents=[common])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("bound", parents=[common], help="branch-point bound for C_m * C_n")
    b.add_argument("orders", nargs=2, type=int, metavar="ORDER")

    c = sub.add_parser("classify", parents=[common], help="decide whether a Kummer cover is a Mumford cover")
    c.add_argument("--mode", choices=("auto", "four_point", "many", "tate"), default="auto")

    def add_spec_args(sp):
        sp.add_argument("--d", type=int)
        sp.add_argument("--e", type=int)
        sp.add_argument("--f", type=int, default=1)
        sp.add_argument("--k", type=int, default=1)
        sp.add_argument("--l", type=int, default=1)
        sp.add_argument("--lambda", dest="lam")

    s = sub.add_parser("synthesize", parents=[common], help="explicit Schottky generators")
    add_spec_args(s)
    v = sub.add_parser("verify", parents=[common], help="Ford-domain check of a presentation")
    add_spec_args(v)

    t = sub.add_parser("tree", parents=[common], help="quotient tree descriptor for C_m * C_n")
    t.add_argument("--m", type=int, required=True)
    t.add_argument("--n", type=int, required=True)
    t.add_argument("--lambda-val", dest="lambda_val", required=True, help="v(lambda - 1) as a rational")

    o = sub.add_parser("oracle", parents=[common], help="Reidemeister-Schreier kernel data")
    o.add_argument("--orders", required=True, help="comma separated factor orders")
    o.add_argument("--images", required=True, help="comma separated images in C_n")
    o.add_argument("--n", type=int, required=True)
    o.add_argument("--torsion", type=int, default=0, help="also run a torsion scan up to this length")
    return parser


def _read_payload(args, required: bool = True):
    text = None
    if args.infile:
        with open(args.infile, encoding="utf-8") as fh:
            text = fh.read()
    elif required or not sys.stdin.isatty():
        text = sys.stdin.read()
    if not text or not text.strip():
        if required:
            raise MalformedInput("expected a JSON payload on stdin or via --in")
        return None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"invalid JSON: {exc}") from exc


def _cmd_bound(args):
    if args.p is None or not is_prime(args.p):
        raise MalformedInput("--p must be a prime")
    m, n = args.orders
    return {"threshold_val": _frac_text(classifier.alpha_bound(args.p, m, n)),
            "bound": classifier.alpha_bound_text(args.p, m, n)}


def _cmd_classify(args):
    data = _read_payload(args)
    if not isinstance(data, dict):
        raise MalformedInput("payload must be a JSON object")
    p = data.get("p", args.p)
    if p is None:
        raise MalformedInput("missing p")
    precision = int(data.get("precision", args.precision))
    if "lambda" in data and "terms" not in data:
        F = make_field(int(p), int(data.get("field_m", 1)), precision)
        lam = from_text(F, str(data["lambda"]))
        degree = int(data.get("degree", 2))
        terms = [(0, 1), ("inf", degree - 1), (1, 1), (lam, degree - 1)]
        eq = classifier.KummerEquation.build(F, degree, terms)
    else:
        eq = classifier.KummerEquation.from_json(data, p=p, precision=precision)
    mode = args.mode
    if mode == "tate" or (mode == "auto" and "lambda" in data and eq.field.p == 2 and eq.degree == 2):
        verdict = classifier.classify(eq)
        check = classifier.tate_j_check(eq.terms[3][0].affine())
        out = verdict.to_json()
        out["tate"] = {"j": to_text(check.j), "lambda_close": check.lambda_close,
                       "j_large": check.j_large, "consistent": check.consistent}
        return out
    if mode == "four_point" or (mode == "auto" and len(eq.terms) == 4):
        return classifier.classify_four_point(eq).to_json()
    return classifier.classify(eq).to_json()


def _spec_from_args(args) -> schottky.CoverSpec:
    missing = [n for n in ("p", "d", "e", "lam") if getattr(args, n) is None]
    if missing:
        raise MalformedInput("missing " + ", ".join("--" + ("lambda" if n == "lam" else n) for n in missing))
    F = make_field(args.p, math.lcm(args.d, args.e), args.precision)
    lam = from_text(F, args.lam)
    return schottky.CoverSpec.build(args.p, args.d, args.e, lam, args.f, args.k, args.l, args.precision)


def _cmd_synthesize(args):
    return schottky.synthesize(_spec_from_args(args)).to_json()


def _cmd_verify(args):
    if args.d is not None or args.lam is not None:
        pres = schottky.synthesize(_spec_from_args(args))
    else:
        data = _read_payload(args)
        try:
            pres = schottky.SchottkyPresentation.from_json(data)
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, MumfordError):
                raise
            raise MalformedInput(f"malformed presentation: {exc}") from exc
    report = schottky.verify_schottky(pres).to_json()
    report["case"] = pres.case
    report["rank"] = pres.expected_rank
    return report


def _cmd_tree(args):
    if args.p is None:
        raise MalformedInput("--p is required")
    try:
        lv = Fraction(args.lambda_val)
    except ValueError as exc:
        raise MalformedInput(str(exc)) from exc
    desc = tree.quotient_tree(args.p, args.m, args.n, lv)
    if args.format == "dot":
        return desc.to_dot()
    return desc.to_json()


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise MalformedInput(str(exc)) from exc


def _cmd_oracle(args):
    orders = _ints(args.orders)
    a = groups.CyclicAssignment(args.n, _ints(args.images))
    kb = groups.kernel_basis(orders, a)
    out = {
        "orders": list(orders),
        "n": a.n,
        "images": list(a.images),
        "rank": kb.rank,
        "generators": [str(w) for w in kb.words],
    }
    if args.torsion:
        out["torsion_free_up_to"] = args.torsion
        out["torsion_free"] = groups.torsion_scan(orders, a, args.torsion)
    return out


COMMANDS = {
    "bound": _cmd_bound,
    "classify": _cmd_classify,
    "synthesize": _cmd_synthesize,
    "verify": _cmd_verify,
    "tree": _cmd_tree,
    "oracle": _cmd_oracle,
}


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        if args.precision < 8:
            raise MalformedInput("--precision must be at least 8")
        if args.p is not None and not is_prime(args.p):
            raise MalformedInput("--p must be prime")
        if args.format == "dot" and args.command != "tree":
            raise MalformedInput("--format dot is only valid for tree")
        result = COMMANDS[args.command](args)
    except MalformedInput as exc:
        stdout.write(json.dumps({"status": "error", "code": "malformed_input", "message": str(exc)}, separators=(",", ":")) + "\n")
        return 2
    except MumfordError as exc:
        stdout.write(json.dumps({"status": "error", "code": exc.code, "message": str(exc)}, separators=(",", ":")) + "\n")
        return 1
    if isinstance(result, str):
        stdout.write(result)
    else:
        stdout.write(json.dumps(result, separators=(",", ":")) + "\n")
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
