"""
ffcount – command-line entry point.

Usage:
    python main.py count-i --q 3 --n 5 --t1 0 --t2 0 --method closed
    python main.py lpoly --q 3 --curve c1 --method brute
    python main.py verify --grid "q=3,5" --quiet
"""

import argparse
import sys
from pathlib import Path

from config import DEFAULT_GRID
from ffcount.counting import (
    CoeffTarget,
    count_f_brute,
    count_f_closed,
    count_f_general,
    count_i_brute,
    count_i_closed,
)
from ffcount.curves import CurveModel, classify, corollary_table, count_points, curve_lpoly, weil_check
from ffcount.ffield import FieldElement, RelativeSpec, arith, find_irreducible, frobenius, spec_from_json, tower
from ffcount.packager import build_document, emit, error_document
from ffcount.qforms import profile, qf_value_count
from ffcount.traces import char_poly, min_poly, trace1, trace2
from ffcount.verify import run_verify


class _Parser(argparse.ArgumentParser):
    """Usage errors exit with 1 like every other failed invocation."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(1)


def _load_spec(text: str | None):
    if not text:
        return None
    if text.startswith("@"):
        text = Path(text[1:]).read_text(encoding="utf-8")
    return spec_from_json(text)


def _relative_spec(args) -> RelativeSpec | None:
    spec = _load_spec(args.field_spec)
    if spec is not None and not isinstance(spec, RelativeSpec):
        raise ValueError("--field-spec must describe F_{q^n} over F_q (a relative spec)")
    return spec


def _element(spec, code: int, name: str) -> FieldElement:
    if not 0 <= code < spec.order:
        raise ValueError(f"{name} = {code} is not an element code of {spec.label}")
    return FieldElement(spec, spec.from_index(code))


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_field(args) -> dict:
    spec = _load_spec(args.field_spec) or tower(args.q, args.n)
    out = {"field": spec.to_json(), "label": spec.label, "order": spec.order}
    if args.irreducible:
        coefficients = spec.base if isinstance(spec, RelativeSpec) else spec
        out["irreducible"] = {"degree": args.irreducible, "coeffs": find_irreducible(coefficients, args.irreducible).to_list()}
    if args.op:
        a = _element(spec, args.a, "a")
        if args.op == "inv":
            result = arith("inv", a)
        elif args.op in ("pow", "frobenius"):
            if args.b is None or args.b < 0:
                raise ValueError(f"{args.op} needs a non-negative integer --b")
            result = frobenius(a, args.b) if args.op == "frobenius" else arith("pow", a, args.b)
        else:
            if args.b is None:
                raise ValueError(f"{args.op} needs --b")
            result = arith(args.op, a, _element(spec, args.b, "b"))
        out["op"] = {"name": args.op, "a": args.a, "b": args.b, "result": result.index}
    return out


def cmd_trace(args) -> dict:
    spec = _relative_spec(args) or tower(args.q, args.n)
    a = _element(spec, args.elem, "elem")
    return {
        "q": spec.q,
        "n": spec.n,
        "elem": args.elem,
        "t1": trace1(a).value,
        "t2": trace2(a).value,
        "char_poly": char_poly(a).to_list(),
        "min_poly": min_poly(a).to_list(),
    }


def cmd_qform(args) -> dict:
    spec = _relative_spec(args)
    out = profile(args.q, args.n, args.method, args.budget, spec).to_dict()
    if args.value is not None:
        out["value"] = args.value
        out["count"] = qf_value_count(args.q, args.n, args.value, args.method, args.budget, spec)
    return out


def cmd_curve(args) -> dict:
    curve = CurveModel.named(args.curve, args.q)
    report = count_points(curve, args.n, args.method, args.budget, _relative_spec(args))
    return {
        **curve.to_dict(),
        "n": args.n,
        "points": report.value,
        "excess": report.value - args.q ** args.n - 1,
        "method": args.method,
        "case": report.case_tag,
    }


def cmd_lpoly(args) -> dict:
    curve = CurveModel.named(args.curve, args.q)
    L = curve_lpoly(curve, args.method, args.budget)
    out = {**curve.to_dict(), "method": args.method, "lpoly": list(L.coeffs), "class": classify(L)}
    out["weil"] = weil_check(L)
    if args.method == "corollary":
        out["roots"] = corollary_table(args.q)
    return out


def cmd_classify(args) -> dict:
    curve = CurveModel.named(args.curve, args.q)
    L = curve_lpoly(curve, args.method, args.budget)
    return {**curve.to_dict(), "lpoly": list(L.coeffs), "class": classify(L)}


def cmd_count_f(args) -> dict:
    target = CoeffTarget(args.t1, args.t2, args.t3).check(args.q)
    if args.method == "brute":
        return count_f_brute(args.q, args.n, target, args.budget, _relative_spec(args))
    if target.t3 is not None:
        raise ValueError("three prescribed coefficients are only counted by enumeration (--method brute)")
    if (target.t1, target.t2) == (0, 0):
        return count_f_closed(args.q, args.n)
    return count_f_general(args.q, args.n, target, args.gate, args.budget)


def cmd_count_i(args) -> dict:
    target = CoeffTarget(args.t1, args.t2).check(args.q)
    if args.method == "brute":
        return count_i_brute(args.q, args.n, target, args.poly_budget)
    if (target.t1, target.t2) != (0, 0):
        raise ValueError("the closed I count covers t1 = t2 = 0; use --method brute for other targets")
    return count_i_closed(args.q, args.n)


def _parse_grid(text: str | None) -> tuple[int, ...]:
    if not text:
        return DEFAULT_GRID
    body = text.split("=", 1)[1] if "=" in text else text
    try:
        return tuple(int(v) for v in body.split(",") if v.strip())
    except ValueError as e:
        raise ValueError(f"--grid expects q=3,5,...; got {text!r}") from e


COMMANDS = {
    "field": cmd_field,
    "trace": cmd_trace,
    "qform": cmd_qform,
    "curve": cmd_curve,
    "lpoly": cmd_lpoly,
    "classify": cmd_classify,
    "count-f": cmd_count_f,
    "count-i": cmd_count_i,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "table"), default="json", help="Output format")
    common.add_argument("--out", help="Also write the document to this file")
    common.add_argument("--budget", type=int, help="Max field elements to enumerate")
    common.add_argument("--poly-budget", type=int, help="Max candidate polynomials to test")
    common.add_argument("--field-spec", help="Field spec JSON, inline or @path")
    common.add_argument("--quiet", action="store_true", help="No progress lines on stderr")

    parser = _Parser(prog="ffcount", description="Irreducible polynomials with prescribed coefficients over F_q")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("field", parents=[common], help="Field construction and arithmetic")
    p.add_argument("--q", type=int, default=3)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--irreducible", type=int, metavar="D", help="First monic irreducible of degree D over F_q")
    p.add_argument("--op", choices=("add", "sub", "mul", "inv", "pow", "frobenius"))
    p.add_argument("--a", type=int, default=0, help="Element code")
    p.add_argument("--b", type=int, help="Element code, or exponent for pow/frobenius")

    p = sub.add_parser("trace", parents=[common], help="T1, T2 and polynomials of an element")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--elem", type=int, required=True, help="Element code in F_{q^n}")

    p = sub.add_parser("qform", parents=[common], help="The quadratic form T1(x^(q+1) - x^2)")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--value", type=int, help="Also count x with Q(x) = VALUE")
    p.add_argument("--method", choices=("brute", "closed"), default="closed")

    p = sub.add_parser("curve", parents=[common], help="Point counts of the Artin-Schreier curves")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--curve", choices=("c1", "c2", "c3"), default="c1")
    p.add_argument("--method", choices=("brute", "closed"), default="closed")

    for name, methods, default, text in (
        ("lpoly", ("brute", "closed", "corollary"), "closed", "L-polynomial of a curve"),
        ("classify", ("brute", "closed", "corollary"), "closed", "Maximal / minimal / supersingular"),
    ):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--q", type=int, required=True)
        p.add_argument("--curve", choices=("c1", "c2", "c3"), default="c1")
        p.add_argument("--method", choices=methods, default=default)

    p = sub.add_parser("count-f", parents=[common], help="F_q(n, t1, t2[, t3])")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t1", type=int, default=0)
    p.add_argument("--t2", type=int, default=0)
    p.add_argument("--t3", type=int)
    p.add_argument("--method", choices=("brute", "closed"), default="closed")
    p.add_argument("--gate", action="store_true", help="Check the closed value count against enumeration")

    p = sub.add_parser("count-i", parents=[common], help="I_q(n, t1, t2)")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t1", type=int, default=0)
    p.add_argument("--t2", type=int, default=0)
    p.add_argument("--method", choices=("brute", "closed"), default="closed")

    p = sub.add_parser("verify", parents=[common], help="Closed forms against oracles, with errata")
    p.add_argument("--grid", help='q values, e.g. "q=3,5"')
    p.add_argument("--samples", type=int, help="Random samples per property in large fields")
    p.add_argument("--seed", type=int, help="Seed for the property samples")
    p.add_argument("--timing", action="store_true", help="Add per-section timings to the report")
    return parser


def run(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            report = run_verify(
                _parse_grid(args.grid),
                budget=args.budget,
                poly_budget=args.poly_budget,
                samples=args.samples,
                seed=args.seed,
                quiet=args.quiet,
                timing=args.timing,
            )
            document = build_document("verify", report.to_dict())
            code = 0 if report.passed else 2
        else:
            result = COMMANDS[args.command](args)
            document = build_document(args.command, result if isinstance(result, dict) else result.to_dict())
            code = 0
    except (ValueError, ArithmeticError, RuntimeError, OSError) as exc:
        document = error_document(args.command, exc)
        code = 1
    print(emit(document, args.format, args.out))
    return code


if __name__ == "__main__":
    sys.exit(run())
