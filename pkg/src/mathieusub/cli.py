"""Command-line front end.

Exit codes: 0 Mathieu / verified, 10 NotMathieu / failing subset,
20 Indeterminate, 30 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

from sympy import isprime

from . import laurent
from .ff import FieldError, make_field, parse_field_spec
from .galg import format_element
from .group import AbelianGroup, GroupError, abelian_groups, parse_group_spec
from .mathieu import (
    DEFAULT_BUDGET,
    FrameError,
    Outcome,
    build_eval_frame,
    decide,
    functional_L,
    subset_sum_check,
    verify_kernel_correspondence,
)

EXIT_OK = 0
EXIT_NOT_MATHIEU = 10
EXIT_INDETERMINATE = 20
EXIT_VERIFY_FAILED = 30
EXIT_USAGE = 2

_OUTCOME_EXIT = {
    Outcome.MATHIEU: EXIT_OK,
    Outcome.NOT_MATHIEU: EXIT_NOT_MATHIEU,
    Outcome.INDETERMINATE: EXIT_INDETERMINATE,
}


class UsageError(Exception):
    pass


def _field(spec: str):
    try:
        return parse_field_spec(spec)
    except FieldError as exc:
        raise UsageError(str(exc)) from None


def _group(spec: str):
    try:
        return parse_group_spec(spec)
    except GroupError as exc:
        raise UsageError(str(exc)) from None


def _prime(p: int) -> int:
    if not isprime(p):
        raise UsageError(f"bad prime token {str(p)!r}")
    return p


def _positive(name: str, value: int) -> int:
    if value < 1:
        raise UsageError(f"{name} must be >= 1, got {value}")
    return value


def _out(text: str) -> None:
    sys.stdout.write(text + "\n")


# -- subcommands ---------------------------------------------------------------

def cmd_verdict(args) -> int:
    K, G = _field(args.field), _group(args.group)
    _positive("--budget", args.budget)
    v = decide(K, G, budget=args.budget, workers=args.workers)
    if not args.text:
        _out(v.to_json())
    else:
        _out(f"field\t{K.spec}")
        _out(f"group\t{G.name}")
        _out(f"outcome\t{v.outcome.value}")
        _out(f"method\t{v.method}")
        _out(f"witness\t{format_element(v.witness.element) if v.witness else '-'}")
        _out(f"examined\t{v.examined}")
        if v.reason:
            _out(f"reason\t{v.reason}")
    return _OUTCOME_EXIT[v.outcome]


def cmd_scan(args) -> int:
    specs = [s for item in args.field for s in item.split(",") if s]
    if not specs:
        raise UsageError("scan needs at least one -f field")
    fields = [_field(s) for s in specs]
    _positive("--max-order", args.max_order)
    _positive("--budget", args.budget)
    fields = sorted(set(fields), key=lambda F: (F.order, F.p))
    _out("field\tgroup\torder\toutcome\tmethod\twitness\texamined")
    for K in fields:
        for n in range(2, args.max_order + 1):
            for factors in abelian_groups(n):
                G = AbelianGroup(factors)
                v = decide(K, G, budget=args.budget, workers=args.workers)
                w = format_element(v.witness.element) if v.witness else "-"
                _out(f"{K.spec}\t{G.name}\t{n}\t{v.outcome.value}\t{v.method}\t{w}\t{v.examined}")
    return EXIT_OK


def cmd_counterexample(args) -> int:
    p = _prime(args.p)
    _positive("-M", args.M)
    _positive("-k", args.k)
    if p ** args.k > 10 ** 5:
        raise UsageError(f"p^k = {p}^{args.k} exceeds 10^5")
    r1 = laurent.verify_trace_of_powers(p, args.M)
    r2 = laurent.verify_shifted_trace(p, args.k)
    ok = r1.ok and r2.ok
    if args.json:
        _out(json.dumps({"p": p, "ok": ok, "powers": r1.as_dict(), "shifted": r2.as_dict()}))
    else:
        _out(f"# f = z^-1 + z^{p - 1} over GF({p})")
        _out("m\ttr(f^m)")
        for row in r1.rows:
            _out(f"{row['m']}\t{row['trace']}")
        _out("k\ttr(z^-1 f^(p^k-1))\texpected")
        for row in r2.rows:
            _out(f"{row['k']}\t{row['trace']}\t{row['expected']}")
        _out("verified" if ok else "VERIFICATION FAILED")
    return EXIT_OK if ok else EXIT_VERIFY_FAILED


def cmd_binom(args) -> int:
    p = _prime(args.p)
    _positive("-k", args.k)
    _positive("-b", args.b)
    if p ** args.k > 10 ** 4 or args.b > 10 ** 3:
        raise UsageError("need p^k <= 10^4 and b <= 10^3")
    rep = laurent.verify_binomial_congruences(p, args.k, args.b)
    if args.json:
        _out(json.dumps(rep.as_dict()))
    else:
        _out("congruence\trange\tchecked\tviolations")
        for row in rep.rows:
            rng = f"k={row['k']}" if row["eq"] == "alternating" else f"b<={row['b_max']}"
            _out(f"{row['eq']}\t{rng}\t{row['checked']}\t{row['violations']}")
        _out("verified" if rep.ok else "VERIFICATION FAILED")
    return EXIT_OK if rep.ok else EXIT_VERIFY_FAILED


def cmd_subset_sum(args) -> int:
    if args.field is not None:
        F = _field(args.field)
    elif args.p is not None:
        F = make_field(_prime(args.p))
    else:
        raise UsageError("subset-sum needs -p or -f")
    try:
        coeffs = [F(tok) for tok in args.c.split(",")]
    except FieldError as exc:
        raise UsageError(str(exc)) from None
    if any(not c for c in coeffs):
        raise UsageError("coefficients must be nonzero")
    if len(coeffs) > 24:
        raise UsageError("at most 24 coefficients")
    res = subset_sum_check(coeffs)
    if args.json:
        _out(json.dumps({"field": F.spec, "passes": res.passes,
                         "failing": list(res.failing) if res.failing else None}))
    elif res.passes:
        _out("passes: every non-empty subset sum is nonzero")
    else:
        _out("fails: subset {" + ",".join(map(str, res.failing)) + "} sums to zero")
    return EXIT_OK if res.passes else EXIT_NOT_MATHIEU


def cmd_orthogonality(args) -> int:
    K, G = _field(args.field), _group(args.group)
    if not isinstance(G, AbelianGroup):
        raise UsageError(f"orthogonality needs an abelian group, got {G.name}")
    try:
        frame = build_eval_frame(K, G.factors)
    except FrameError as exc:
        raise UsageError(str(exc)) from None
    d = K.from_int(frame.order)
    rows, ok = [], True
    for alpha in frame.exponents.tolist():
        L = functional_L(frame, [(alpha, 1)]).value
        expected = d if not any(alpha) else 0
        ok &= L == expected
        rows.append((alpha, L, expected))
    kernel_ok = verify_kernel_correspondence(frame, samples=args.samples)
    ok &= kernel_ok
    if args.json:
        _out(json.dumps({"field": K.spec, "group": G.name, "ok": ok, "kernel_correspondence": kernel_ok,
                         "rows": [{"alpha": a, "L": K.format(L), "expected": K.format(e)} for a, L, e in rows]}))
    else:
        _out("alpha\tL(z^alpha)\texpected")
        for a, L, e in rows:
            _out(f"{','.join(map(str, a)) or '()'}\t{K.format(L)}\t{K.format(e)}")
        _out(f"kernel correspondence\t{'ok' if kernel_ok else 'FAILED'}")
        _out("verified" if ok else "VERIFICATION FAILED")
    return EXIT_OK if ok else EXIT_VERIFY_FAILED


# -- parser ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mathieusub",
                                     description="Mathieu-subspace decisions for group algebras over finite fields")
    sub = parser.add_subparsers(dest="command", required=True)

    def budgeted(sp):
        sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="max elements examined exhaustively")
        sp.add_argument("--workers", type=int, default=1, help="threads for exhaustive scans")

    sp = sub.add_parser("verdict", help="decide one (field, group) pair")
    sp.add_argument("-f", "--field", required=True, help="p or p^k")
    sp.add_argument("-g", "--group", required=True, help="Z<d1>xZ<d2>... or S3|D4|Q8")
    fmt = sp.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="JSON object (the default)")
    fmt.add_argument("--text", action="store_true", help="tab-separated key/value lines")
    budgeted(sp)
    sp.set_defaults(func=cmd_verdict)

    sp = sub.add_parser("scan", help="TSV of verdicts for all abelian groups up to an order")
    sp.add_argument("-f", "--field", action="append", default=[], help="field spec(s), comma-separated or repeated")
    sp.add_argument("-n", "--max-order", type=int, required=True)
    budgeted(sp)
    sp.set_defaults(func=cmd_scan)

    sp = sub.add_parser("counterexample", help="verify the Laurent counterexample f = z^-1 + z^(p-1)")
    sp.add_argument("-p", type=int, required=True)
    sp.add_argument("-M", type=int, default=200)
    sp.add_argument("-k", type=int, default=2)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_counterexample)

    sp = sub.add_parser("binom", help="verify the binomial congruences mod p")
    sp.add_argument("-p", type=int, required=True)
    sp.add_argument("-k", type=int, default=3)
    sp.add_argument("-b", type=int, default=100)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_binom)

    sp = sub.add_parser("subset-sum", help="check that no subset of coefficients sums to zero")
    sp.add_argument("-p", type=int)
    sp.add_argument("-f", "--field")
    sp.add_argument("-c", required=True, help="comma-separated nonzero coefficients")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_subset_sum)

    sp = sub.add_parser("orthogonality", help="character-sum orthogonality and kernel correspondence")
    sp.add_argument("-f", "--field", required=True)
    sp.add_argument("-g", "--group", required=True)
    sp.add_argument("--samples", type=int, default=64)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_orthogonality)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"mathieusub {args.command}: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
