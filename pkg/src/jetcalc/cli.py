"""Command-line front end.

Exit codes: 0 zero result / compatible / true; 1 nonzero / obstruction /
false; 2 usage or parse error; 3 resource budget exceeded.
"""
import argparse
import json
import sys

from .compat import (CompatReport, EquationSystem, check_compatibility,
                     complete_intersection_check, frobenius_check,
                     integrability_conditions, is_compatible_pair,
                     mayer_reduce, ode_intermediate_pde, op_from_symbol,
                     symmetry_check, COMPATIBLE)
from .context import JetContext
from .errors import BudgetExceeded, JetCalcError, ParseError
from .expr import Expr
from .ideal import symbol_gcd_resultant, DEFAULT_BUDGET
from .jet import evaluate_on_ansatz, prolong_system, symbol, total_derivative
from .linops import (apply_op, jacobi_bracket, linearize, multi_bracket)
from .parser_io import format_expr, load_context, parse, parse_rule


def _build_argparser():
    ap = argparse.ArgumentParser(
        prog="jetcalc",
        description="Exact jet-space calculus: brackets of differential "
                    "operators and compatibility of differential constraints.")
    ap.add_argument("--ctx", metavar="PATH",
                    help="context configuration (JSON)")
    ap.add_argument("--json", action="store_true", dest="as_json",
                    help="emit structured JSON output")
    ap.add_argument("--cap", type=int, default=None,
                    help="prolongation cap override")
    ap.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                    help="S-polynomial budget")
    sub = ap.add_subparsers(dest="command", required=True)

    sub.add_parser("eval", help="normalize an expression") \
        .add_argument("expr")
    p = sub.add_parser("td", help="total derivative D_var(expr)")
    p.add_argument("var")
    p.add_argument("expr")
    sub.add_parser("lin", help="linearization operator") \
        .add_argument("expr")
    p = sub.add_parser("bracket", help="Jacobi bracket {F,G}")
    p.add_argument("F")
    p.add_argument("G")
    p = sub.add_parser("multibracket", help="multi-bracket of m+1 operators")
    p.add_argument("exprs", nargs="+")
    p = sub.add_parser("mayer", help="Mayer bracket of a pair")
    p.add_argument("F")
    p.add_argument("G")
    p = sub.add_parser("compat", help="compatibility of a system")
    p.add_argument("exprs", nargs="+")
    p = sub.add_parser("symmetry", help="symmetry condition {F,G} in J(F)")
    p.add_argument("F")
    p.add_argument("G")
    sub.add_parser("symbol", help="top-order symbol") \
        .add_argument("expr")
    p = sub.add_parser("ci-check", help="complete intersection of two symbols")
    p.add_argument("F")
    p.add_argument("G")
    p = sub.add_parser("reduced-bracket",
                       help="reduced bracket for common symbol divisors")
    p.add_argument("F")
    p.add_argument("G")
    p = sub.add_parser("frobenius", help="cross-derivative residuals of "
                                         "solved equations 'lead = rhs'")
    p.add_argument("rules", nargs="+")
    p = sub.add_parser("iconds", help="integrability conditions (one "
                                      "projection step)")
    p.add_argument("exprs", nargs="+")
    p = sub.add_parser("ansatz-check", help="evaluate expr on an ansatz "
                                            "'dep = value'")
    p.add_argument("expr")
    p.add_argument("bindings", nargs="+")
    p = sub.add_parser("ode-ii", help="intermediate-integral residual for "
                                      "u'' = F(x,u,p)")
    p.add_argument("F")
    return ap


def _emit(args, payload, text):
    if args.as_json:
        print(json.dumps(payload, indent=2))
    else:
        print(text)


def _report_exit(args, report):
    _emit(args, report.as_dict(),
          report.verdict if not report.obstructions else
          "{}: {}".format(report.verdict,
                          "; ".join(o.text() for o in report.obstructions)))
    return 0 if report.verdict == COMPATIBLE else 1


def _expr_exit(args, e, extra=None):
    payload = {"result": format_expr(e), "zero": e.is_zero()}
    if extra:
        payload.update(extra)
    _emit(args, payload, format_expr(e))
    return 0 if e.is_zero() else 1


def _run(args):
    if not args.ctx and args.command != "ode-ii":
        print("error: --ctx is required", file=sys.stderr)
        return 2
    ctx = load_context(args.ctx) if args.ctx else None

    if args.command == "eval":
        return _expr_exit(args, parse(args.expr, ctx))

    if args.command == "td":
        e = parse(args.expr, ctx)
        for v in args.var:
            e = total_derivative(ctx, e, ctx.indep_index(v))
        return _expr_exit(args, e)

    if args.command == "lin":
        op = linearize(ctx, parse(args.expr, ctx))
        _emit(args, {"operator": op.text()}, op.text())
        return 0 if op.is_zero() else 1

    if args.command == "bracket":
        e = jacobi_bracket(ctx, parse(args.F, ctx), parse(args.G, ctx))
        return _expr_exit(args, e)

    if args.command == "multibracket":
        e = multi_bracket(ctx, [parse(s, ctx) for s in args.exprs])
        return _expr_exit(args, e)

    if args.command == "mayer":
        sys_ = EquationSystem(ctx, (parse(args.F, ctx), parse(args.G, ctx)),
                              cap_override=args.cap, budget=args.budget)
        return _expr_exit(args, mayer_reduce(sys_))

    if args.command == "compat":
        eqs = tuple(parse(s, ctx) for s in args.exprs)
        if len(eqs) == 2 and ctx.n_dep == 1:
            report = is_compatible_pair(ctx, eqs[0], eqs[1], cap=args.cap,
                                        budget=args.budget)
        else:
            report = check_compatibility(EquationSystem(
                ctx, eqs, cap_override=args.cap, budget=args.budget))
        return _report_exit(args, report)

    if args.command == "symmetry":
        report = symmetry_check(ctx, parse(args.F, ctx), parse(args.G, ctx),
                                cap=args.cap, budget=args.budget)
        return _report_exit(args, report)

    if args.command == "symbol":
        s = symbol(ctx, parse(args.expr, ctx))
        _emit(args, {"symbol": s.text(), "order": s.order}, s.text())
        return 0 if s.is_zero() else 1

    if args.command == "ci-check":
        ok, gcd_comp, res_ok = complete_intersection_check(
            ctx, parse(args.F, ctx), parse(args.G, ctx))
        gcd_text = " + ".join(
            "*".join([v.text()] + [f"xi_{n}^{s}" if s > 1 else f"xi_{n}"
                                   for n, s in zip(ctx.independent, sig) if s])
            for sig, v in sorted(gcd_comp.items()))
        _emit(args, {"transversal": ok, "gcd": gcd_text,
                     "resultantNonzero": res_ok},
              f"{'transversal' if ok else 'not transversal'} (gcd {gcd_text})")
        return 0 if ok else 1

    if args.command == "reduced-bracket":
        F = parse(args.F, ctx)
        G = parse(args.G, ctx)
        sF = symbol(ctx, F)
        sG = symbol(ctx, G)
        gcd_comp, gdeg, _ = symbol_gcd_resultant(sF, sG)
        if gdeg == 0:
            print("error: symbols have no common divisor; use mayer",
                  file=sys.stderr)
            return 2
        S = op_from_symbol(ctx, _divide_symbol(ctx, sF.component(0), gcd_comp))
        T = op_from_symbol(ctx, _divide_symbol(ctx, sG.component(0), gcd_comp))
        from .compat import reduced_bracket
        e = reduced_bracket(ctx, F, G, S, T, gcd_comp, budget=args.budget)
        return _expr_exit(args, e)

    if args.command == "frobenius":
        rules = [parse_rule(s, ctx) for s in args.rules]
        return _report_exit(args, frobenius_check(ctx, rules))

    if args.command == "iconds":
        sys_ = EquationSystem(ctx, tuple(parse(s, ctx) for s in args.exprs),
                              cap_override=args.cap, budget=args.budget)
        conds = integrability_conditions(sys_)
        _emit(args, {"conditions": [format_expr(c) for c in conds]},
              "\n".join(format_expr(c) for c in conds) if conds else "none")
        return 0 if not conds else 1

    if args.command == "ansatz-check":
        e = parse(args.expr, ctx)
        bindings = {}
        for b in args.bindings:
            dep, _, val = b.partition("=")
            dep = dep.strip()
            if not val:
                print(f"error: binding {b!r} must look like dep = value",
                      file=sys.stderr)
                return 2
            bindings[dep] = parse(val, ctx)
        return _expr_exit(args, evaluate_on_ansatz(ctx, e, bindings))

    if args.command == "ode-ii":
        params = tuple(ctx.parameters) if ctx else ("c",)
        in_ctx = JetContext(independent=("x", "u"), dependent=("p",),
                            parameters=params)
        ctx_out, resid = ode_intermediate_pde(parse(args.F, in_ctx),
                                              parameters=params)
        return _expr_exit(args, resid)

    print(f"error: unknown command {args.command}", file=sys.stderr)
    return 2


def _divide_symbol(ctx, comp, divisor):
    """Exact quotient of scalar symbol dicts (single-term divisors arise
    from the gcd of paper-scale symbols)."""
    from .jet import symbol_mul
    if len(divisor) == 1:
        (dsig, dc), = divisor.items()
        out = {}
        for sig, c in comp.items():
            qsig = tuple(a - b for a, b in zip(sig, dsig))
            if any(x < 0 for x in qsig):
                raise JetCalcError("symbol division with remainder")
            out[qsig] = c / dc
        if symbol_mul(out, divisor) != comp:
            raise JetCalcError("symbol division with remainder")
        return out
    raise JetCalcError("only monomial symbol divisors are supported")


def main(argv=None):
    ap = _build_argparser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as ex:
        return 2 if ex.code not in (0, None) else 0
    try:
        return _run(args)
    except ParseError as ex:
        print(f"parse error: {ex}", file=sys.stderr)
        return 2
    except BudgetExceeded as ex:
        print(f"budget exceeded: {ex}", file=sys.stderr)
        return 3
    except (JetCalcError, OSError, KeyError, ValueError) as ex:
        print(f"error: {ex}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
