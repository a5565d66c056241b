"""Command-line entry point: ``artinapprox <command> ...``.

Exit status is 0 whenever a computation produced a verdict (including
"no root" or "incompatible orders") and 2 on malformed input.
"""
from __future__ import annotations

import argparse
import sys

from . import io
from .bounds import (
    DEFAULT_BIT_BUDGET,
    BoundContext,
    DegreeBoundFns,
    beta_bound,
    binomial_global_bound,
    binomial_restricted_bound,
    hermann_exponent,
)
from .errors import ArtinError
from .harness import (
    NoRoot,
    SearchSpace,
    coprime_pair,
    empirical_lower_bound,
    power_distance,
    qth_root,
    verify_decoupling_pipeline,
)
from .jets import BinomialSystem, generate_jet_system
from .series import AtLeast, Series2
from .weierstrass import prepare


def _orders(text):
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise ArtinError(f"bad order list {text!r}") from exc


def _load_series2(path, prec=None):
    s = io.series_from_json(io.load(path))
    if not isinstance(s, Series2):
        raise ArtinError(f"{path}: expected a series in t and z")
    return _with_prec(s, prec)


def _with_prec(s, prec):
    if prec is None:
        return s
    if prec > s.prec:
        raise ArtinError(f"requested precision {prec} exceeds the input precision {s.prec}")
    return s.truncate(prec)


def _load_system(path):
    try:
        return BinomialSystem.from_json(io.load(path))
    except (KeyError, TypeError) as exc:
        raise ArtinError(f"{path}: malformed binomial system ({exc})") from exc


def _lambda_fns(spec):
    if spec == "default":
        return DegreeBoundFns.default()
    if spec == "stub1":
        return DegreeBoundFns.identity()
    if spec.startswith("const:"):
        try:
            return DegreeBoundFns.constant(int(spec[6:]))
        except ValueError as exc:
            raise ArtinError(f"bad constant in {spec!r}") from exc
    if spec.startswith("file:"):
        obj = io.load(spec[5:])
        if not isinstance(obj, dict) or "lambda1" not in obj:
            raise ArtinError("lambda file needs a 'lambda1' expression")
        try:
            return DegreeBoundFns.from_expressions(obj["lambda1"], obj.get("lambda2"))
        except SyntaxError as exc:
            raise ArtinError(f"bad lambda expression: {exc}") from exc
    raise ArtinError(f"unknown lambda choice {spec!r}")


class _Output:
    def __init__(self, args):
        self.path = args.out
        self.chunks = []

    def write(self, text):
        self.chunks.append(text)

    def json(self, obj):
        self.write(io.dumps(obj))

    def flush(self):
        text = "".join(self.chunks)
        if self.path:
            with open(self.path, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)


# -- commands -----------------------------------------------------------------


def cmd_prepare(args, out):
    s = _load_series2(args.input, args.prec)
    form = prepare(s)
    if args.format == "text":
        out.write(f"degree: {form.degree}\ncertified_prec: {form.certified_prec}\n")
        out.write(f"unit: {form.unit.to_text()}\n")
        for j, a in enumerate(form.coeffs):
            out.write(f"a_{j}: {a.to_text()}\n")
    else:
        out.json({"schema_version": io.SCHEMA_VERSION, **io.form_to_json(form)})


def cmd_jets(args, out):
    system = _load_system(args.binomials)
    jets = generate_jet_system(system, _orders(args.orders))
    if args.format == "m2":
        out.write(jets.to_m2())
    elif args.format == "text":
        out.write(jets.to_text())
    else:
        out.json({"schema_version": io.SCHEMA_VERSION, **jets.to_json()})


def _bound_json(value, lam, mode):
    return {
        "value": value.display(mode),
        "exact": value.is_exact,
        "log10": value.display("log")[4:-1],
        "flags": sorted(value.flags),
        "formula": value.formula,
        "lambda": lam,
    }


def _emit_bound(out, args, label, value, lam):
    mode = "exact" if args.exact else "log" if args.log else "auto"
    if args.exact and not value.is_exact:
        raise ArtinError("value exceeds the bit budget; rerun with --log or a larger --budget")
    if args.format == "json":
        return {label: _bound_json(value, lam, mode)}
    flags = f" [{', '.join(sorted(value.flags))}]" if value.flags else ""
    out.write(f"{label} = {value.display(mode)}{flags}\n")
    out.write(f"formula: {value.formula}; lambda: {lam}\n")
    return None


def cmd_bounds(args, out):
    result = {"schema_version": io.SCHEMA_VERSION, "kind": args.kind}
    if args.kind == "hermann":
        e, crude = hermann_exponent(args.n, args.p, args.d)
        for label, v in (("e", e), ("crude", crude)):
            obj = _emit_bound(out, args, label, v, "n/a")
            if obj:
                result.update(obj)
    else:
        fns = _lambda_fns(args.lam)
        ctx = BoundContext(fns, bit_budget=args.budget, variant=args.variant)
        if args.kind == "beta":
            v = beta_bound(args.k, args.n, args.d, args.i, ctx=ctx)
            result.update({"k": args.k, "n": args.n, "d": args.d, "i": args.i})
            obj = _emit_bound(out, args, "beta", v, fns.name)
        else:
            system = _load_system(args.binomials)
            result["i"] = args.i
            if args.global_:
                g = binomial_global_bound(system, args.i, ctx=ctx)
                result.update({"orders": list(g.orders) if g.orders else None,
                               "candidates": g.candidates})
                if args.format != "json":
                    out.write(f"worst orders: {g.orders} of {g.candidates} compatible\n")
                obj = _emit_bound(out, args, "global", g.value, fns.name)
            else:
                if not args.orders:
                    raise ArtinError("bounds binomial needs --orders or --global")
                r = binomial_restricted_bound(system, _orders(args.orders), args.i, ctx=ctx)
                result.update({"orders": list(r.orders), "b": r.b_part})
                obj = _emit_bound(out, args, "a", r.a_part, fns.name)
                if obj:
                    result.update(obj)
                elif args.format != "json":
                    out.write(f"b = {r.b_part}\n")
                obj = _emit_bound(out, args, "bound", r.value, fns.name)
        if obj:
            result.update(obj)
    if args.format == "json":
        out.json(result)


def _order_text(v):
    if isinstance(v, AtLeast):
        return f">={v.bound}"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_order_text(x) for x in v) + "]"
    return str(v)


def _emit_report(out, args, report):
    if args.format == "text":
        out.write(f"{report.description}\n")
        for k, v in report.orders.items():
            out.write(f"order {k}: {_order_text(v)}\n")
        for k, v in report.thresholds.items():
            out.write(f"threshold {k}: {v}\n")
        out.write(f"verdicts: {', '.join(report.verdicts)}\n")
    else:
        out.json(report.to_json(timings=not args.no_timings))


def cmd_experiment_coprime(args, out):
    from .harness import ExperimentReport

    v = _load_series2(args.v, args.prec)
    x, y = coprime_pair(v, args.p, args.q)
    report = ExperimentReport(description=f"coprime pair p = {args.p}, q = {args.q}")
    report.orders = {
        "v": v.ord(),
        "x": x.ord(),
        "y": y.ord(),
        "x^p - y^q": power_distance(x, y, args.p, args.q),
    }
    root = qth_root(x, args.q)
    if isinstance(root, NoRoot):
        report.verdicts.append(f"NoRoot:{root.reason}")
        report.details["no_root"] = {"reason": root.reason, "detail": root.detail,
                                     "over_extension": root.over_extension}
    else:
        n = root.prec
        match = root.agrees_with(v.truncate(n), n) or root.agrees_with((-v).truncate(n), n)
        report.verdicts.append("root_recovered" if match else "root_differs")
        report.details["root"] = root
    report.details.update({"x": x, "y": y})
    _emit_report(out, args, report)


def cmd_experiment_search(args, out):
    f, pinned = io.poly_from_json(io.load(args.poly))
    raw = io.load(args.space)
    try:
        space = SearchSpace.from_json(raw)
    except (KeyError, TypeError, ValueError) as exc:
        raise ArtinError(f"{args.space}: malformed search space ({exc})") from exc
    if args.prec is not None:
        space = SearchSpace(space.kind, space.support, space.coefficients, args.prec,
                            space.max_candidates, space.family)
    solutions = []
    if args.solutions:
        obj = io.load(args.solutions)
        for sol in obj.get("solutions", []) if isinstance(obj, dict) else obj:
            solutions.append([io.series_from_json(s) for s in sol])
    report = empirical_lower_bound(f, args.i, space, pinned, solutions)
    _emit_report(out, args, report)


def cmd_experiment_decouple(args, out):
    system = _load_system(args.binomials)
    obj = io.load(args.solution)
    items = obj.get("x") if isinstance(obj, dict) else obj
    if not isinstance(items, list):
        raise ArtinError(f"{args.solution}: expected a list of series or {{'x': [...]}}")
    xs = [_with_prec(io.series_from_json(s), args.prec) for s in items]
    if len(xs) != system.n:
        raise ArtinError(f"expected {system.n} series, got {len(xs)}")
    report = verify_decoupling_pipeline(system, xs, args.i)
    _emit_report(out, args, report)


# -- parser ---------------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--prec", type=int, default=None, help="truncate inputs to this precision")
    common.add_argument("--out", default=None, help="write output to FILE instead of stdout")
    common.add_argument("--format", choices=["json", "text", "m2"], default="json")

    parser = argparse.ArgumentParser(prog="artinapprox", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prepare", parents=[common], help="Weierstrass preparation of a series")
    p.add_argument("--input", required=True)
    p.set_defaults(func=cmd_prepare)

    p = sub.add_parser("jets", parents=[common], help="jet polynomials of a binomial system")
    p.add_argument("--binomials", required=True)
    p.add_argument("--orders", required=True, help="comma-separated orders, e.g. 3,2")
    p.set_defaults(func=cmd_jets)

    p = sub.add_parser("bounds", parents=[common], help="evaluate effective bounds")
    p.add_argument("kind", choices=["beta", "hermann", "binomial"])
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--i", type=int)
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--p", type=int, default=1)
    p.add_argument("--lambda", dest="lam", default="default",
                   help="default | stub1 | const:C | file:PATH")
    p.add_argument("--variant", choices=["max", "sum"], default="max")
    p.add_argument("--budget", type=int, default=DEFAULT_BIT_BUDGET, help="exact bit budget")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true")
    mode.add_argument("--log", action="store_true")
    p.add_argument("--binomials")
    p.add_argument("--orders")
    p.add_argument("--global", dest="global_", action="store_true")
    p.set_defaults(func=cmd_bounds)

    exp = sub.add_parser("experiment", help="run an experiment and print its report")
    esub = exp.add_subparsers(dest="experiment", required=True)
    report_opts = argparse.ArgumentParser(add_help=False)
    report_opts.add_argument("--no-timings", action="store_true",
                             help="omit wall-clock timings for byte-stable output")

    e = esub.add_parser("coprime", parents=[common, report_opts])
    e.add_argument("--p", type=int, required=True)
    e.add_argument("--q", type=int, required=True)
    e.add_argument("--v", required=True)
    e.set_defaults(func=cmd_experiment_coprime)

    e = esub.add_parser("search", parents=[common, report_opts])
    e.add_argument("--poly", required=True)
    e.add_argument("--i", type=int, required=True)
    e.add_argument("--space", required=True)
    e.add_argument("--solutions", help="JSON list of exact solutions to certify against")
    e.set_defaults(func=cmd_experiment_search)

    e = esub.add_parser("decouple", parents=[common, report_opts])
    e.add_argument("--binomials", required=True)
    e.add_argument("--solution", required=True)
    e.add_argument("--i", type=int, required=True)
    e.set_defaults(func=cmd_experiment_decouple)
    return parser


def _require(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise ArtinError("missing " + ", ".join(f"--{n}" for n in missing))


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format == "m2" and args.command != "jets":
        parser.error("--format m2 is only available for jets")
    try:
        if args.command == "bounds":
            need = {"beta": ("n", "d", "i"), "hermann": ("n", "p", "d"), "binomial": ("binomials", "i")}
            _require(args, *need[args.kind])
        out = _Output(args)
        args.func(args, out)
        out.flush()
    except (ArtinError, OverflowError) as exc:
        print(f"artinapprox: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
