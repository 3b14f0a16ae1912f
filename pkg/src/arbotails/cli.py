"""Command-line interface: ``arbotails <verb> ...``.

Exit codes: 0 success, 1 usage or syntax error, 2 domain error (tree not
alternating or not reduced, product formula not applicable, degenerate
link), 3 numerical failure or failed acceptance checks.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys
from dataclasses import dataclass
from typing import Callable

from . import qseries as qs
from .asymptotics import (
    MultisumEvaluator,
    estimate_V,
    hb_log_evaluator,
    pi2_rational_test,
    reference_constants,
)
from .errors import ArboTailsError, DomainError, NumericalError, TreeSyntaxError
from .tait import link_tait, polygon_decomposition, reduce
from .tails import MultisumSpec, TailProduct, multisum, tail_product, tail_series
from .trees import KNOWN_TREES, WeightedTree, bipartition, mirror, parse_tree

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_NUMERICAL = 0, 1, 2, 3


class UsageError(ArboTailsError):
    pass


# --- argument helpers ------------------------------------------------------

def load_tree(source: str) -> WeightedTree:
    """A known knot name, a file containing the DSL, or the DSL itself."""
    if source in KNOWN_TREES:
        return parse_tree(KNOWN_TREES[source])
    if not source.lstrip().startswith(("(", "root")) and os.path.isfile(source):
        with open(source, encoding="utf-8") as fh:
            return parse_tree(fh.read())
    return parse_tree(source)


def parse_angle(text: str) -> float:
    """'0.45pi', 'pi/4' style multiples of pi, or plain radians."""
    t = text.strip().lower().replace("π", "pi")
    m = re.fullmatch(r"([-+]?[\d.]*)\s*\*?\s*pi(?:\s*/\s*([\d.]+))?", t)
    try:
        if m:
            coef = m.group(1)
            value = float(coef) if coef not in ("", "+", "-") else float(coef + "1")
            if m.group(2):
                value /= float(m.group(2))
            return value * math.pi
        return float(t)
    except ValueError:
        raise UsageError(f"cannot read angle {text!r}") from None


@dataclass(frozen=True)
class SeriesSpec:
    """A named q-series: 'hb:4', 'prod:4,4,3', 'multisum:pretzel:1,1[:nobinom]', ..."""

    label: str
    series: Callable[[int], qs.TruncatedSeries]
    log_evaluator: Callable[[], Callable[[complex], complex]]


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def parse_spec(text: str) -> SeriesSpec:
    parts = text.strip().split(":")
    kind = parts[0]
    if kind == "hb" and len(parts) == 2:
        (b,) = _ints(parts[1]) or [0]
        return SeriesSpec(text, lambda N: qs.hb(b, N), lambda: hb_log_evaluator(b))
    if kind == "prod" and len(parts) == 2:
        factors = _ints(parts[1])
        prod = TailProduct(tuple(factors), "input")

        def log_prod():
            logs = [hb_log_evaluator(b) for b in factors if b != 2]
            return lambda h: sum((f(h) for f in logs), 0j)

        return SeriesSpec(text, lambda N: tail_series(prod, N), log_prod)
    if kind == "multisum" and len(parts) >= 2:
        nobinom = parts[-1] == "nobinom"
        body = parts[1:-1] if nobinom else parts[1:]
        if body == ["52"] and not nobinom:
            spec = MultisumSpec.five_two()
        elif body == ["818"]:
            spec = MultisumSpec.eight_eighteen(not nobinom)
        elif len(body) == 2 and body[0] == "pretzel":
            ku = _ints(body[1])
            if len(ku) != 2:
                raise UsageError("pretzel multisum needs two parameters k,u")
            spec = MultisumSpec.pretzel(ku[0], ku[1], not nobinom)
        else:
            raise UsageError(f"unknown multisum {text!r}")
        return SeriesSpec(text, lambda N: multisum(spec, N), lambda: MultisumEvaluator(spec))
    raise UsageError(f"unknown series spec {text!r}; try hb:4, prod:4,4,3, multisum:52")


# --- verbs -----------------------------------------------------------------
# each returns (result dict, human summary)

def cmd_tail(args) -> tuple[dict, str]:
    t = load_tree(args.tree)
    if args.mirror:
        t = mirror(t)
    part = bipartition(t)
    prod = tail_product(t)
    s = prod.series(args.N)
    result = {
        "tree": str(t),
        "plus": sorted(part.plus),
        "minus": sorted(part.minus),
        "applicable": True,
        "factors": list(prod.factors),
        "product": str(prod),
        "series": s.to_json(),
    }
    summary = "\n".join([
        f"tree       {t}",
        f"V+ = {sorted(part.plus)}  V- = {sorted(part.minus)}",
        f"tail       {prod}",
        f"series     {s}",
    ])
    return result, summary


def cmd_tait(args) -> tuple[dict, str]:
    t = load_tree(args.tree)
    t_plus, t_minus = link_tait(t, args.root)
    graphs = {"plus": t_plus, "minus": t_minus}
    if args.reduce:
        graphs = {k: reduce(g) for k, g in graphs.items()}
    result = {k: g.to_json() for k, g in graphs.items()}
    if args.format == "dot":
        lines = [graphs["plus"].to_dot("T_plus"), graphs["minus"].to_dot("T_minus")]
    else:
        lines = [f"T_{k}: {len(g.edges)} edges on {g.n} vertices: {json.dumps(g.to_json()['edges'])}"
                 for k, g in graphs.items()]
    if args.decompose:
        dec = polygon_decomposition(graphs["plus"])
        if dec.success:
            result["decomposition"] = list(dec.sizes)
            lines.append("polygons of T_plus: {" + ", ".join(map(str, dec.sizes)) + "}")
        else:
            result["decomposition"] = None
            result["stuck"] = dec.stuck.to_json()
            lines.append("T_plus is not an edge-connected sum of polygons; stuck at "
                         + json.dumps(dec.stuck.to_json()["edges"]))
    return result, "\n".join(lines)


def cmd_series(args) -> tuple[dict, str]:
    spec = parse_spec(args.spec)
    s = spec.series(args.N)
    return {"spec": spec.label, "series": s.to_json()}, str(s)


def cmd_compare(args) -> tuple[dict, str]:
    a, b = parse_spec(args.a), parse_spec(args.b)
    sa, sb = a.series(args.N), b.series(args.N)
    sign = qs.common_sign(sa, sb, args.N)
    if sign is not None:
        return ({"equal": True, "sign": sign, "N": args.N},
                f"equal mod q^{args.N} (sign {'+' if sign > 0 else '-'}1)")
    na, _ = qs.normalize_sign(sa)
    nb, _ = qs.normalize_sign(sb)
    j = qs.first_difference(na, nb, args.N)
    return ({"equal": False, "first_difference": j, "a": na[j], "b": nb[j], "N": args.N},
            f"differ at q^{j}: {na[j]} vs {nb[j]}")


def cmd_asympt(args) -> tuple[dict, str]:
    spec = parse_spec(args.spec)
    theta = parse_angle(args.ray)
    est = estimate_V(spec.log_evaluator(), theta, args.h0, args.ratio, args.count, args.M)
    verdict = pi2_rational_test(est.V, args.dmax, args.tol)
    ref = reference_constants()
    named = {k: complex(v) for k, v in ref.items()}
    named["-pi2_over_3"] = -named["pi2_over_3"]
    nearest = min(named, key=lambda k: abs(named[k] - est.V))
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(est.to_csv())
    result = est.to_json(verdict)
    result["nearest_reference"] = {"name": nearest, "distance": abs(named[nearest] - est.V)}
    summary = "\n".join([
        f"V          {_fmt_complex(est.V)}",
        f"residual   {est.model_residual:.3g}",
        f"pi^2 Q     {verdict}",
        f"nearest    {nearest} (distance {abs(named[nearest] - est.V):.3g})",
    ])
    return result, summary


def _fmt_complex(z: complex) -> str:
    if abs(z.imag) < 1e-9:
        return f"{z.real:.9f}"
    return f"{z.real:.9f} {'+' if z.imag >= 0 else '-'} {abs(z.imag):.9f} i"


def cmd_verify(args) -> tuple[dict, str]:
    from . import acceptance
    import io

    buf = io.StringIO()
    checks = acceptance.run(buf, only=args.only)
    result = {"checks": [{"key": c.key, "passed": c.passed, "title": c.title, "detail": c.detail}
                         for c in checks]}
    result["all_passed"] = all(c.passed for c in checks)
    return result, buf.getvalue().rstrip()


# --- plumbing --------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="arbotails", description=__doc__.splitlines()[0])
    p.add_argument("--json", action="store_true", help="machine-readable report on stdout")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("tail", help="tail of an alternating arborescent link as a product of h_b")
    s.add_argument("tree", help="tree DSL, a file containing it, or a known name such as 5_2")
    s.add_argument("-N", type=int, default=12)
    s.add_argument("--mirror", action="store_true")
    s.set_defaults(func=cmd_tail)

    s = sub.add_parser("tait", help="Tait graphs of the link")
    s.add_argument("tree")
    s.add_argument("--root", type=int, default=None)
    s.add_argument("--reduce", action="store_true")
    s.add_argument("--decompose", action="store_true")
    s.add_argument("--format", choices=("json", "dot"), default="json")
    s.set_defaults(func=cmd_tait)

    s = sub.add_parser("series", help="expand a q-series")
    s.add_argument("spec")
    s.add_argument("-N", type=int, default=20)
    s.set_defaults(func=cmd_series)

    s = sub.add_parser("compare", help="compare two q-series up to a common sign")
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("-N", type=int, default=20)
    s.set_defaults(func=cmd_compare)

    s = sub.add_parser("asympt", help="limit of h log f(e^-h) along a ray")
    s.add_argument("spec")
    s.add_argument("--ray", default="0", help="arg h, in radians or as e.g. 0.45pi")
    s.add_argument("--h0", type=float, default=0.2)
    s.add_argument("--ratio", type=float, default=0.9)
    s.add_argument("--count", "--samples", dest="count", type=int, default=30)
    s.add_argument("--M", type=int, default=3, help="number of polynomial correction terms")
    s.add_argument("--dmax", type=int, default=100)
    s.add_argument("--tol", type=float, default=1e-5)
    s.add_argument("--csv", help="write the samples to this file")
    s.set_defaults(func=cmd_asympt)

    s = sub.add_parser("verify", help="run the acceptance checks")
    s.add_argument("--only", type=int, nargs="*", help="criterion numbers to run")
    s.set_defaults(func=cmd_verify)
    return p


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, DomainError):
        return EXIT_DOMAIN
    if isinstance(exc, NumericalError):
        return EXIT_NUMERICAL
    return EXIT_USAGE


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    command = " ".join(sys.argv[1:] if argv is None else argv)
    try:
        result, summary = args.func(args)
        code = EXIT_OK
        if args.command == "verify" and not result["all_passed"]:
            code = EXIT_NUMERICAL
    except ArboTailsError as exc:
        code = exit_code_for(exc)
        result = {"error": type(exc).__name__, "message": str(exc)}
        if isinstance(exc, DomainError) and exc.vertices:
            result["vertices"] = list(exc.vertices)
        if isinstance(exc, TreeSyntaxError):
            result["position"] = exc.position
        summary = f"error: {exc}"
        print(summary, file=sys.stderr)
        if not args.json:
            return code
    if args.json:
        report = {"command": command, "result": result, "summary": summary, "exit_code": code}
        print(json.dumps(report, indent=2, default=str))
    else:
        print(summary)
    return code


if __name__ == "__main__":
    sys.exit(main())
