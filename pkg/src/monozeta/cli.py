"""Command-line front end: ``monozeta <subcommand> ...``.

Exit status is 0 on success, 1 when a precondition fails and 2 for
malformed input or usage errors.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import warnings
from fractions import Fraction

from . import cizeta, newton, zetacore
from . import exactlat as el
from .errors import HypothesisWarning, MonozetaError, ParseError
from .polyio import parse_polynomial


class UsageError(Exception):
    pass


def _vars(args, texts):
    if args.vars:
        names = [v.strip() for v in args.vars.split(",") if v.strip()]
        if not names:
            raise UsageError("--vars is empty")
        return names
    found = sorted({m for t in texts for m in re.findall(r"[A-Za-z_][A-Za-z0-9_]*", t)})
    if not found:
        raise UsageError("cannot infer variables from a constant; pass --vars")
    return found


def _poly(args):
    return parse_polynomial(args.poly, _vars(args, [args.poly]))


def _polymap(args):
    if not args.f:
        raise UsageError("give the components with -f (repeatable)")
    names = _vars(args, args.f)
    return cizeta.PolyMap(tuple(parse_polynomial(t, names) for t in args.f))


def _subset(text, n):
    try:
        idx = sorted({int(x) for x in text.split(",") if x.strip()})
    except ValueError as exc:
        raise UsageError(f"bad subset {text!r}") from exc
    if any(not 1 <= i <= n for i in idx):
        raise UsageError(f"subset {text!r} out of range 1..{n}")
    return tuple(i - 1 for i in idx)


def _fraction(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad rational value {text!r}") from exc


def _flag(args):
    if args.assume_nondegenerate:
        return True
    return False if args.strict else None


# ---------------------------------------------------------------------------
# output


def emit(result, fmt="text"):
    """Render a result deterministically as text or JSON."""
    if fmt == "json":
        return json.dumps(_jsonable(result), sort_keys=True)
    if isinstance(result, zetacore.ZetaFunction):
        return result.display()
    if isinstance(result, list):
        return " ".join(str(x) for x in result)
    if isinstance(result, el.Polytope):
        lines = [f"dim {result.intrinsic_dim}",
                 "vertices " + " ".join(_vec(v) for v in result.vertices)]
        if result.rays:
            lines.append("rays " + " ".join(_vec(r) for r in result.rays))
        for u, c in result.facet_inequalities:
            lines.append(f"facet {_vec(u)} >= {c}")
        return "\n".join(lines)
    return str(result)


def _vec(v):
    return "(" + ",".join(str(x) for x in v) + ")"


def _jsonable(result):
    if isinstance(result, zetacore.ZetaFunction):
        return result.to_json()
    if isinstance(result, el.Polytope):
        out = el.body_to_json(result)
        out["intrinsic_dim"] = result.intrinsic_dim
        out["facets"] = [{"normal": list(u), "value": c} for u, c in result.facet_inequalities]
        return out
    if isinstance(result, list):
        return result
    return result


# ---------------------------------------------------------------------------
# subcommands


def cmd_zeta_infinity(args):
    return zetacore.zeta_at_infinity(_poly(args), _flag(args))


def cmd_zeta_fiber(args):
    f = _poly(args)
    if args.central or (args.value is not None and _fraction(args.value) == f.constant()):
        return zetacore.zeta_central_fiber_smooth(f, args.route, _flag(args))
    if args.value is None:
        raise UsageError("zeta-fiber needs --value C or --central")
    return zetacore.zeta_fiber_nondegenerate(f, _fraction(args.value), _flag(args))


def cmd_lefschetz(args):
    if args.kmax < 1:
        raise UsageError("--kmax must be positive")
    return zetacore.lefschetz_numbers(zetacore.zeta_at_infinity(_poly(args), _flag(args)), args.kmax)


def cmd_euler(args):
    return zetacore.euler_generic_fiber(_poly(args), _flag(args))


def cmd_jump(args):
    f = _poly(args)
    if args.method == "2d":
        data = [zetacore.SingularDatum(zetacore.ZetaFunction.one(), mu) for mu in args.mu]
        return zetacore.jumping_number_2d(f, data, _flag(args))
    return zetacore.jumping_number_nd(f, args.mu, _flag(args))


def cmd_varchenko(args):
    return zetacore.varchenko_local_zeta(_poly(args), _flag(args))


def cmd_correction(args):
    return zetacore.correction_factor(_poly(args), _flag(args))


def cmd_polytope(args):
    f = _poly(args)
    S = _subset(args.subset, f.nvars) if args.subset else None
    build = {"gamma-inf": newton.gamma_infinity,
             "np": newton.newton_polytope_minus_constant,
             "bif": newton.bifurcation_polyhedron}[args.which]
    return build(f, S)


def cmd_mixed_volume(args):
    try:
        if args.input == "-":
            data = json.load(sys.stdin)
        else:
            with open(args.input) as fh:
                data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read polytopes: {exc}") from exc
    if isinstance(data, dict):
        data = data.get("polytopes", [])
    try:
        bodies = [el.body_from_json(obj) for obj in data]
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"bad polytope JSON: {exc}") from exc
    return el.mixed_volume(bodies)


def cmd_ci_zeta_infinity(args):
    return cizeta.zeta_ci_at_infinity(_polymap(args), _flag(args))


def cmd_ci_zeta_fiber(args):
    F = _polymap(args)
    if args.central:
        return cizeta.zeta_ci_fiber(F, None, "central", args.route, _flag(args))
    if args.value is None:
        raise UsageError("ci-zeta-fiber needs --value C or --central")
    c = _fraction(args.value)
    mode = "central" if c == F.last.constant() else "generic"
    return cizeta.zeta_ci_fiber(F, c, mode, args.route, _flag(args))


def cmd_ci_euler(args):
    return cizeta.euler_ci_generic_fiber(_polymap(args), _flag(args))


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--vars", help="comma-separated variable order (default: sorted names)")
    common.add_argument("--json", action="store_true", help="emit JSON")
    common.add_argument("--assume-nondegenerate", action="store_true",
                        help="acknowledge genericity hypotheses (silences warnings)")
    common.add_argument("--strict", action="store_true",
                        help="fail unless hypotheses are acknowledged explicitly")

    p = argparse.ArgumentParser(prog="monozeta",
                                description="Monodromy zeta functions from Newton polyhedra.")
    sub = p.add_subparsers(dest="command", required=True)

    def single(name, func, help_text):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        sp.add_argument("poly", help="polynomial text, e.g. 'x - x^2*y'")
        sp.set_defaults(func=func)
        return sp

    single("zeta-infinity", cmd_zeta_infinity, "zeta function at infinity")
    sp = single("zeta-fiber", cmd_zeta_fiber, "zeta function along a fiber")
    sp.add_argument("--value", help="fiber value c (rational)")
    sp.add_argument("--central", action="store_true", help="use the constant term as c")
    sp.add_argument("--route", choices=["A", "B"], default="A")
    sp = single("lefschetz", cmd_lefschetz, "Lefschetz numbers of the monodromy at infinity")
    sp.add_argument("--kmax", type=int, default=10)
    single("euler", cmd_euler, "Euler characteristic of the generic fiber")
    sp = single("jump", cmd_jump, "Euler characteristic jump at the central fiber")
    sp.add_argument("--mu", type=int, action="append", default=[],
                    help="Milnor number of an isolated singular point (repeatable)")
    sp.add_argument("--method", choices=["nd", "2d"], default="nd")
    single("varchenko", cmd_varchenko, "local zeta function at the origin")
    single("correction", cmd_correction, "correction factor from outside-orthant facets")
    sp = single("polytope", cmd_polytope, "show a Newton polytope or polyhedron")
    sp.add_argument("--which", choices=["gamma-inf", "np", "bif"], default="gamma-inf")
    sp.add_argument("--subset", help="1-based coordinate subset, e.g. 1,2")

    sp = sub.add_parser("mixed-volume", parents=[common], help="mixed volume of JSON polytopes")
    sp.add_argument("input", nargs="?", default="-", help="JSON file (default: stdin)")
    sp.set_defaults(func=cmd_mixed_volume)

    def multi(name, func, help_text):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        sp.add_argument("-f", action="append", default=[], help="component (repeat, last is f_k)")
        sp.set_defaults(func=func)
        return sp

    multi("ci-zeta-infinity", cmd_ci_zeta_infinity, "principal zeta at infinity of a map")
    sp = multi("ci-zeta-fiber", cmd_ci_zeta_fiber, "principal zeta along a fiber of a map")
    sp.add_argument("--value")
    sp.add_argument("--central", action="store_true")
    sp.add_argument("--route", choices=["A", "B"], default="A")
    multi("ci-euler", cmd_ci_euler, "Euler characteristic of the generic fiber of a map")
    return p


def run(argv, stdout=None, stderr=None):
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", HypothesisWarning)
        try:
            result = args.func(args)
        except (ParseError, UsageError) as exc:
            print(f"error: {exc}", file=stderr)
            return 2
        except MonozetaError as exc:
            print(f"error: {exc}", file=stderr)
            return 1
    seen = []
    for w in caught:
        msg = str(w.message)
        if issubclass(w.category, HypothesisWarning) and msg not in seen:
            seen.append(msg)
            print(f"warning: {msg}", file=stderr)
    print(emit(result, "json" if args.json else "text"), file=stdout)
    return 0


def main(argv=None):
    sys.exit(run(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()
