"""Command-line front end: ``betatiling <command> [flags]``.

Every command writes JSON (CSV for ``rauzy``) to stdout or ``--out``.  Exit
codes: 0 success, 1 inconclusive result, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Sequence

from . import geometry, numeration, substitution, tiling
from .algebra import AlgNum, PisotField, verify_pisot
from .errors import BetaTilingError
from .polynomials import IntPolynomial, format_polynomial, parse_polynomial

SCHEMA_VERSION = "1"

EXIT_OK = 0
EXIT_INCONCLUSIVE = 1
EXIT_INPUT = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# -- rendering -------------------------------------------------------------------------------------

def alg_json(x: AlgNum) -> dict:
    return {
        "exact": x.render(),
        "symbolic": format_polynomial(list(x.coords), "beta"),
        "approx": float(x),
    }


def frac_json(q) -> dict:
    q = Fraction(q)
    return {"exact": str(q), "approx": float(q)}


def field_json(f: PisotField) -> dict:
    lo, hi = f.beta_enclosure
    return {
        "polynomial": str(f.minpoly),
        "coefficients": list(f.minpoly.coefficients),
        "degree": f.degree,
        "beta_enclosure": [frac_json(lo), frac_json(hi)],
        "theta_max_bound": frac_json(f.theta_max),
    }


def torus_json(p: geometry.TorusPoint) -> dict:
    return {"coords": [alg_json(c) for c in p.coords], "radius": frac_json(p.radius)}


# -- inputs ----------------------------------------------------------------------------------------

def polynomial_from(args) -> IntPolynomial:
    if args.coeffs and args.poly:
        raise UsageError("give either --coeffs or --poly, not both")
    if args.coeffs:
        try:
            coeffs = tuple(int(c) for c in args.coeffs.split(","))
        except ValueError:
            raise UsageError(f"--coeffs must be comma-separated integers, got {args.coeffs!r}") from None
        return IntPolynomial(coeffs)
    if args.poly:
        return parse_polynomial(args.poly)
    raise UsageError("a polynomial is required (--coeffs or --poly)")


def value_from(f: PisotField, text: str | None, name="--value") -> AlgNum:
    if text is None:
        raise UsageError(f"{name} is required")
    try:
        if "," in text:
            return f.parse(text)
        return f.rational(Fraction(text))
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"cannot read {name} {text!r}") from None


class Pipeline:
    """Lazily built objects for one polynomial."""

    def __init__(self, poly: IntPolynomial):
        self.field = verify_pisot(poly)
        self._k = self._rule = self._ab = self._split = None

    @property
    def kneading(self):
        if self._k is None:
            self._k = numeration.kneading_of(self.field)
        return self._k

    @property
    def rule(self):
        if self._rule is None:
            self._rule = substitution.build_substitution(self.kneading, self.field)
        return self._rule

    @property
    def perron(self):
        if self._ab is None:
            self._ab = substitution.abelianize_and_perron(self.rule, self.field)
        return self._ab

    @property
    def splitting(self):
        if self._split is None:
            A, per, _ = self.perron
            self._split = geometry.compute_splitting(A, self.field, per)
        return self._split

    def tiling(self, label: str):
        for T in tiling.canonical_periodic_tilings(self.rule):
            if T.label == label:
                return T
        raise UsageError(f"unknown tiling {label!r}")


# -- commands -------------------------------------------------------------------------------------

def cmd_analyze(args):
    pl = Pipeline(polynomial_from(args))
    f, k = pl.field, pl.kneading
    report = {"field": field_json(f),
              "kneading": {"m": k.m, "p": k.p, "digits": k.render(), "simple": k.simple}}
    if f.degree == 1:
        report["substitution"] = None
        report["note"] = "integer beta: the tiling space is a circle"
        return report, EXIT_OK
    rule = pl.rule
    A, per, primitive = pl.perron
    S = pl.splitting
    fh = geometry.fundamental_homoclinic(S)
    report.update({
        "prototiles": [[alg_json(t.min), alg_json(t.max)] for t in rule.prototiles],
        "substitution": {"words": rule.render(), "letters": rule.alphabet_size},
        "matrix": A.tolist(),
        "primitive": primitive,
        "perron": {
            "char_poly": str(per.char_poly),
            "q_factor": format_polynomial(per.q_factor),
            "lengths": [alg_json(x) for x in per.l],
            "omega": [alg_json(x) for x in per.omega],
        },
        "language_properties": {
            key: val["holds"]
            for key, val in substitution.verify_language_properties(rule, args.depth or 6).items()
            if key.startswith("property")
        },
        "splitting": {
            "d": S.d,
            "L": [list(r) for r in S.L],
            "fundamental_homoclinic_gamma": fh["e_gamma"],
            "fundamental_determinant": fh["determinant"],
        },
        "canonical_tilings": [T.label for T in tiling.canonical_periodic_tilings(rule)],
    })
    return report, EXIT_OK


def cmd_expand(args):
    pl = Pipeline(polynomial_from(args))
    x = value_from(pl.field, args.value)
    e = numeration.greedy_expansion(pl.field, x, args.budget or numeration.DEFAULT_CAP)
    return {"value": alg_json(x), "expansion": e.render(), "finite": e.finite,
            "integer_digits": list(e.integer_digits), "preperiod": list(e.preperiod),
            "period": list(e.period)}, EXIT_OK


def cmd_fin(args):
    pl = Pipeline(polynomial_from(args))
    x = value_from(pl.field, args.value)
    r = numeration.fin_membership(pl.field, x, args.budget or numeration.DEFAULT_CAP)
    return {"value": alg_json(x), "member": isinstance(r, numeration.Finite),
            "expansion": r.expansion.render()}, EXIT_OK


def cmd_property_w(args):
    pl = Pipeline(polynomial_from(args))
    f = pl.field
    z = value_from(f, args.value)
    pieces = args.grid or 10
    budget = args.budget or 100_000
    rows = []
    found_all = True
    for j in range(pieces):
        lo, hi = Fraction(j, pieces), Fraction(j + 1, pieces)
        r = numeration.property_w_witness(f, z, lo, hi, budget, pl.kneading)
        if isinstance(r, numeration.Witness):
            rows.append({"interval": [str(lo), str(hi)], "witness": alg_json(r.t),
                         "digits": numeration.format_digits(r.digits), "candidates": r.candidates})
        else:
            found_all = False
            rows.append({"interval": [str(lo), str(hi)], "witness": None, "candidates": r.candidates})
    return {"z": alg_json(z), "budget": budget, "subintervals": rows,
            "verdict": "Found" if found_all else "Inconclusive"}, (EXIT_OK if found_all else EXIT_INCONCLUSIVE)


def cmd_spectrum(args):
    pl = Pipeline(polynomial_from(args))
    rep = tiling.spectrum_certificate(pl.rule, args.grid or 64, 60 if args.budget is None else args.budget)
    return rep, (EXIT_OK if rep["verdict"] == "Certified" else EXIT_INCONCLUSIVE)


def cmd_asymptotic(args):
    pl = Pipeline(polynomial_from(args))
    names = (args.pair or "T_1^0,T_1").split(",")
    if len(names) != 2:
        raise UsageError("--pair takes two tiling labels separated by a comma")
    T, T2 = (pl.tiling(n.strip()) for n in names)
    lmin = min(float(x) for x in pl.rule.lengths())
    horizon = value_from(pl.field, args.horizon) if args.horizon else pl.field.rational(
        Fraction(100)) * _min_length(pl.rule)
    r = tiling.asymptotic_test(T, T2, horizon)
    out = {"pair": names, "horizon": alg_json(horizon), "min_tile_length": lmin}
    if isinstance(r, tiling.Asymptotic):
        out.update({"verdict": "Asymptotic", "t0": alg_json(r.t0), "agree_everywhere": r.agree_everywhere})
        return out, EXIT_OK
    out.update({"verdict": "Diverges", "witness": alg_json(r.witness)})
    return out, EXIT_INCONCLUSIVE


def _min_length(rule):
    from .algebra import sign_of

    best = rule.lengths()[0]
    for v in rule.lengths()[1:]:
        if sign_of(v - best) < 0:
            best = v
    return best


def cmd_code(args):
    pl = Pipeline(polynomial_from(args))
    tol = Fraction(args.tolerance) if args.tolerance else Fraction(1, 10**8)
    rep = geometry.coding_consistency_and_injectivity(
        pl.rule, pl.splitting, samples=args.points or 50, eps=tol, levels=args.levels or 4,
        seed=args.seed, collisions=args.collisions or 0)
    T = pl.tiling(tiling.canonical_periodic_tilings(pl.rule)[0].label)
    rep["example"] = {"tiling": T.label,
                      "levels": [torus_json(p) for p in geometry.solenoid_map(T, pl.splitting, args.levels or 4).levels]}
    rep["tolerance"] = str(tol)
    ok = rep["agree"] == rep["samples"] and not rep.get("collision", {}).get("collisions")
    return rep, (EXIT_OK if ok else EXIT_INCONCLUSIVE)


def cmd_rauzy(args):
    pl = Pipeline(polynomial_from(args))
    if pl.field.degree < 2:
        raise UsageError("the Rauzy cloud needs degree >= 2")
    T = pl.tiling(args.pair or tiling.canonical_periodic_tilings(pl.rule)[0].label)
    n = 1000 if args.points is None else args.points
    cloud = geometry.rauzy_cloud(T, pl.splitting, n)
    lines = [",".join(f"{c:.12g}" for c in row) for row in cloud["points"]]
    meta = {"tiling": T.label, "points": n, "dimension": pl.splitting.d - 1, "bound": cloud["bound"]}
    return ("\n".join(lines) + ("\n" if lines else ""), meta), EXIT_OK


COMMANDS = {
    "analyze": (cmd_analyze, "field, kneading sequence, substitution and splitting summary"),
    "expand": (cmd_expand, "greedy beta-expansion of --value"),
    "fin": (cmd_fin, "whether --value has a finite expansion"),
    "property-w": (cmd_property_w, "witnesses t' with z + t' finite in --grid subintervals of (0, 1)"),
    "spectrum": (cmd_spectrum, "coincidence certificate over all canonical tiling pairs"),
    "asymptotic": (cmd_asymptotic, "compare two canonical tilings on [0, horizon]"),
    "code": (cmd_code, "factor map against arithmetical coding, optional collision count"),
    "rauzy": (cmd_rauzy, "stable projections of strand vertices as CSV"),
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    g = common.add_argument_group("input")
    g.add_argument("--coeffs", help="polynomial coefficients, constant term first, e.g. 1,-3,1")
    g.add_argument("--poly", help="polynomial as text, e.g. 'x^2-3x+1'")
    g.add_argument("--value", help="rational 'p/q' or field element 'a0,a1,...' in the power basis")
    g.add_argument("--grid", type=int, help="grid points (spectrum, default 64) or subintervals (property-w, default 10)")
    g.add_argument("--budget", type=int, help="iteration or candidate budget (spectrum default 60, property-w 100000)")
    g.add_argument("--levels", type=int, help="solenoid levels (default 4)")
    g.add_argument("--depth", type=int, help="language-property depth for analyze (default 6)")
    g.add_argument("--points", type=int, help="samples for code (default 50), points for rauzy (default 1000)")
    g.add_argument("--collisions", type=int, help="digit windows for the collision experiment (default 0)")
    g.add_argument("--pair", help="tiling labels, e.g. 'T_1^0,T_1' (asymptotic) or one label (rauzy)")
    g.add_argument("--horizon", help="asymptotic horizon (default 100 times the shortest tile)")
    g.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    g.add_argument("--tolerance", help="agreement tolerance for code (default 1/100000000)")
    g.add_argument("--out", help="write the result to this file instead of stdout")
    parser = _Parser(prog="betatiling", description="Exact beta-substitutions for Pisot numbers.")
    sub = parser.add_subparsers(dest="command", metavar="command", parser_class=_Parser)
    for name, (_, text) in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=text, description=text)
    return parser


_VALUE_FLAGS = ("--coeffs", "--poly", "--value", "--horizon", "--tolerance")


def _glue_negative_values(argv: Sequence[str]) -> list[str]:
    """Let ``--coeffs -1,-1,-1,1`` through: argparse would read the value as a flag."""
    out: list[str] = []
    it = iter(argv)
    for tok in it:
        if tok in _VALUE_FLAGS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def execute(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    argv = _glue_negative_values(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(argv)
        if not args.command:
            raise UsageError("a command is required: " + ", ".join(COMMANDS))
        handler = COMMANDS[args.command][0]
        result, code = handler(args)
    except UsageError as exc:
        print(f"betatiling: error: {exc}", file=stderr)
        return EXIT_INPUT
    except BetaTilingError as exc:
        print(f"betatiling: error: {type(exc).__name__}: {exc}", file=stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"betatiling: error: {exc}", file=stderr)
        return EXIT_INPUT
    if isinstance(result, tuple):  # CSV with metadata
        text, meta = result
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(text)
            print(json.dumps({"schema_version": SCHEMA_VERSION, "command": args.command, **meta}, sort_keys=True), file=stdout)
        else:
            stdout.write(text)
        return code
    payload = {"schema_version": SCHEMA_VERSION, "command": args.command, "seed": args.seed, **result}
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return code


def main() -> None:
    sys.exit(execute())
