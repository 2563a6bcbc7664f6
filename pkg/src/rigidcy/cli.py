"""Command-line front end: rigidcy {classify, tuple, op, series, cy, verify}.

Every numeric flag is an exact rational ("1/3") or an exact root of
unity ("e(1/5)", "-i*x^-1"); float literals are rejected.
"""

import argparse
import json
import re
import sys
from fractions import Fraction
from math import lcm

from . import cyfam, diffop, numerology, series, tuples
from .exactalg import PARAMS, CycloNum, Matrix, ParseError, RootOfUnity, as_rat, format_rat
from .numerology import parse_eigenvalue


class RecipeError(ValueError):
    def __init__(self, index, step, exc):
        self.index, self.step = index, step
        super().__init__("step %d (%s): %s: %s" % (index, step, type(exc).__name__, exc))


# ---------------------------------------------------------------------------
# exact scalars

_FLOAT = re.compile(r"\d\.|\.\d|\d[eE][-+]?\d")


def parse_rational(text):
    if _FLOAT.search(text):
        raise ParseError("floating point literal in %r" % text)
    return as_rat(text)


_CTERM = re.compile(r"^(?:(\d+(?:/\d+)?)\*?)?(?:z(\d+)(?:\^(\d+))?)?$")


def parse_cyclo(text):
    """'z3^2+1', '-1/2*z5^3+z5', '2/3' -> CycloNum or Fraction."""
    s = text.replace(" ", "")
    if _FLOAT.search(s) or not s:
        raise ParseError("not an exact scalar: %r" % text)
    terms = re.findall(r"[+-]?[^+-]+", s)
    if "".join(terms) != s:
        raise ParseError("cannot parse scalar %r" % text)
    total = Fraction(0)
    for t in terms:
        sign = -1 if t[0] == "-" else 1
        m = _CTERM.match(t.lstrip("+-"))
        if not m or not (m.group(1) or m.group(2)):
            raise ParseError("cannot parse scalar %r" % text)
        c = sign * Fraction(m.group(1) or 1)
        if m.group(2):
            total = CycloNum.zeta(int(m.group(2)), int(m.group(3) or 1)) * c + total
        else:
            total = total + c
    if isinstance(total, CycloNum):
        return total.to_rational() if total.is_rational() else total.canonical()
    return total


def format_scalar(x):
    if isinstance(x, Fraction) or isinstance(x, int):
        return format_rat(Fraction(x))
    if isinstance(x, CycloNum):
        return str(x)
    return diffop.format_scalar(PARAMS, x)


def parse_root(text, bindings=None):
    """Root of unity text with generic symbols replaced by bound values."""
    r = parse_eigenvalue(text)
    if r.symbols:
        bindings = bindings or {}
        e = r.exponent
        for s, k in r.symbols:
            if s not in bindings:
                raise ParseError("unbound symbol %r in %r" % (s, text))
            e += k * bindings[s].exponent
        r = RootOfUnity(e)
    return r


def parse_point(text):
    return tuples.INF if text.strip() == "inf" else parse_rational(text.strip())


def format_point(p):
    return "inf" if p == tuples.INF else format_rat(Fraction(p))


# ---------------------------------------------------------------------------
# TupleDoc

def tuple_doc(T):
    conductor = 1
    kind = "rational"
    for m in T.matrices:
        for row in m.rows:
            for x in row:
                if isinstance(x, CycloNum):
                    c = x.canonical()
                    if c.n > 1:
                        kind = "cyclotomic"
                        conductor = lcm(conductor, c.n)
                elif not isinstance(x, (int, Fraction)):
                    kind = "parameters"
    field = {"kind": kind}
    if kind == "cyclotomic":
        field["conductor"] = conductor
    return {"rank": T.rank, "points": [format_point(p) for p in T.points], "field": field,
            "matrices": [[[format_scalar(x) for x in row] for row in m.rows]
                         for m in T.matrices]}


def tuple_from_doc(doc):
    if doc["field"]["kind"] == "parameters":
        conv = lambda s: diffop.to_field(PARAMS, s)
    else:
        conv = parse_cyclo
    mats = [Matrix([[conv(s) for s in row] for row in m]) for m in doc["matrices"]]
    T = tuples.MonodromyTuple([parse_point(p) for p in doc["points"]], mats)
    if T.rank != doc["rank"]:
        raise ParseError("rank field disagrees with the matrices")
    return T


# ---------------------------------------------------------------------------
# recipes

def split_recipe(text):
    return [s.strip() for s in re.split(r"[;\n]", text) if s.strip()]


def _scalar_list(text, bindings):
    s = text.strip()
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1]
    return [parse_root(t, bindings) for t in numerology._split_top(s)]


def run_step(T, step, bindings=None):
    """Apply one recipe step: 'MH e(1/5)', 'MC -1', 'MT (-1,1,-1)', 'ext2',
    'sym2', 'primitive'.  A trailing '!' on MH/MC skips the irreducibility
    precheck (for inputs with a trivial summand that the functor kills)."""
    head, _, arg = step.partition(" ")
    check = not head.endswith("!")
    head = head.rstrip("!")
    if head in ("MH", "MC"):
        lam = parse_root(arg, bindings)
        if head == "MH":
            return tuples.middle_hadamard(T, lam, check=check)
        return tuples.middle_convolution(T, lam, check=check)
    if head == "MT":
        scalars = _scalar_list(arg, bindings)
        if len(scalars) != len(T.points):
            raise ParseError("MT needs %d scalars" % len(T.points))
        return tuples.middle_tensor(T, tuples.rank_one_tuple(T.points, scalars))
    if arg:
        raise ParseError("%s takes no argument" % head)
    if head == "ext2":
        return tuples.ext_power(T, 2)
    if head == "sym2":
        return tuples.sym_power(T, 2)
    if head == "primitive":
        return tuples.ext2_primitive(T)
    raise ParseError("unknown step %r" % head)


def run_recipe(seed, recipe, points=None, bindings=None):
    """Execute the steps left to right from the rank-one seed."""
    scalars = _scalar_list(seed, bindings)
    if points is None:
        points = [Fraction(i) for i in range(len(scalars) - 1)] + [tuples.INF]
    T = tuples.rank_one_tuple(points, scalars)
    steps = split_recipe(recipe) if isinstance(recipe, str) else list(recipe)
    for i, step in enumerate(steps, 1):
        try:
            T = run_step(T, step, bindings)
        except Exception as exc:
            raise RecipeError(i, step, exc) from exc
    return T


def parse_bindings(items):
    out = {}
    for item in items or ():
        name, _, val = item.partition("=")
        out[name.strip()] = parse_root(val)
    return out


# ---------------------------------------------------------------------------
# operators

FAMILY_NAMES = {fid.replace("_", "-"): fid for fid in cyfam.FAMILIES}


def family_id(text):
    fid = FAMILY_NAMES.get(text, text)
    if fid not in cyfam.FAMILIES:
        raise ParseError("unknown family %r (choose from %s)" % (text, ", ".join(FAMILY_NAMES)))
    return fid


def operator_from_args(args):
    if getattr(args, "opdoc", None):
        with open(args.opdoc) if args.opdoc != "-" else sys.stdin as fh:
            return diffop.from_json(json.load(fh))
    if getattr(args, "op", None):
        return diffop.parse_op(args.op)
    if getattr(args, "family", None):
        fid = family_id(args.family)
        if args.a is None or args.b is None:
            return cyfam.build_family(fid, symbolic=True)
        a, b = parse_rational(args.a), parse_rational(args.b)
        if getattr(args, "rescaled", False):
            return cyfam.family_rescale(fid, a, b)
        return cyfam.build_family(fid, a, b)
    raise ParseError("give an operator with --op, --opdoc or --family")


def _add_op_source(p):
    p.add_argument("--op", help="operator text, e.g. 'theta^4 - 256*z*(theta+1/2)^4'")
    p.add_argument("--opdoc", help="OpDoc JSON file ('-' for stdin)")
    p.add_argument("--family", help="one of " + ", ".join(FAMILY_NAMES))
    p.add_argument("--a")
    p.add_argument("--b")
    p.add_argument("--rescaled", action="store_true", help="apply the tabulated z-rescaling")


def _scheme_json(L):
    return {str(p): [diffop.format_scalar(L.field, e) for e in es]
            for p, es in diffop.riemann_scheme(L).items()}


# ---------------------------------------------------------------------------
# commands

def cmd_classify(args, out):
    rows = numerology.enumerate_sp4_cases()
    if args.profile:
        rows = [r for r in rows if r["case"] == args.profile]
        if not rows:
            raise ParseError("unknown profile %r" % args.profile)
    bad = [r for r in rows if r["status"] == "mismatch"]
    if args.json:
        doc = {"table1": [{k: (str(v) if k in ("form", "so5_form") else v) for k, v in row.items()}
                          for row in numerology.table1_rows()],
               "table2": [{"case": r["case"], "profile": list(r["profile"]),
                           "subcase": list(r["subcase"]), "verdict": r["verdict"],
                           "printed": r["printed"], "status": r["status"]} for r in rows],
               "mismatches": len(bad)}
        out.write(json.dumps(doc, indent=2, ensure_ascii=False) + "\n")
    else:
        if not args.profile:
            out.write(numerology.format_table1() + "\n\n")
        out.write(numerology.format_table2(rows) + "\n")
    return 1 if bad else 0


def cmd_tuple(args, out):
    bindings = parse_bindings(args.bind)
    if args.doc:
        with open(args.doc) as fh:
            T = tuple_from_doc(json.load(fh))
    elif args.named:
        params = {}
        for item in args.param or ():
            k, _, v = item.partition("=")
            params[k.strip()] = _param_value(v)
        T = cyfam.monodromy_family(args.named, params)
    else:
        points = [parse_point(p) for p in args.points.split(",")] if args.points else None
        T = run_recipe(args.seed, args.recipe or "", points, bindings)
    doc = tuple_doc(T)
    if args.json:
        out.write(json.dumps(doc, indent=2) + "\n")
    else:
        out.write("rank %d, field %s\n" % (doc["rank"], doc["field"]))
        for p, m, J in zip(doc["points"], T.matrices, T.jordan()):
            out.write("T[%s]  Jordan %s\n%s\n" % (p, J, m))
    return 0


def _param_value(text):
    try:
        return parse_cyclo(text)
    except ParseError:
        return parse_root(text).value()


def cmd_op(args, out):
    if args.action == "closed-form":
        fid = family_id(args.family)
        a = parse_rational(args.a) if args.a else None
        b = parse_rational(args.b) if args.b else None
        L = cyfam.closed_form(fid, a, b)
    elif args.action == "q2":
        L = cyfam.q2_operator(parse_rational(args.a), parse_rational(args.b))
    else:
        L = operator_from_args(args)
    if args.action == "scheme":
        doc = _scheme_json(L)
        out.write(json.dumps(doc) + "\n")
        return 0
    if args.json:
        out.write(json.dumps(L.to_json()) + "\n")
    else:
        out.write(diffop.format_op(L) + "\n")
    return 0


def cmd_series(args, out):
    L = operator_from_args(args)
    p = parse_point(args.point)
    if args.exponent is None:
        mu = min(diffop.exponents(L, p))
    else:
        mu = diffop.to_field(L.field, parse_rational(args.exponent))
    f = series.frobenius(L, p, mu, args.terms)
    coeffs = [format_scalar(Fraction(c)) if L.field == diffop.QQ else str(c)
              for c in f.series[0][:args.terms]]
    if args.json:
        out.write(json.dumps({"point": format_point(p), "exponent": str(f.exponent),
                              "coeffs": coeffs}) + "\n")
    else:
        out.write(", ".join(coeffs) + "\n")
    return 0


def cmd_cy(args, out):
    L = operator_from_args(args)
    checks = {"cy1", "cy2", "cy3", "cy4"} if args.check == "all" else set(args.check.split(","))
    r = cyfam.CYReport(terms=args.terms)
    if "cy1" in checks:
        r.cy1 = cyfam.cy1(L)
    if "cy2" in checks:
        r.cy2, r.n2, bad = cyfam.cy2(L, args.nmax, args.terms)
        if bad:
            r.witness["cy2"] = bad
    if "cy3" in checks:
        r.cy3 = cyfam.cy3(L)
    if "cy4" in checks:
        try:
            r.cy4, r.n4, bad = cyfam.cy4(L, args.nmax, args.q_terms)
            if bad:
                r.witness["cy4"] = bad
        except series.NotMUM as exc:
            r.cy4 = False
            r.witness["cy4"] = exc
    out.write(str(r) + "\n")
    ok = all(getattr(r, c) for c in checks)
    return 0 if ok else 1


def cmd_verify(args, out):
    from .acceptance import run_all
    results = run_all(only=args.only)
    failed = 0
    for num, name, ok, detail in results:
        out.write("criterion %2d %-4s %s%s\n" % (num, "PASS" if ok else "FAIL", name,
                                                 ("  [" + detail + "]") if detail else ""))
        failed += not ok
    out.write("%d passed, %d failed\n" % (len(results) - failed, failed))
    return 1 if failed else 0


# ---------------------------------------------------------------------------

def build_parser():
    ap = argparse.ArgumentParser(prog="rigidcy", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("classify", help="reproduce the Sp4 class and profile tables")
    p.add_argument("--profile", help="restrict to one profile, e.g. P3")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("tuple", help="build a monodromy tuple from a recipe")
    p.add_argument("--seed", default="1,1,1", help="rank-one seed, e.g. '1, e(4/5), e(1/5)'")
    p.add_argument("--recipe", help="steps separated by ';', e.g. 'MH e(1/5); MH e(2/3)'")
    p.add_argument("--points", help="comma separated points ending in inf (default 0,1,...,inf)")
    p.add_argument("--bind", action="append", help="bind a symbol, e.g. x=e(1/5)")
    p.add_argument("--named", choices=("hyp", "p1sym", "p2sym", "p2linrig"),
                   help="print an explicit family instead of running a recipe")
    p.add_argument("--param", action="append", help="family parameter, e.g. x=e(1/5) or a=1")
    p.add_argument("--doc", help="read a TupleDoc JSON file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_tuple)

    p = sub.add_parser("op", help="build, parse or inspect operators")
    p.add_argument("action", choices=("build", "parse", "scheme", "closed-form", "q2"))
    _add_op_source(p)
    p.add_argument("--json", action="store_true", help="print an OpDoc")
    p.set_defaults(func=cmd_op)

    p = sub.add_parser("series", help="Frobenius series at a point")
    _add_op_source(p)
    p.add_argument("--point", default="0")
    p.add_argument("--exponent", help="local exponent (default: the smallest)")
    p.add_argument("--terms", type=int, default=10)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_series)

    p = sub.add_parser("cy", help="Calabi-Yau checks")
    _add_op_source(p)
    p.add_argument("--check", default="all", help="all or a comma list of cy1,cy2,cy3,cy4")
    p.add_argument("--terms", type=int, default=25)
    p.add_argument("--q-terms", type=int, default=15)
    p.add_argument("--nmax", type=int, default=10 ** 4)
    p.set_defaults(func=cmd_cy)

    p = sub.add_parser("verify", help="run the acceptance checks")
    p.add_argument("--only", type=int, action="append", help="criterion number (repeatable)")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None, out=None):
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except (ValueError, ArithmeticError) as exc:
        sys.stderr.write("rigidcy %s: %s\n" % (args.verb, exc))
        return 2


if __name__ == "__main__":
    sys.exit(main())
