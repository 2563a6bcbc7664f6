"""The four rank-4 operator families, their Calabi-Yau checks, rescalings,
AESZ labels, and the explicit Sp4 monodromy families."""

import json
from collections import namedtuple
from fractions import Fraction
from math import ceil, gcd, lcm

from sympy import QQ, Matrix as SMatrix
from sympy.matrices.normalforms import hermite_normal_form

from .diffop import (DiffOp, coeff_list, exponents, ext_pow_op, from_d_form, make_La, middle_hadamard_op,
                     normalize, parse_op, rescale_op, sym_pow_op, to_d_form, to_field,
                     twist_oneminus, twist_power, dual_op, z_field, NonFuchsianPoint)
from .exactalg import CycloNum, Matrix, PARAMS, as_rat, jordan_data, param_gens, prime_factors
from .series import NotMUM, frobenius, frobenius_log_basis, ParameterExcluded
from .tuples import (MonodromyTuple, _words, ext2_primitive, ext_power, form_type,
                     invariant_bilinear_forms, invariant_line_in_ext2, scalar_value)


class PipelineMismatch(AssertionError):
    pass


class IrrationalScale(ValueError):
    pass


class DegenerateParams(ValueError):
    pass


FAMILIES = ("P1_4_10_4", "P1_4_8_4", "P2_4_6_6", "P2_4_6_8")

CLOSED_FORMS = {
    "P1_4_10_4": "theta^4 - z*(theta+a)*(theta+1-a)*(theta+b)*(theta+1-b)",
    "P1_4_8_4": "64*theta^4 + z*(-128*theta^4 - 256*theta^3 + theta^2*(128*(a^2+b^2) - 304))"
                " + z*(theta*(128*(a^2+b^2) - 176) + 48*(a^2+b^2) + 256*a^2*b^2 - 39)"
                " + 64*z^2*(a+1+theta-b)*(a+1+theta+b)*(a-1-theta-b)*(-1+a-theta+b)",
    "P2_4_6_6": "4*theta^4 - 2*z*(2*theta+1)^2*(theta^2+theta+2*a*b-a+1-b)"
                " - z^2*(2*theta+3)*(2*theta+1)*(b-1-a-theta)*(b+1-a+theta)",
    "P2_4_6_8": "theta^4 - z*(theta+b)*(theta+1-b)*(2*theta^2+2*theta+a^2-a+1)"
                " + z^2*(theta+b)*(theta+1-b)*(theta+b+1)*(theta+2-b)",
}

def printed_scheme(fid, a, b):
    """The printed Riemann scheme of a family at rational (a, b)."""
    a, b = as_rat(a), as_rat(b)
    h = Fraction(1, 2)
    table = {
        "P1_4_10_4": {0: [0] * 4, 1: [0, 1, 1, 2], "inf": [a, 1 - a, b, 1 - b]},
        "P1_4_8_4": {0: [0] * 4, 1: [-h, 0, 1, 3 * h],
                     "inf": [1 - a - b, 1 + a - b, 1 - a + b, 1 + a + b]},
        "P2_4_6_6": {0: [0] * 4, 1: [0, 1, a + b - h, 3 * h - a - b],
                     "inf": [h, 3 * h, 1 + a - b, 1 - a + b]},
        "P2_4_6_8": {0: [0] * 4, 1: [0, 1, a, 1 - a], "inf": [b, 1 - b, 1 + b, 2 - b]},
    }[fid]
    return {p: sorted(Fraction(e) for e in es) for p, es in table.items()}


def q2_printed_scheme(a, b):
    c, d = 2 * as_rat(a) + Fraction(1, 2), 2 * as_rat(b) + Fraction(1, 2)
    return {0: [Fraction(0)] * 5,
            1: sorted(Fraction(x) for x in (0, 1, Fraction(3, 2), 2, 3)),
            "inf": sorted([Fraction(1, 2), c, d, 1 - c, 1 - d])}


def check_params(fid, a, b):
    if fid not in FAMILIES:
        raise ValueError("unknown family %r" % fid)
    a, b = as_rat(a), as_rat(b)
    if fid == "P1_4_8_4":
        if any(x % 1 in (Fraction(1, 4), Fraction(3, 4)) for x in (a, b)):
            raise ParameterExcluded("a, b must avoid 1/4 + Z and 3/4 + Z")
    elif a.denominator == 1 or b.denominator == 1:
        raise ParameterExcluded("a, b must not be integers")
    return a, b


def closed_form(fid, a=None, b=None):
    """The printed operator; symbolic over Q(a, b) when a, b are omitted."""
    L = parse_op(CLOSED_FORMS[fid], PARAMS)
    if a is None:
        return normalize(L)
    a, b = check_params(fid, a, b)
    return normalize(L.specialize(a, b))


def _pipeline(fid, a, b, K):
    mh = middle_hadamard_op
    q = Fraction(1, 4)
    h = Fraction(1, 2)
    if fid == "P1_4_10_4":
        return mh(mh(mh(make_La(a, K), 1 - a), b), 1 - b)
    if fid == "P1_4_8_4":
        inner = twist_power(mh(make_La(a + q, K), q - a), -h)
        inner = mh(mh(inner, b + 3 * q), 3 * q - b)
        outer = twist_power(ext_pow_op(inner, 2, "d"), 3 * h)
        # the last step fails the positivity precondition, yet strips to the right degree
        return mh(outer, 3 * h, positivity=False)
    if fid == "P2_4_6_6":
        inner = twist_oneminus(mh(make_La(a, K), b), -(1 - a - b) / 2)
        return mh(sym_pow_op(inner, 2), h)
    if fid == "P2_4_6_8":
        inner = twist_oneminus(mh(make_La(a, K), a), -(1 - a))
        return mh(mh(inner, b), 1 - b)
    raise ValueError("unknown family %r" % fid)


def pipeline(fid, a=None, b=None):
    """The family built from L_a by Hadamard products, twists and Sym^2 / Lambda^2."""
    if a is None:
        A, B = param_gens()
        return normalize(_pipeline(fid, A, B, PARAMS))
    a, b = check_params(fid, a, b)
    return normalize(_pipeline(fid, QQ(a.numerator, a.denominator),
                               QQ(b.numerator, b.denominator), QQ))


def build_family(fid, a=None, b=None, symbolic=False):
    """Closed form, after checking it against the construction pipeline."""
    if symbolic:
        a = b = None
    cf = closed_form(fid, a, b)
    built = pipeline(fid, a, b)
    if built != cf:
        raise PipelineMismatch("%s: pipeline gives %s, closed form is %s" % (fid, built, cf))
    return cf


def q2_operator(a, b):
    """Lambda^2 of P1_4_8_4 twisted by z^-1 (1-z)^(-3/2)."""
    P = build_family("P1_4_8_4", a, b)
    return normalize(twist_power(twist_oneminus(ext_pow_op(P, 2, "d"), Fraction(3, 2)), 1))


# radical scalars and the beta rescaling

class RadicalScalar:
    """rational * prod p^(e_p) with 0 <= e_p < 1."""

    __slots__ = ("rational", "radicals")

    def __init__(self, rational, radicals=None):
        rat = Fraction(rational)
        rads = {}
        for p, e in (radicals or {}).items():
            e = Fraction(e)
            whole = e.numerator // e.denominator
            rat *= Fraction(p) ** whole
            e -= whole
            if e:
                rads[p] = e
        self.rational = rat
        self.radicals = dict(sorted(rads.items()))

    def __mul__(self, other):
        if not isinstance(other, RadicalScalar):
            other = RadicalScalar(other)
        rads = dict(self.radicals)
        for p, e in other.radicals.items():
            rads[p] = rads.get(p, 0) + e
        return RadicalScalar(self.rational * other.rational, rads)

    __rmul__ = __mul__

    def __pow__(self, k):
        return RadicalScalar(self.rational ** k, {p: e * k for p, e in self.radicals.items()})

    def __eq__(self, other):
        if not isinstance(other, RadicalScalar):
            other = RadicalScalar(other)
        return self.rational == other.rational and self.radicals == other.radicals

    def __hash__(self):
        return hash((self.rational, tuple(self.radicals.items())))

    @property
    def is_rational(self):
        return not self.radicals

    def to_rational(self):
        if self.radicals:
            raise IrrationalScale("%s is irrational" % self)
        return self.rational

    def __str__(self):
        parts = [str(self.rational)]
        parts += ["%d^(%s)" % (p, e) for p, e in self.radicals.items()]
        return "*".join(parts)

    __repr__ = __str__


def beta_scale(a):
    """beta(r/s) = s * prod over primes p | s of p^(1/(p-1))."""
    a = as_rat(a)
    if not a:
        raise ValueError("beta is defined on nonzero rationals")
    s = a.denominator
    return RadicalScalar(s, {p: Fraction(1, p - 1) for p in prime_factors(s)})


def rescale_factor(fid, a, b):
    a, b = as_rat(a), as_rat(b)
    if fid == "P1_4_10_4" or fid == "P2_4_6_8":
        return beta_scale(a) ** 2 * beta_scale(b) ** 2
    if fid == "P1_4_8_4":
        c, d = 2 * a + Fraction(1, 2), 2 * b + Fraction(1, 2)
        return 4 * beta_scale(c) ** 2 * beta_scale(d) ** 2
    if fid == "P2_4_6_6":
        return 4 * beta_scale(a) * beta_scale(b)
    raise ValueError("unknown family %r" % fid)


def family_rescale(fid, a, b):
    """The family operator after z -> lambda z with the tabulated beta factor."""
    lam = rescale_factor(fid, a, b).to_rational()
    return normalize(rescale_op(build_family(fid, a, b), lam))


# AESZ tables

_H, _T, _Q, _S = Fraction(1, 2), Fraction(1, 3), Fraction(1, 4), Fraction(1, 6)
_P1_PAIRS = [(_H, _H), (_H, _T), (_H, _Q), (_H, _S), (_T, _T), (_T, _Q), (_T, _S), (_Q, _Q),
             (_Q, _S), (_S, _S), (Fraction(1, 5), Fraction(2, 5)), (Fraction(1, 8), Fraction(3, 8)),
             (Fraction(1, 10), Fraction(3, 10)), (Fraction(1, 12), Fraction(5, 12))]
_P1_NUMBERS = ["3", "5", "6", "14", "4", "11", "8", "10", "12", "13", "1", "7", "2", "9"]

SYM3_NOTE = "not listed: the operator is Sym^3 of a second order operator"

AESZ_TABLES = {
    "P1_4_10_4": list(zip(_P1_PAIRS, _P1_NUMBERS)),
    # tabulated in c = 2a + 1/2, d = 2b + 1/2
    "P1_4_8_4": [(((c - _H) / 2, (d - _H) / 2), "~" + n) for (c, d), n in zip(_P1_PAIRS, _P1_NUMBERS)],
    "P2_4_6_6": [((_H, _H), "3*"), ((_H, _T), None), ((_H, _Q), "6*"), ((_H, _S), "14*"),
                 ((_T, _T), "4*"), ((_T, 2 * _T), "4**"), ((_T, _S), "8*"), ((_T, 5 * _S), "8**"),
                 ((_Q, _Q), "10*"), ((_Q, 3 * _Q), "10**"), ((_S, _S), "13*"), ((_S, 5 * _S), "13**"),
                 ((Fraction(1, 8), Fraction(3, 8)), "7*"), ((Fraction(1, 8), Fraction(5, 8)), "7**"),
                 ((Fraction(1, 12), Fraction(5, 12)), "9*"), ((Fraction(1, 12), Fraction(7, 12)), "9**")],
    "P2_4_6_8": [((a, b), n) for a, row in zip((_H, _T, _Q, _S),
                                              (("111", "110", "30", "112"), ("141", "142", "196", "143"),
                                               ("189", "194", "197", "199"), ("190", "195", "198", "61")))
                 for b, n in zip((_H, _T, _Q, _S), row)],
}

AeszEntry = namedtuple("AeszEntry", "label note")


def table_rows(fid):
    """[(a, b, label)] for a family's AESZ table, labels None for omitted rows."""
    return [(a, b, n) for (a, b), n in AESZ_TABLES[fid]]


def _same_operator_params(fid, a, b):
    """Parameter pairs giving literally the same closed-form operator."""
    cands = []
    for x in (a, 1 - a, -a, a + 1, a - 1):
        for y in (b, 1 - b, -b, b + 1, b - 1):
            cands += [(x, y), (y, x)]
    L = closed_form(fid, a, b)
    out = [(a, b)]
    for x, y in cands:
        if (x, y) in out:
            continue
        try:
            if closed_form(fid, x, y) == L:
                out.append((x, y))
        except ParameterExcluded:
            pass
    return out


def aesz_lookup(fid, a, b):
    """AeszEntry for a tabulated pair (matched up to parameter symmetries), else None."""
    a, b = check_params(fid, a, b)
    table = dict(AESZ_TABLES[fid])
    for key in _same_operator_params(fid, a, b):
        if key in table:
            n = table[key]
            return AeszEntry(n, SYM3_NOTE if n is None else None)
    return None


# Calabi-Yau conditions

class CYReport:
    __slots__ = ("cy1", "cy2", "cy3", "cy4", "n2", "n4", "terms", "witness")

    def __init__(self, cy1=None, cy2=None, cy3=None, cy4=None, n2=None, n4=None, terms=None,
                 witness=None):
        self.cy1, self.cy2, self.cy3, self.cy4 = cy1, cy2, cy3, cy4
        self.n2, self.n4, self.terms, self.witness = n2, n4, terms, witness or {}

    def to_json(self):
        return {"cy1": self.cy1, "cy2": self.cy2, "cy3": self.cy3, "cy4": self.cy4,
                "N_cy2": self.n2, "N_cy4": self.n4, "terms": self.terms,
                "witness": {k: str(v) for k, v in self.witness.items()}}

    def __str__(self):
        return json.dumps(self.to_json(), indent=2)


def cy1(L):
    try:
        return all(not e for e in exponents(L, 0))
    except NonFuchsianPoint:
        return False


def _valuation(n, p):
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def minimal_integrality_base(coeffs, start=1):
    """Smallest N with N^m c_m integral for all listed m >= start (c_m at index m)."""
    need = {}
    for m in range(start, len(coeffs)):
        den = Fraction(coeffs[m]).denominator
        for p in prime_factors(den):
            need[p] = max(need.get(p, 0), ceil(_valuation(den, p) / m))
    N = 1
    for p, e in need.items():
        N *= p ** e
    return N


def _first_bad(coeffs, N, start=1):
    for m in range(start, len(coeffs)):
        if (Fraction(N) ** m * Fraction(coeffs[m])).denominator != 1:
            return m, coeffs[m]
    return None


def cy2(L, Nmax=10 ** 4, M=25):
    """(ok, N, witness) for N-integrality of the holomorphic solution to M terms."""
    A = frobenius(L, 0, 0, M + 1).series[0]
    N = minimal_integrality_base(A)
    if N > Nmax:
        return False, N, _first_bad(A, Nmax)
    return True, N, None


def _conjugate_shift(a, c, F, zf):
    """Coefficients of sum a_i (d + c)^i as an operator sum b_j d^j."""
    n = len(a) - 1
    out = [F.zero] * (n + 1)
    power = [F.one]
    for i in range(n + 1):
        for j, p in enumerate(power):
            out[j] += a[i] * p
        # (d + c) * sum p_j d^j = sum (p_j' + c p_j) d^j + p_j d^(j+1)
        nxt = [F.zero] * (len(power) + 1)
        for j, p in enumerate(power):
            nxt[j] += p.diff(zf) + c * p
            nxt[j + 1] += p
        power = nxt
    return out


def cy3(L):
    """L alpha = alpha L* with alpha' = -(2/n) a_(n-1) alpha, checked as alpha^-1 L alpha = L*."""
    a = to_d_form(L)
    n = len(a) - 1
    F, zf = z_field(L.field)
    c = -Fraction(2, n) * a[n - 1] if L.field == QQ else a[n - 1] * to_field(L.field, Fraction(-2, n))
    conj = _conjugate_shift(a, c, F, zf)
    return from_d_form(conj, L.field) == dual_op(L)


def cy3_any_scale(L):
    """cy3 for L rescaled by z -> lambda z with lambda transcendental.

    The identity over Q(lambda) covers every nonzero lambda, including
    irrational ones that rescale_op cannot represent over Q.
    """
    A, _ = param_gens()
    LK = DiffOp([[to_field(PARAMS, c) for c in coeff_list(p)] for p in L.coeffs], PARAMS)
    return cy3(normalize(rescale_op(LK, A)))


def exp_series(s, M):
    """exp of a power series with zero constant term, M terms."""
    if s and s[0]:
        raise ValueError("constant term must vanish")
    e = [Fraction(1)] + [Fraction(0)] * (M - 1)
    for m in range(1, M):
        e[m] = sum(k * s[k] * e[m - k] for k in range(1, min(m, len(s) - 1) + 1)) / m
    return e


def div_series(num, den, M):
    out = []
    for m in range(M):
        v = num[m] - sum(out[k] * den[m - k] for k in range(m))
        out.append(v / den[0])
    return out


def q_coordinate(L, M):
    """Coefficients q_1, ..., q_M of q = z exp(y1~/y0), as a list indexed by the z-power."""
    y0, y1 = frobenius_log_basis(L, M)
    s0 = [Fraction(c) for c in y0.series[0]]
    s1 = [Fraction(c) for c in y1.series[0]]
    e = exp_series(div_series(s1, s0, M), M)
    return [Fraction(0)] + e[:M]


def cy4(L, Nmax=10 ** 4, M=15):
    """(ok, N, witness) for N-integrality of the q-coordinate to M terms."""
    q = q_coordinate(L, M)
    # q = z * (1 + q_2 z + ...): N-integrality of q/z coefficient-wise
    shifted = q[1:]
    N = minimal_integrality_base(shifted)
    if N > Nmax:
        return False, N, _first_bad(shifted, Nmax)
    return True, N, None


def cy_report(L, M=25, Nmax=10 ** 4, q_terms=15):
    r = CYReport(terms=M)
    r.cy1 = cy1(L)
    r.cy2, r.n2, bad = cy2(L, Nmax, M)
    if bad:
        r.witness["cy2"] = bad
    r.cy3 = cy3(L)
    try:
        r.cy4, r.n4, bad = cy4(L, Nmax, q_terms)
        if bad:
            r.witness["cy4"] = bad
    except NotMUM as exc:
        r.cy4 = False
        r.witness["cy4"] = exc
    return r


# explicit monodromy families

def _value(x):
    if isinstance(x, (int, Fraction, str)):
        return as_rat(x)
    return scalar_value(x)


def _ab(params):
    if "a" in params:
        return _value(params["a"]), _value(params["b"])
    x, y = _value(params["x"]), _value(params["y"])
    return x + 1 / x, y + 1 / y


def _close(points, mats):
    prod = mats[0]
    for m in mats[1:]:
        prod = prod * m
    return MonodromyTuple(points, list(mats) + [prod.inverse()])


def _is_zero(x):
    return x == 0


def monodromy_family(which, params):
    """Printed (T_0, T_1) of an explicit family, completed by T_inf = (T_0 T_1)^-1.

    params: {"alpha", "beta"} for hyp; {"x", "y"} or {"a", "b"} otherwise.
    """
    pts = (0, 1, "inf")
    if which == "hyp":
        al, be = _value(params["alpha"]), _value(params["beta"])
        if al == 1 or be == 1:
            raise DegenerateParams("alpha, beta must differ from 1")
        A = al + 1 / al - 2
        B = be + 1 / be - 2
        T0 = Matrix([[1, 1, 0, 0], [0, 1, -1, 0], [0, 0, 1, 1], [0, 0, 0, 1]])
        T1 = Matrix([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [A * B, A * B, A + B, 1]])
        return _close(pts, [T0, T1])
    a, b = _ab(params)
    if which == "p1sym":
        if _is_zero(a * b):
            raise DegenerateParams("ab must be nonzero")
        T0 = Matrix([[1, a * b, 0, (a + b) ** 2], [0, 1, 1, 0], [0, 0, 1, -a * b], [0, 0, 0, 1]])
        T1 = Matrix([[-1, -2 * a * b, 0, 0], [0, 1, 0, 0], [1, a * b, 1, 0], [0, -1, 0, -1]])
        return _close(pts, [T0, T1])
    if which == "p2sym":
        if a == b:
            raise DegenerateParams("a and b must differ")
        T0 = Matrix([[1, b - a, a, -2], [0, 1, -2, b], [0, 0, 1, a - b], [0, 0, 0, 1]])
        T1 = Matrix([[1, 0, 0, 0], [0, 1, 0, 0], [0, 2, 1, -a], [2, a + b, a, 1 - a * a]])
        return _close(pts, [T0, T1])
    if which == "p2linrig":
        if a == 2 or b == 2:
            raise DegenerateParams("x, y must differ from 1")
        T0 = Matrix([[1, -1, 0, a - 2], [0, 1, a - 2, 0], [0, 0, 1, 2 - b], [0, 0, 0, 1]])
        T1 = Matrix([[1, 0, 0, 0], [0, 1, 0, 0], [0, 1, 1, b - 2], [1, 0, 1, b - 1]])
        return _close(pts, [T0, T1])
    raise ValueError("unknown family %r" % which)


def _is_int(x):
    if isinstance(x, CycloNum):
        return x.is_rational_integer()
    return Fraction(x).denominator == 1


def sp4z_predicate(which, params):
    """The stated integrality criterion for conjugation into Sp4(Z)."""
    a, b = _ab(params)
    if which == "p1sym":
        return _is_int(a * b) and _is_int(a * a + b * b)
    if which == "p2sym":
        return _is_int(a * a) and _is_int(b * b) and _is_int(a * b)
    if which == "p2linrig":
        return _is_int(a) and _is_int(b)
    raise ValueError("no Sp4(Z) criterion for %r" % which)


def word_traces(T, length=4):
    return [m.trace() for _, m in _words(T.matrices[:-1], length)]


def _unipotent_type(m):
    """Block sizes of a unipotent matrix (descending), None if not unipotent."""
    n = m.nrows
    N = m - Matrix.identity(n)
    ranks = [n]
    P = Matrix.identity(n)
    for _ in range(n):
        P = P * N
        ranks.append(P.rank())
    if ranks[-1]:
        return None
    # number of blocks of size >= k is rank(N^(k-1)) - rank(N^k)
    at_least = [ranks[k - 1] - ranks[k] for k in range(1, n + 1)] + [0]
    sizes = []
    for k in range(n, 0, -1):
        sizes += [k] * (at_least[k - 1] - at_least[k])
    return tuple(sizes)


def subgroup_flags(T, length=3):
    """Unipotent content of the generators and short words, plus the form type."""
    kinds = set()
    mats = list(T.matrices) + [m for _, m in _words(T.matrices[:-1], length)]
    for m in mats:
        if m.is_identity():
            continue
        t = _unipotent_type(m)
        if t is not None:
            kinds.add(t)
    n = T.rank
    return {
        "has_J4_unipotent": (n,) in kinds,
        "has_transvection": (2,) + (1,) * (n - 2) in kinds,
        "only_J2J2_unipotents": bool(kinds) and kinds <= {(2, 2) + (1,) * (n - 4)},
        "form_type": form_type(T),
    }


def _is_rational_matrix(m):
    return all(not isinstance(x, CycloNum) or x.is_rational() for r in m.rows for x in r)


def _rat_matrix(m):
    return [[x.to_rational() if isinstance(x, CycloNum) else Fraction(x) for x in r] for r in m.rows]


def _lattice_basis(cols, n):
    """Z-basis (columns) of the lattice spanned by rational column vectors."""
    den = lcm(*[Fraction(x).denominator for c in cols for x in c])
    A = SMatrix(n, len(cols), lambda i, j: int(Fraction(cols[j][i]) * den))
    H = hermite_normal_form(A)
    return [[Fraction(int(H[i, j]), den) for i in range(n)] for j in range(H.shape[1])]


def so5z_conjecture_probe(T, rounds=12):
    """Look for a lattice in the primitive part of Lambda^2 stable under T.

    Saturates Z^5 under the generators and their inverses. Reports the
    basis, the conjugated integral matrices and an integral invariant
    symmetric form when the saturation stabilizes; "not found" otherwise.
    The report is advisory: not finding a lattice disproves nothing.
    """
    E = ext2_primitive(T)
    n = E.rank
    gens = list(E.matrices[:-1])
    if not all(_is_rational_matrix(g) for g in gens):
        return {"found": False, "reason": "entries are not rational"}
    gens = [_rat_matrix(g) for g in gens]
    gens += [_rat_matrix(Matrix(g).inverse()) for g in gens]

    def act(g, v):
        return [sum(g[i][k] * v[k] for k in range(n)) for i in range(n)]

    basis = [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    for _ in range(rounds):
        cols = basis + [act(g, v) for g in gens for v in basis]
        new = _lattice_basis(cols, n)
        if new == basis:
            P = Matrix.from_columns(basis)
            Pinv = P.inverse()
            conj = [Pinv * m * P for m in E.matrices]
            U = MonodromyTuple(E.points, conj, check=False)
            sym = invariant_bilinear_forms(U)["symmetric"]
            form = None
            if sym:
                g = sym[0]
                den = lcm(*[Fraction(x).denominator for r in g.rows for x in r])
                form = g.map(lambda x: Fraction(x) * den)
            return {"found": True, "basis": basis, "matrices": conj, "form": form}
        basis = new
    return {"found": False, "reason": "lattice saturation did not stabilize"}
