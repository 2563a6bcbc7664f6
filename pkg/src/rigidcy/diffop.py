"""Differential operators in the theta-ring.

An operator is stored as L = sum_i z^i P_i(theta) with theta = z d/dz and the
P_i univariate polynomials over a coefficient field (QQ, QQ(a, b) or any
sympy field). The normal ordering puts z to the left of theta.
"""

import json
import re
from tokenize import TokenError
from fractions import Fraction
from functools import lru_cache
from math import comb

import sympy
from sympy import QQ
from sympy.functions.combinatorial.numbers import stirling
from sympy.parsing.sympy_parser import (convert_xor, parse_expr,
                                        standard_transformations)
from sympy.polys.fields import field
from sympy.polys.matrices import DomainMatrix
from sympy.polys.rings import ring

from .exactalg import PARAM_SYMBOLS, PARAMS, ParseError, as_rat, format_rat

INF = "inf"
Z = sympy.Symbol("z")
THETA = sympy.Symbol("theta")


class NonFuchsianPoint(ValueError):
    pass


class IrrationalExponent(ValueError):
    pass


class NonRationalPoint(ValueError):
    pass


class LeadingCoefficientVanishes(ValueError):
    pass


class PositivityViolation(ValueError):
    pass


class FactorizationIncomplete(ValueError):
    pass


# coefficient fields

def field_name(K):
    if K == QQ:
        return "QQ"
    if K == PARAMS:
        return "QQ(a,b)"
    return str(K)


def field_from_name(name):
    if name == "QQ":
        return QQ
    if name == "QQ(a,b)":
        return PARAMS
    raise ParseError("unknown coefficient field %r" % name)


def to_field(K, x):
    """Coerce int, Fraction, rational string, sympy number or field element into K."""
    if isinstance(x, (int, Fraction)):
        q = Fraction(x)
        return K.from_sympy(sympy.Rational(q.numerator, q.denominator))
    if isinstance(x, str):
        if K == QQ:
            return to_field(K, as_rat(x))
        return K.from_sympy(parse_scalar(x))
    if isinstance(x, sympy.Basic):
        return K.from_sympy(x)
    if K.of_type(x):
        return x
    for src in (QQ, PARAMS):
        if src.of_type(x):
            return K.convert_from(x, src)
    return K.convert(x)


def field_for(*xs):
    """Smallest of QQ and QQ(a, b) holding all of xs."""
    for x in xs:
        if isinstance(x, str) and re.search(r"[ab]", x):
            return PARAMS
        if isinstance(x, sympy.Basic) and x.free_symbols:
            return PARAMS
        if PARAMS.of_type(x) and not QQ.of_type(x):
            return PARAMS
    return QQ


def rational_value(K, x):
    """x as a Fraction if it is a constant rational, else None."""
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if K == QQ:
        return Fraction(int(x.numerator), int(x.denominator))
    e = K.to_sympy(x)
    if e.is_Rational:
        return Fraction(int(e.p), int(e.q))
    return None


def integer_value(K, x):
    q = rational_value(K, x)
    if q is not None and q.denominator == 1:
        return int(q)
    return None


def scalar_key(K, x):
    q = rational_value(K, x)
    if q is not None:
        return (0, q, "")
    return (1, 0, str(K.to_sympy(x)))


def format_scalar(K, x):
    q = rational_value(K, x)
    if q is not None:
        return format_rat(q)
    return sympy.sstr(K.to_sympy(x)).replace("**", "^").replace(" ", "")


def parse_scalar(text):
    """Parse an exact scalar string in a and b; floats are rejected."""
    _reject_floats(text)
    e = _parse(text)
    extra = e.free_symbols - set(PARAM_SYMBOLS)
    if extra:
        raise ParseError("unexpected symbols %s in %r" % (sorted(map(str, extra)), text))
    return e


def _reject_floats(text):
    if re.search(r"\d\.|\.\d|\d[eE][-+]?\d", text):
        raise ParseError("floating point literal in %r" % text)


def _parse(text):
    names = {"z": Z, "theta": THETA, "a": PARAM_SYMBOLS[0], "b": PARAM_SYMBOLS[1]}
    try:
        return parse_expr(text, local_dict=names,
                          transformations=standard_transformations + (convert_xor,),
                          evaluate=True)
    except (SyntaxError, TypeError, TokenError) as exc:
        raise ParseError("cannot parse %r: %s" % (text, exc))


@lru_cache(maxsize=None)
def theta_ring(K):
    R, th = ring("theta", K)
    return R, th


@lru_cache(maxsize=None)
def z_field(K):
    F, zf = field("z", K)
    return F, zf


def _shift(p, c):
    """P(theta + c)."""
    if not c:
        return p
    th = p.ring.gens[0]
    return p.compose(th, th + c)


def coeff_list(p):
    """Coefficients of a univariate polynomial, low to high."""
    if not p:
        return []
    out = [p.ring.domain.zero] * (p.degree() + 1)
    for (k,), c in p.terms():
        out[k] = c
    return out


def _taylor(p, s):
    """Coefficients of P(s + x) in x, low to high."""
    return coeff_list(_shift(p, s))


def _roots(p):
    """Roots of a theta-polynomial in its field, with multiplicity."""
    K = p.ring.domain
    out = []
    if p.degree() <= 0:
        return out
    _, facs = p.factor_list()
    for f, e in facs:
        if f.degree() != 1:
            raise IrrationalExponent("factor %s has no root in %s" % (f.as_expr(), field_name(K)))
        c0, c1 = coeff_list(f)
        out.extend([K.quo(-c0, c1)] * e)
    return out


def sort_scalars(K, xs):
    return sorted(xs, key=lambda x: scalar_key(K, x))


class DiffOp:
    """L = sum_i z^i P_i(theta) with P_i in K[theta]."""

    __slots__ = ("field", "coeffs")

    def __init__(self, coeffs, field=QQ):
        R, _ = theta_ring(field)
        cs = []
        for c in coeffs:
            if isinstance(c, (list, tuple)):
                p = R.zero
                th = R.gens[0]
                for k, x in enumerate(c):
                    p += to_field(field, x) * th ** k
                c = p
            elif not (hasattr(c, "ring") and c.ring == R):
                c = R(to_field(field, c)) if not hasattr(c, "ring") else R(c.as_expr())
            cs.append(c)
        while cs and not cs[-1]:
            cs.pop()
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("DiffOp is immutable")

    @property
    def m(self):
        return len(self.coeffs) - 1

    @property
    def degree(self):
        return max((p.degree() for p in self.coeffs), default=0)

    order = degree

    def P(self, i):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return theta_ring(self.field)[0].zero

    def is_zero(self):
        return not self.coeffs

    def is_z_divisible(self):
        return bool(self.coeffs) and not self.coeffs[0]

    def __eq__(self, other):
        return isinstance(other, DiffOp) and self.field == other.field \
            and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((field_name(self.field), tuple(str(p) for p in self.coeffs)))

    def __add__(self, other):
        other = _as_op(other, self.field)
        n = max(len(self.coeffs), len(other.coeffs))
        return DiffOp([self.P(i) + other.P(i) for i in range(n)], self.field)

    __radd__ = __add__

    def __neg__(self):
        return DiffOp([-p for p in self.coeffs], self.field)

    def __sub__(self, other):
        return self + (-_as_op(other, self.field))

    def __rsub__(self, other):
        return _as_op(other, self.field) - self

    def __mul__(self, other):
        if isinstance(other, DiffOp):
            return op_mul(self, other)
        return op_scale(self, other)

    def __rmul__(self, other):
        return op_scale(self, other)

    def __pow__(self, e):
        out = DiffOp([[1]], self.field)
        for _ in range(e):
            out = op_mul(out, self)
        return out

    def map_coeffs(self, f):
        return DiffOp([f(p) for p in self.coeffs], self.field)

    def normalized(self):
        return normalize(self)

    def same_as(self, other):
        """Equality up to the reduced normalization."""
        return normalize(self) == normalize(other)

    def __str__(self):
        return format_op(self)

    def __repr__(self):
        return "DiffOp(%s)" % format_op(self)

    def to_json(self):
        return {"field": field_name(self.field),
                "coeffs": [[format_scalar(self.field, c) for c in coeff_list(p)]
                           for p in self.coeffs]}

    def specialize(self, a, b):
        """Substitute rational a, b into a QQ(a, b) operator."""
        from .exactalg import specialize
        if self.field != PARAMS:
            return self
        R, th = theta_ring(QQ)
        out = []
        for p in self.coeffs:
            q = R.zero
            for (k,), c in p.terms():
                q += to_field(QQ, specialize(c, a, b)) * th ** k
            out.append(q)
        return DiffOp(out, QQ)


def _as_op(x, K):
    if isinstance(x, DiffOp):
        return x
    return DiffOp([[x]], K)


def from_json(doc):
    K = field_from_name(doc["field"])
    return DiffOp([[to_field(K, s) for s in c] for c in doc["coeffs"]], K)


def theta_op(K=QQ):
    return DiffOp([[0, 1]], K)


def z_op(K=QQ):
    return DiffOp([[], [1]], K)


def poly_op(coeffs, K=QQ):
    """The operator P(theta) from its coefficients, low to high."""
    return DiffOp([list(coeffs)], K)


def make_La(a, K=None):
    """theta - z(theta + a), annihilating (1 - z)^(-a)."""
    K = K or field_for(a)
    a = to_field(K, a)
    return DiffOp([[0, 1], [-a, -1]], K)


def op_add(L1, L2):
    return L1 + L2


def op_scale(L, c):
    c = to_field(L.field, c)
    return DiffOp([c * p for p in L.coeffs], L.field)


def op_mul(L1, L2):
    """z^i P(theta) z^j Q(theta) = z^(i+j) P(theta + j) Q(theta)."""
    K = L1.field
    R, _ = theta_ring(K)
    out = [R.zero] * (len(L1.coeffs) + len(L2.coeffs) - 1 if L1.coeffs and L2.coeffs else 0)
    for j, q in enumerate(L2.coeffs):
        if not q:
            continue
        for i, p in enumerate(L1.coeffs):
            if p:
                out[i + j] += _shift(p, j) * q
    return DiffOp(out, K)


def twist_power(L, c):
    """Operator with solutions z^c Sol(L): P_i(theta) -> P_i(theta - c)."""
    c = to_field(L.field, c)
    return L.map_coeffs(lambda p: _shift(p, -c))


def twist_oneminus(L, c):
    """Operator with solutions (1 - z)^c Sol(L)."""
    c = to_field(L.field, c)
    if not c:
        return L
    return tensor_op(L, make_La(-c, L.field))


def rescale_op(L, lam):
    """z -> lam z, i.e. z^i P_i -> lam^i z^i P_i."""
    lam = to_field(L.field, lam)
    return DiffOp([lam ** i * p for i, p in enumerate(L.coeffs)], L.field)


def _lin(K, *roots):
    """prod (theta - r) over the given roots."""
    R, th = theta_ring(K)
    out = R.one
    for r in roots:
        out *= th - r
    return out


def hadamard_full(L, a):
    """sum_i z^i prod_{j<i}(theta+a+j) prod_{k<m-i}(theta-k) P_i."""
    K = L.field
    a = to_field(K, a)
    m = L.m
    out = []
    for i, p in enumerate(L.coeffs):
        f = _lin(K, *[-(a + j) for j in range(i)]) * _lin(K, *range(m - i))
        out.append(f * p)
    return DiffOp(out, K)


def convolution_full(L, a):
    """sum_i z^i prod_{j<i}(theta+i-a-j) prod_{k<m-i}(theta-k) P_i(theta-a)."""
    K = L.field
    a = to_field(K, a)
    m = L.m
    out = []
    for i, p in enumerate(L.coeffs):
        f = _lin(K, *[a + j - i for j in range(i)]) * _lin(K, *range(m - i))
        out.append(f * _shift(p, -a))
    return DiffOp(out, K)


def left_linear_factor(L):
    """Some c with L = (theta + c) R, or None."""
    K = L.field
    try:
        cands = _roots(L.P(0))
    except IrrationalExponent:
        _, facs = L.P(0).factor_list()
        cands = []
        for f, _ in facs:
            if f.degree() == 1:
                cands.extend(_roots(f))
    seen = []
    for r in cands:
        if r in seen:
            continue
        seen.append(r)
        c = -r
        if all(not p or p.rem(_lin(K, -(c + i))) == 0 for i, p in enumerate(L.coeffs)):
            return c
    return None


def strip_left_linear(L):
    """Split L = (theta + c_1) ... (theta + c_k) R with R free of left linear factors."""
    K = L.field
    factors = []
    R = L
    while R.degree > 0:
        c = left_linear_factor(R)
        if c is None:
            break
        factors.append(c)
        R = DiffOp([p.quo(_lin(K, -(c + i))) if p else p for i, p in enumerate(R.coeffs)], K)
    return factors, R


def linear_product(K, cs):
    """The operator (theta + c_1) ... (theta + c_k)."""
    out = DiffOp([[1]], K)
    for c in cs:
        out = op_mul(out, DiffOp([[c, 1]], K))
    return out


# d-form and normalization

def _theta_coeffs_in_z(L):
    """a_k(z) with L = sum_k a_k(z) theta^k, as polynomials in z."""
    F, zf = z_field(L.field)
    Rz = F.ring
    zz = Rz.gens[0]
    th = theta_ring(L.field)[1]
    out = [Rz.zero] * (L.degree + 1)
    for i, p in enumerate(L.coeffs):
        for (k,), c in p.terms():
            out[k] += c * zz ** i
    return out


def _from_theta_coeffs(cs, K):
    R, th = theta_ring(K)
    P = {}
    for k, c in enumerate(cs):
        for (i,), v in c.terms():
            P[i] = P.get(i, R.zero) + v * th ** k
    if not P:
        return DiffOp([], K)
    return DiffOp([P.get(i, R.zero) for i in range(max(P) + 1)], K)


def normalize(L):
    """Divide by the gcd of the z-coefficients and make P_0 monic."""
    if L.is_zero():
        return L
    K = L.field
    cs = _theta_coeffs_in_z(L)
    g = cs[0].ring.zero
    for c in cs:
        g = g.gcd(c) if g else c
    if g.degree() > 0:
        cs = [c.quo(g) for c in cs]
    L = _from_theta_coeffs(cs, K)
    lc = L.P(0).LC
    return op_scale(L, K.quo(K.one, lc))


def _d_poly_coeffs(L):
    """c_j(z) in K[z] with L = sum_j c_j(z) d^j."""
    F, _ = z_field(L.field)
    Rz = F.ring
    zz = Rz.gens[0]
    n = L.degree
    out = [Rz.zero] * (n + 1)
    for i, p in enumerate(L.coeffs):
        for (k,), c in p.terms():
            for j in range(k + 1):
                s = stirling(k, j)
                if s:
                    out[j] += c * int(s) * zz ** (i + j)
    return out


def _from_d_poly(cs, K):
    """Operator sum_j c_j(z) d^j with polynomial c_j, brought to theta-form by a left power of z."""
    R, th = theta_ring(K)
    shift = 0
    for j, c in enumerate(cs):
        if c:
            low = min(mon[0] for mon in c.monoms())
            shift = max(shift, j - low)
    P = {}
    for j, c in enumerate(cs):
        if not c:
            continue
        ff = _lin(K, *range(j))
        for (e,), v in c.terms():
            i = e + shift - j
            P[i] = P.get(i, R.zero) + v * ff
    return DiffOp([P.get(i, R.zero) for i in range(max(P) + 1)], K)


def to_d_form(L):
    """Monic coefficients a_0, ..., a_{n-1}, 1 in K(z) of L in the d/dz presentation."""
    F, _ = z_field(L.field)
    cs = _d_poly_coeffs(L)
    lead = cs[-1]
    if not lead:
        raise LeadingCoefficientVanishes("leading d-coefficient is zero")
    lead = F.field_new(lead)
    return [F.field_new(c) / lead for c in cs]


def _as_poly(fe):
    """A rational function with constant denominator as a polynomial."""
    d = fe.denom
    if d.degree() > 0:
        raise ValueError("not a polynomial: %s" % fe)
    return fe.numer.quo_ground(d.LC)


def from_d_form(coeffs, K):
    """Reduced theta-form operator from d-coefficients in K(z) or K[z], low to high."""
    F, _ = z_field(K)
    fs = [c if hasattr(c, "numer") else F.field_new(c) for c in coeffs]
    den = F.ring.one
    for c in fs:
        den = den.lcm(c.denom)
    cs = [_as_poly(c * F.field_new(den)) for c in fs]
    return normalize(_from_d_poly(cs, K))


def dual_op(L):
    """L* = d^n + sum_i (-1)^(n+i) d^i a_i, in reduced theta-form."""
    a = to_d_form(L)
    n = len(a) - 1
    F, zf = z_field(L.field)
    b = [F.zero] * (n + 1)
    b[n] = F.one
    for i in range(n):
        sign = (-1) ** (n + i)
        d = a[i]
        for k in range(i + 1):
            b[i - k] += sign * comb(i, k) * d
            d = d.diff(zf)
    return from_d_form(b, L.field)


# local data

def local_op(L, p):
    """The operator in the local parameter z - p (or 1/z at infinity), reduced."""
    K = L.field
    if p == INF:
        m = L.m
        return normalize(DiffOp([_reflect(L.P(m - j)) for j in range(m + 1)], K))
    p = to_field(K, p)
    if not p:
        return normalize(L)
    cs = _d_poly_coeffs(L)
    zz = cs[0].ring.gens[0]
    cs = [c.compose(zz, zz + p) if c else c for c in cs]
    return normalize(_from_d_poly(cs, K))


def _reflect(p):
    """P(-theta)."""
    if not p:
        return p
    th = p.ring.gens[0]
    return p.compose(th, -th)


def indicial_poly(L, p=0):
    """Monic indicial polynomial at p; NonFuchsianPoint if it is too short."""
    Lp = local_op(L, p)
    P0 = Lp.P(0)
    if P0.degree() != L.degree:
        raise NonFuchsianPoint("indicial degree %d < %d at %s" % (P0.degree(), L.degree, p))
    return P0.quo_ground(P0.LC)


def exponents(L, p=0):
    """Sorted exponents at p; Fractions over QQ, field elements otherwise."""
    K = L.field
    return [_point_value(K, e) for e in sort_scalars(K, _roots(indicial_poly(L, p)))]


def _finite_singular_points(cs, K):
    lead = cs[-1]
    pts = []
    for c in cs[:-1]:
        if not c:
            continue
        g = lead.gcd(c)
        den = lead.quo(g)
        if den.degree() <= 0:
            continue
        _, facs = den.factor_list()
        for f, _ in facs:
            if f.degree() != 1:
                raise NonRationalPoint("singular points %s not in %s"
                                       % (f.as_expr(), field_name(K)))
            c0, c1 = coeff_list(f)
            r = K.quo(-c0, c1)
            if r not in pts:
                pts.append(r)
    return pts


def _point_value(K, p):
    q = rational_value(K, p)
    return q if q is not None else p


def singular_locus(L):
    """Singular points: 0 first, then finite ones in order, then infinity."""
    K = L.field
    pts = _finite_singular_points(_d_poly_coeffs(L), K)
    pts = sort_scalars(K, pts)
    pts.sort(key=lambda x: 0 if not x else 1)
    out = [_point_value(K, x) for x in pts]
    Linf = local_op(L, INF)
    if K.zero in _finite_singular_points(_d_poly_coeffs(Linf), K):
        out.append(INF)
    return out


def riemann_scheme(L):
    """Map singular point -> sorted exponent list."""
    return {p: exponents(L, p) for p in singular_locus(L)}


def is_fuchsian(L):
    try:
        for p in singular_locus(L):
            indicial_poly(L, p)
    except NonFuchsianPoint:
        return False
    return True


def is_a_positive(L, a):
    """No exponents in Z_<0 at finite points, none in -a + Z_<=0 at infinity."""
    K = L.field
    a = to_field(K, a)
    if not is_fuchsian(L):
        return False
    for p in singular_locus(L):
        for e in exponents(L, p):
            if p == INF:
                k = integer_value(K, e + a)
                if k is not None and k <= 0:
                    return False
            else:
                k = integer_value(K, e)
                if k is not None and k < 0:
                    return False
    return True


def log_free_count(L, p, e0):
    """Dimension of the log-free local solutions at p with exponents in e0 + Z."""
    K = L.field
    Lp = local_op(L, p)
    e0 = to_field(K, e0)
    offs = [integer_value(K, e - e0) for e in _roots(Lp.P(0))]
    offs = [k for k in offs if k is not None]
    if not offs:
        return 0
    lo, hi = min(offs), max(offs)
    base = e0 + lo
    N = hi - lo
    rows = []
    for t in range(N + 1):
        row = [K.zero] * (N + 1)
        for i in range(min(t, Lp.m) + 1):
            p = Lp.P(i)
            if p:
                row[t - i] = p(base + t - i)
        rows.append(row)
    M = DomainMatrix(rows, (N + 1, N + 1), K)
    return N + 1 - M.rank()


def unipotent_rank(L, p):
    """rk(T_p - 1) from the log-free count at integer exponents."""
    return L.degree - log_free_count(L, p, 0)


def hadamard_degree(L, a, ranks=None):
    """Degree of the irreducible part of H_a(L) predicted from local monodromy ranks.

    ranks, if given, maps each singular point to rk(T_p - 1) and the key
    "alpha0" to rk(e(a) T_0 - 1).
    """
    K = L.field
    n = L.degree
    a = to_field(K, a)
    if ranks is None:
        ranks = {p: unipotent_rank(L, p) for p in singular_locus(L) if p != 0}
        ranks["alpha0"] = n - log_free_count(L, 0, -a)
    total = sum(v for p, v in ranks.items() if p not in (0, "alpha0"))
    return total - (n - ranks["alpha0"])


def middle_hadamard_op(L, a, ranks=None, positivity=True, degree_check=True):
    """The right factor of H_a(L) left after stripping linear left factors.

    positivity checks that L^{z^{1-a}} is (1-a)-positive; degree_check compares
    the stripped degree with the one predicted from local monodromy ranks.
    """
    K = L.field
    a = to_field(K, a)
    if positivity and not is_a_positive(twist_power(L, a - 1), 1 - a):
        raise PositivityViolation("twisted input is not (1-a)-positive for a=%s"
                                  % format_scalar(K, a))
    H = hadamard_full(L, a)
    _, R = strip_left_linear(H)
    if degree_check:
        want = hadamard_degree(L, a, ranks)
        if R.degree != want:
            raise FactorizationIncomplete("stripped degree %d, expected %d" % (R.degree, want))
    return normalize(R)


# tensor constructions

def _relations(L, F):
    """r_k in K(z) with theta^n y = sum_k r_k theta^k y."""
    cs = _theta_coeffs_in_z(L)
    lead = F.field_new(cs[-1])
    return [-F.field_new(c) / lead for c in cs[:-1]]


def _canon(key, mode):
    if mode == "tensor":
        return key, 1
    if mode == "sym":
        return tuple(sorted(key)), 1
    if len(set(key)) < len(key):
        return None, 0
    sign = 1
    k = list(key)
    for i in range(len(k)):
        for j in range(len(k) - 1 - i):
            if k[j] > k[j + 1]:
                k[j], k[j + 1] = k[j + 1], k[j]
                sign = -sign
    return tuple(k), sign


def _theta_basis(key, rels, mode):
    """theta applied to the product element indexed by key."""
    out = {}
    for pos, s in enumerate(key):
        r = rels[pos]
        n = len(r)
        if s + 1 < n:
            terms = [(s + 1, None)]
        else:
            terms = [(k, r[k]) for k in range(n) if r[k]]
        for k, c in terms:
            nk, sign = _canon(key[:pos] + (k,) + key[pos + 1:], mode)
            if nk is None:
                continue
            out.setdefault(nk, []).append((sign, c))
    return out


def _annihilator(rels, start, mode, F, zf, K):
    cache = {}

    def theta(v):
        w = {}
        for key, c in v.items():
            dc = zf * c.diff(zf)
            if dc:
                w[key] = w.get(key, F.zero) + dc
            if key not in cache:
                cache[key] = _theta_basis(key, rels, mode)
            for k2, lst in cache[key].items():
                acc = w.get(k2, F.zero)
                for sign, r in lst:
                    acc += sign * c if r is None else sign * c * r
                w[k2] = acc
        return {k: c for k, c in w.items() if c}

    pivots = []
    v = {start: F.one}
    s = 0
    while True:
        row = dict(v)
        combo = {s: F.one}
        for pk, prow, pcombo in pivots:
            f = row.get(pk)
            if f:
                for k, c in prow.items():
                    row[k] = row.get(k, F.zero) - f * c
                for k, c in pcombo.items():
                    combo[k] = combo.get(k, F.zero) - f * c
                row = {k: c for k, c in row.items() if c}
        if not row:
            return _combo_to_op(combo, F, K)
        pk = min(row, key=lambda k: (len(str(row[k])), k))
        inv = F.one / row[pk]
        row = {k: c * inv for k, c in row.items()}
        combo = {k: c * inv for k, c in combo.items()}
        new = []
        for qk, qrow, qcombo in pivots:
            f = qrow.get(pk)
            if f:
                qrow = dict(qrow)
                for k, c in row.items():
                    qrow[k] = qrow.get(k, F.zero) - f * c
                qrow = {k: c for k, c in qrow.items() if c}
                qcombo = dict(qcombo)
                for k, c in combo.items():
                    qcombo[k] = qcombo.get(k, F.zero) - f * c
            new.append((qk, qrow, qcombo))
        new.append((pk, row, combo))
        pivots = new
        v = theta(v)
        s += 1


def _combo_to_op(combo, F, K):
    n = max(combo)
    den = F.ring.one
    for c in combo.values():
        den = den.lcm(c.denom)
    dF = F.field_new(den)
    cs = [_as_poly(combo.get(k, F.zero) * dF) for k in range(n + 1)]
    return normalize(_from_theta_coeffs(cs, K))


def tensor_op(L1, L2):
    """Minimal operator annihilating all products y1 y2."""
    K = L1.field
    F, zf = z_field(K)
    rels = [_relations(L1, F), _relations(L2, F)]
    return _annihilator(rels, (0, 0), "tensor", F, zf, K)


def sym_pow_op(L, n):
    """Minimal operator annihilating all products y_1 ... y_n."""
    K = L.field
    F, zf = z_field(K)
    r = _relations(L, F)
    return _annihilator([r] * n, (0,) * n, "sym", F, zf, K)


def ext_pow_op(L, n, derivation="theta"):
    """Minimal operator annihilating the Wronskians Wr(y_1, ..., y_n).

    derivation="theta" uses rows (z d/dz)^k y_j; derivation="d" uses (d/dz)^k y_j,
    which divides the theta-Wronskian by z^(n(n-1)/2).
    """
    K = L.field
    F, zf = z_field(K)
    r = _relations(L, F)
    out = _annihilator([r] * n, tuple(range(n)), "ext", F, zf, K)
    if derivation == "d":
        out = normalize(twist_power(out, -(n * (n - 1) // 2)))
    return out


# text form

def _signed_scalar(K, c):
    """(sign, magnitude string) with compound expressions parenthesized."""
    q = rational_value(K, c)
    if q is not None:
        return ("-" if q < 0 else "+"), format_rat(abs(q))
    s = format_scalar(K, c)
    sign = "+"
    if s.startswith("-") and re.fullmatch(r"-[\w^*/]+", s):
        sign, s = "-", s[1:]
    if not re.fullmatch(r"[\w^*/]+", s):
        s = "(" + s + ")"
    return sign, s


def _poly_str(K, p):
    cl = coeff_list(p)
    out = ""
    for k in range(p.degree(), -1, -1):
        c = cl[k]
        if not c:
            continue
        mono = "theta" if k == 1 else ("theta^%d" % k if k else "")
        sign, mag = _signed_scalar(K, c)
        if mono and mag == "1":
            body = mono
        elif mono:
            body = mag + "*" + mono
        else:
            body = mag
        if not out:
            out = ("-" if sign == "-" else "") + body
        else:
            out += sign + body
    return out


def _term_str(K, i, p):
    c, facs = p.factor_list()
    th = p.ring.gens[0]
    fparts = []
    for f, e in sorted(facs, key=lambda fe: (fe[0].degree(), str(fe[0]))):
        lc = f.LC
        c = c * lc ** e
        f = f.quo_ground(lc)
        s = "theta" if f == th else "(" + _poly_str(K, f) + ")"
        fparts.append(s if e == 1 else "%s^%d" % (s, e))
    zs = [] if i == 0 else (["z"] if i == 1 else ["z^%d" % i])
    sign, mag = _signed_scalar(K, c)
    lead = [] if mag == "1" and (zs or fparts) else [mag]
    return sign, "*".join(lead + zs + fparts)


def format_op(L):
    if L.is_zero():
        return "0"
    out = ""
    for i, p in enumerate(L.coeffs):
        if not p:
            continue
        sign, body = _term_str(L.field, i, p)
        if not out:
            out = ("-" if sign == "-" else "") + body
        else:
            out += (" - " if sign == "-" else " + ") + body
    return out


def parse_op(text, K=None):
    """Parse e.g. 'theta^4 - 256*z*(theta+1/2)^4' with z to the left of theta."""
    _reject_floats(text)
    e = _parse(text)
    extra = e.free_symbols - {Z, THETA} - set(PARAM_SYMBOLS)
    if extra:
        raise ParseError("unexpected symbols %s" % sorted(map(str, extra)))
    if K is None:
        K = PARAMS if e.free_symbols & set(PARAM_SYMBOLS) else QQ
    try:
        poly = sympy.Poly(sympy.expand(e), Z, THETA, domain=K)
    except (sympy.PolynomialError, sympy.CoercionFailed) as exc:
        raise ParseError("not an operator polynomial: %s" % exc)
    R, th = theta_ring(K)
    P = {}
    for (i, k), c in poly.terms():
        P[i] = P.get(i, R.zero) + c * th ** k
    if not P:
        return DiffOp([], K)
    return DiffOp([P.get(i, R.zero) for i in range(max(P) + 1)], K)


def op_to_json_text(L):
    return json.dumps(L.to_json())


def op_from_json_text(text):
    return from_json(json.loads(text))


# series action

def apply(L, f, M=None):
    """Exact action on a truncated local expansion.

    f carries point, exponent and series (series[k][m] is the coefficient of
    tau^(exponent+m) log(tau)^k). Away from 0 the local-form operator acts.
    Returns the same layout, truncated to min(M, len).
    """
    K = L.field
    Lp = L if f.point == 0 else local_op(L, f.point)
    mu = to_field(K, f.exponent)
    size = min(len(s) for s in f.series) if f.series else 0
    if M is not None:
        size = min(size, M)
    out = [[K.zero] * size for _ in f.series]
    for i, p in enumerate(Lp.coeffs):
        if not p:
            continue
        for m in range(size - i):
            tay = _taylor(p, mu + m)
            for k, row in enumerate(f.series):
                c = to_field(K, row[m])
                if not c:
                    continue
                for j in range(min(k, len(tay) - 1) + 1):
                    if tay[j]:
                        fall = 1
                        for t in range(j):
                            fall *= k - t
                        out[k - j][m + i] += c * tay[j] * fall
    return out
