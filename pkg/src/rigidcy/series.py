"""Local solutions: Frobenius recursion, log jets, Beta-ratio Hadamard transforms."""

from fractions import Fraction
from functools import lru_cache

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from .diffop import (INF, _roots, coeff_list, format_scalar, integer_value, local_op,
                     rational_value, to_field, apply)
from .exactalg import as_rat, format_rat


class Resonance(ValueError):
    def __init__(self, m):
        super().__init__("indicial polynomial vanishes at offset %d" % m)
        self.m = m


class NotMUM(ValueError):
    pass


class PoleInRatio(ZeroDivisionError):
    pass


class LowerPole(ZeroDivisionError):
    pass


class ExponentCase(ValueError):
    pass


class ParameterExcluded(ValueError):
    pass


def _out(K, x):
    q = rational_value(K, x)
    return q if q is not None else x


class LocalSolution:
    """tau^exponent * sum_k log(tau)^k * sum_m series[k][m] tau^m at a point.

    tau is z - point, or 1/z at infinity.
    """

    __slots__ = ("point", "exponent", "series", "field")

    def __init__(self, point, exponent, series, field=QQ):
        self.point = point
        self.exponent = exponent
        self.series = tuple(tuple(s) for s in series)
        self.field = field

    @property
    def log_degree(self):
        return len(self.series) - 1

    @property
    def M(self):
        return len(self.series[0]) if self.series else 0

    def coeffs(self, k=0):
        return list(self.series[k])

    def normalized(self):
        """Scale so the first nonzero coefficient of the top log power is 1."""
        K = self.field
        top = self.series[-1]
        lead = next((c for c in top if c), None)
        if lead is None:
            return self
        inv = to_field(K, 1) / to_field(K, lead) if K != QQ else 1 / Fraction(lead)
        return LocalSolution(self.point, self.exponent,
                             [[_out(K, to_field(K, c) * to_field(K, inv)) for c in s]
                              for s in self.series], K)

    def truncated(self, M):
        return LocalSolution(self.point, self.exponent, [s[:M] for s in self.series], self.field)

    def __eq__(self, other):
        return isinstance(other, LocalSolution) and self.point == other.point \
            and self.exponent == other.exponent and self.series == other.series

    def __str__(self):
        K = self.field
        tau = "z" if self.point == 0 else ("t" if self.point == INF else "(z-%s)" % self.point)
        parts = []
        for k, s in enumerate(self.series):
            terms = []
            for m, c in enumerate(s):
                if c:
                    cs = format_scalar(K, to_field(K, c))
                    terms.append(cs if m == 0 else "%s*%s^%d" % (cs, tau, m) if m > 1
                                 else "%s*%s" % (cs, tau))
            body = " + ".join(terms or ["0"]) + " + ..."
            if k:
                body = "log(%s)^%d * (%s)" % (tau, k, body)
            elif len(self.series) > 1:
                body = "(%s)" % body
            parts.append(body)
        return "%s^(%s) * (%s)" % (tau, format_scalar(K, to_field(K, self.exponent)),
                                   " + ".join(parts))

    def to_json(self):
        K = self.field
        pt = self.point if self.point == INF else format_scalar(K, to_field(K, self.point))
        return {"point": pt,
                "exponent": format_scalar(K, to_field(K, self.exponent)),
                "series": [[format_scalar(K, to_field(K, c)) for c in s] for s in self.series]}


# Frobenius recursion

def frobenius(L, p, mu, M):
    """Log-free solution tau^mu sum A_m tau^m, A_0 = 1, for m < M."""
    K = L.field
    Lp = local_op(L, p)
    mu = to_field(K, mu)
    P = Lp.coeffs
    if P[0](mu):
        raise ValueError("%s is not an exponent at %s" % (format_scalar(K, mu), p))
    A = [K.one]
    for m in range(1, M):
        d = P[0](mu + m)
        if not d:
            raise Resonance(m)
        s = K.zero
        for i in range(1, min(m, len(P) - 1) + 1):
            if P[i]:
                s += P[i](mu + m - i) * A[m - i]
        A.append(-s / d)
    return LocalSolution(p, _out(K, mu), [[_out(K, c) for c in A]], K)


def _jet_mul(x, y):
    return (x[0] * y[0], x[0] * y[1] + x[1] * y[0])


def _jet_div(x, y):
    q = x[0] / y[0]
    return (q, (x[1] - q * y[1]) / y[0])


def _poly_jet(p, s):
    """(P(s), P'(s)) for a theta-polynomial."""
    return (p(s), p.diff(p.ring.gens[0])(s)) if p else (p.ring.domain.zero,) * 2


def frobenius_log_basis(L, M):
    """(y0, y1) at a MUM point z = 0 with y1 = y0 log z + y1~, y1~ in z K[[z]].

    The recursion runs over first-order jets in the exponent mu and y1~ is
    the mu-derivative at mu = 0.
    """
    K = L.field
    P = local_op(L, 0).coeffs
    zeros = [e for e in _roots(P[0]) if not e]
    if len(zeros) < 2:
        raise NotMUM("exponent 0 is not repeated at z=0")
    A = [(K.one, K.zero)]
    for m in range(1, M):
        s = (K.zero, K.zero)
        for i in range(1, min(m, len(P) - 1) + 1):
            if P[i]:
                t = _jet_mul(_poly_jet(P[i], to_field(K, m - i)), A[m - i])
                s = (s[0] + t[0], s[1] + t[1])
        d = _poly_jet(P[0], to_field(K, m))
        if not d[0]:
            raise NotMUM("resonance at offset %d" % m)
        q = _jet_div(s, d)
        A.append((-q[0], -q[1]))
    y0 = LocalSolution(0, 0, [[_out(K, c[0]) for c in A]], K)
    y1 = LocalSolution(0, 0, [[_out(K, c[1]) for c in A], [_out(K, c[0]) for c in A]], K)
    return y0, y1


def local_solutions(L, p, e0, M):
    """Basis of local solutions at p with exponents in e0 + Z, truncated to M terms.

    Solves the truncated system for unknown coefficients of
    tau^(e+m) log(tau)^k directly; e is the smallest exponent of the class.
    """
    K = L.field
    Lp = local_op(L, p)
    e0 = to_field(K, e0)
    roots = _roots(Lp.P(0))
    offs = [integer_value(K, e - e0) for e in roots]
    offs = [k for k in offs if k is not None]
    if not offs:
        return []
    base = e0 + min(offs)
    nlog = len(offs)
    idx = lambda k, m: k * M + m
    rows = []
    tays = {}
    for t in range(M):
        eqs = [[K.zero] * (nlog * M) for _ in range(nlog)]
        for i, Pi in enumerate(Lp.coeffs):
            m = t - i
            if m < 0 or not Pi:
                continue
            if (i, m) not in tays:
                tays[(i, m)] = coeff_list(Pi.compose(Pi.ring.gens[0], Pi.ring.gens[0] + base + m))
            tay = tays[(i, m)]
            for k in range(nlog):
                fall = 1
                for j in range(min(k, len(tay) - 1) + 1):
                    if j:
                        fall *= k - j + 1
                    if tay[j]:
                        eqs[k - j][idx(k, m)] += tay[j] * fall
        rows.extend(eqs)
    mat = DomainMatrix(rows, (len(rows), nlog * M), K)
    basis = _nullspace_rows(mat, K)
    out = []
    for v in basis:
        ser = [[v[idx(k, m)] for m in range(M)] for k in range(nlog)]
        while len(ser) > 1 and not any(ser[-1]):
            ser.pop()
        out.append(LocalSolution(p, _out(K, base), [[_out(K, c) for c in s] for s in ser], K))
    return out


def _nullspace_rows(mat, K):
    ns = mat.nullspace()
    return [list(r) for r in ns.to_list()]


def _strip_leading(K, p, exponent, ser):
    shift = 0
    while all(len(s) > shift and not s[shift] for s in ser):
        shift += 1
    return LocalSolution(p, _out(K, to_field(K, exponent) + shift),
                         [s[shift:] for s in ser], K)


def log_companion(L, p, e0, M):
    """The series g with log(tau) g + r a solution at p, unique up to scalar.

    Raises ValueError when the log-coefficients do not span a line.
    """
    K = L.field
    sols = local_solutions(L, p, e0, M)
    gs = [s for s in sols if s.log_degree >= 1]
    if not gs or any(s.log_degree > 1 for s in gs):
        raise ValueError("no unique log-companion at %s" % p)
    vecs = [[to_field(K, c) for c in s.series[1]] for s in gs]
    if DomainMatrix(vecs, (len(vecs), M), K).rank() != 1:
        raise ValueError("log-companions span more than a line at %s" % p)
    g = _strip_leading(K, p, gs[0].exponent, [list(gs[0].series[1])])
    return g.normalized()


def verify_annihilates(L, f, M=None):
    """True iff L f vanishes on every exactly known coefficient up to M."""
    out = apply(L, f, M)
    return all(not c for row in out for c in row)


# Beta ratios and Hadamard transforms

def _rat(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    return as_rat(x) if isinstance(x, str) else x


def beta_ratio(x, y, m):
    """B(x+m, y) / B(x, y) = prod_{k<m} (x+k)/(x+y+k)."""
    x, y = _rat(x), _rat(y)
    out = Fraction(1) if isinstance(x, Fraction) and isinstance(y, Fraction) else 1
    for k in range(m):
        d = x + y + k
        if not d:
            raise PoleInRatio("x+y+%d vanishes" % k)
        out = out * (x + k) / d
    return out


def beta_ratios(x, y, M):
    """[beta_ratio(x, y, m) for m < M]."""
    x, y = _rat(x), _rat(y)
    out = [Fraction(1)]
    for k in range(M - 1):
        d = x + y + k
        if not d:
            raise PoleInRatio("x+y+%d vanishes" % k)
        out.append(out[-1] * (x + k) / d)
    return out


def binom(x, m):
    """Generalized binomial x(x-1)...(x-m+1)/m! for integer m >= 0."""
    x = _rat(x)
    if m < 0:
        return Fraction(0)
    out = Fraction(1)
    for k in range(m):
        out = out * (x - k) / (k + 1)
    return out


def poch(x, m):
    x = _rat(x)
    out = Fraction(1)
    for k in range(m):
        out *= x + k
    return out


def _binomial_series(c, scale, M):
    """Coefficients of (1 + scale*w)^c for m < M."""
    return [binom(c, m) * Fraction(scale) ** m for m in range(M)]


def _mul_series(f, g, M):
    return [sum(f[i] * g[m - i] for i in range(m + 1)) for m in range(M)]


def hadamard_series(f, a):
    """Local solution of L *_H L_a induced by a log-free local solution f of L.

    Returns None (the zero solution) when the twisted exponent is a
    nonnegative integer.
    """
    if f.log_degree:
        raise ExponentCase("expected an eigenfunction; use hadamard_log_companion")
    a = _rat(a)
    mu0 = _rat(f.exponent)
    A = [_rat(c) for c in f.series[0]]
    M = len(A)
    p = f.point
    if p == INF:
        mu = mu0 + 1 - a
        out_exp = mu + a - 1
        x = mu - 1 + a
    else:
        if p == 0:
            mu = mu0 + a - 1
        else:
            # z^(a-1) is a unit at p
            mu = mu0
            A = _mul_series(_binomial_series(a - 1, 1 / Fraction(p), M), A, M)
        out_exp = mu + 1 - a
        x = mu + 1
    if mu.denominator == 1:
        if mu >= 0:
            return None
        raise ExponentCase("twisted exponent %s is a negative integer" % mu)
    r = beta_ratios(x, 1 - a, M)
    return LocalSolution(p, out_exp, [[r[m] * A[m] for m in range(M)]]).normalized()


def hadamard_log_companion(g, a):
    """The log-companion version: g is the log coefficient of log(tau) g + r."""
    return hadamard_series(LocalSolution(g.point, g.exponent, g.series[-1:]), a)


def inverse_beta_scale(f, x, y):
    """Divide coefficients by beta_ratio(x, y, m)."""
    r = beta_ratios(x, y, f.M)
    return LocalSolution(f.point, f.exponent, [[_rat(c) / r[m] for m, c in enumerate(f.series[0])]])


def cauchy_product(f, g):
    if f.point != g.point:
        raise ValueError("solutions at different points")
    M = min(f.M, g.M)
    out = [[Fraction(0)] * M for _ in range(f.log_degree + g.log_degree + 1)]
    for j, fs in enumerate(f.series):
        for k, gs in enumerate(g.series):
            for m in range(M):
                out[j + k][m] += sum(_rat(fs[i]) * _rat(gs[m - i]) for i in range(m + 1))
    return LocalSolution(f.point, _rat(f.exponent) + _rat(g.exponent), out)


def wronskian_pair(f, g):
    """z (z-p)^(mu+nu-1) sum_m sum_k (2k+mu-nu-m) A_k B_(m-k) (z-p)^m for log-free f, g."""
    if f.point != g.point or f.log_degree or g.log_degree:
        raise ValueError("need log-free solutions at one point")
    mu, nu = _rat(f.exponent), _rat(g.exponent)
    A = [_rat(c) for c in f.series[0]]
    B = [_rat(c) for c in g.series[0]]
    M = min(len(A), len(B))
    W = [sum((2 * k + mu - nu - m) * A[k] * B[m - k] for k in range(m + 1)) for m in range(M)]
    p = f.point
    if p == 0:
        return LocalSolution(0, mu + nu, [W])
    if p == INF:
        raise ValueError("the displayed Wronskian series is stated at finite points")
    # the extra factor z = p + (z - p)
    W = [Fraction(p) * W[m] + (W[m - 1] if m else 0) for m in range(M)]
    return LocalSolution(p, mu + nu - 1, [W])


def pfq_terminating(upper, lower, l):
    """sum_{k<=l} prod (u)_k / prod (v)_k / k! evaluated exactly."""
    upper = [_rat(u) for u in upper]
    lower = [_rat(v) for v in lower]
    total = Fraction(0)
    term = Fraction(1)
    for k in range(l + 1):
        total += term
        num = Fraction(1)
        den = Fraction(k + 1)
        for u in upper:
            num *= u + k
        for v in lower:
            if not v + k:
                if k < l and num:
                    raise LowerPole("lower parameter %s hits a pole" % v)
            den *= v + k
        if k < l:
            if not den:
                raise LowerPole("lower parameter pole at k=%d" % k)
            term = term * num / den
    return total


# printed special-solution coefficients

FAMILIES = ("P1_4_10_4", "P1_4_8_4", "P2_4_6_6", "P2_4_6_8")


def _normalize_list(xs):
    lead = next((x for x in xs if x), None)
    if lead is None:
        return xs
    return [x / lead for x in xs]


def _p11_A(a, b, M):
    return [binom(a + m - 1, m) * binom(m - a, m) * binom(b + m - 1, m) * binom(m - b, m)
            for m in range(M)]


def _p11_B(a, b, M):
    out = []
    for m in range(M):
        s = Fraction(0)
        for l in range(m + 1):
            s += (-1) ** l * binom(-b, m - l) * pfq_terminating([a, -l, 1 - a], [1, b - l], l) \
                / (b - l - 1)
        out.append((b - 1) / Fraction(m + 1) * binom(1 + m - b, m) * s)
    return out


def _p11_C(a, b, M, gamma):
    out = [Fraction(1)] * M
    for c in (1 - a, a, 1 - b, b):
        r = beta_ratios(gamma, c, M)
        out = [out[m] * r[m] for m in range(M)]
    return out


def _beta_product(args, M):
    """prod_i B(x_i + m, y_i) / B(x_i, y_i) for m < M."""
    out = [Fraction(1)] * M
    for x, y in args:
        r = beta_ratios(x, y, M)
        out = [out[m] * r[m] for m in range(M)]
    return out


def _p12_alpha(a, b, nu, M):
    q = Fraction(1, 4)
    return _beta_product([(3 * q + a + nu, q - a), (3 * q - a + nu, q + a),
                          (3 * q + b + nu, 3 * q - b), (3 * q - b + nu, 3 * q + b)], M)


def _p12_A(a, b, M):
    half = Fraction(1, 2)
    al = _p12_alpha(a, b, -half, M)
    be = _p12_alpha(a, b, Fraction(0), M)
    return [binom(half + m, m) * sum((2 * k - half - m) * al[k] * be[m - k] for k in range(m + 1))
            for m in range(M)]


def _p12_delta(a, b, mu, M):
    q = Fraction(1, 4)
    return _beta_product([(mu - q, 3 * q - a), (mu - q, 3 * q + a),
                          (mu + q, q - b), (mu + q, q + b)], M)


def _p12_C(a, b, M, mu, nu):
    dm = _p12_delta(a, b, mu, M)
    dn = _p12_delta(a, b, nu, M)
    r = beta_ratios(nu + mu, Fraction(-1, 2), M)
    return [r[m] * sum((2 * k + mu - nu - m) * dm[k] * dn[m - k] for k in range(m + 1))
            for m in range(M)]


def _p22_A(a, b, M):
    return [binom(m - Fraction(1, 2), m)
            * sum(binom(a + k - 1, k) * binom(b + k - 1, k) * binom(m - k - a, m - k)
                  * binom(m - k - b, m - k) for k in range(m + 1))
            for m in range(M)]


def _p22_B(a, b, M):
    half = Fraction(1, 2)
    r = beta_ratios(2 - a - b, half, M)
    s = beta_ratios(1 - b, 1 - a, M)
    al = [pfq_terminating([-l, 1 - b, 1 - a, a - 1 - l + b], [b - l, a - l, 2 - a - b], l)
          for l in range(M)]
    return [r[m] * sum(s[l] * al[l] * binom(-half, m - l) * binom(a - 1, l) for l in range(m + 1))
            for m in range(M)]


def _p22_C(a, b, M, corrected=False):
    half = Fraction(1, 2)
    r = beta_ratios(1 - a + b, half, M)
    low = 1 - a + b if corrected else half - a + b
    de = [pfq_terminating([b, b, -l], [low, half * (1 + a + b) - l], l)
          * binom(-half * (1 + a + b) + l, l) for l in range(M)]
    return [r[m] * sum(de[l] * de[m - l] for l in range(m + 1)) for m in range(M)]


def _p21_A(a, b, M):
    return [binom(b + m - 1, m) * binom(m - b, m)
            * sum(binom(a + m - k - 1, m - k) ** 2 * binom(k - a, k) for k in range(m + 1))
            for m in range(M)]


def _p21_B(a, b, M, gamma, corrected=False):
    r = beta_ratios(1 + gamma - b, b, M)
    s = beta_ratios(1 - b, gamma if corrected else -gamma, M)
    low = 2 * gamma if corrected else 1 + gamma
    al = [pfq_terminating([-l, gamma, gamma], [low, b - l], l) for l in range(M)]
    # binom(l-1+gamma, gamma-1) = (gamma)_l / l!
    return [r[m] * sum((-1) ** l * al[l] * s[l] * binom(-b, m - l) * poch(gamma, l)
                       / poch(1, l) for l in range(m + 1))
            for m in range(M)]


def _check_params(family, a, b):
    quarter = {Fraction(1, 4), Fraction(3, 4)}
    if family == "P1_4_8_4":
        if a % 1 in quarter or b % 1 in quarter:
            raise ParameterExcluded("a, b must avoid 1/4 + Z and 3/4 + Z")
    elif a.denominator == 1 or b.denominator == 1:
        raise ParameterExcluded("a, b must not be integers")


@lru_cache(maxsize=None)
def special_series(family, role, a, b, M, branch=None, corrected=False):
    """Printed special-solution coefficients, normalized to start with 1.

    Returns (point, exponent, coefficients). branch selects gamma for
    P1_4_10_4/C and P2_4_6_8/B, (mu, nu) for P1_4_8_4/C, and "1-a,1-b" for the
    swapped P2_4_6_6 solutions.

    corrected=True swaps in the parameters that actually solve the operator
    for P2_4_6_6/C (3F2 lower parameter 1-a+b) and P2_4_6_8/B (3F2 lower
    parameter 2*gamma, Beta factor B(1-b+l, gamma)); elsewhere it is a no-op.
    """
    a, b = _rat(a), _rat(b)
    _check_params(family, a, b)
    half = Fraction(1, 2)
    if family == "P1_4_10_4":
        if role == "A":
            return 0, Fraction(0), tuple(_p11_A(a, b, M))
        if role == "B":
            return 1, Fraction(1), tuple(_normalize_list(_p11_B(a, b, M)))
        if role == "C":
            g = _rat(branch if branch is not None else a)
            return INF, g, tuple(_p11_C(a, b, M, g))
    if family == "P1_4_8_4":
        if role == "A":
            return 0, Fraction(0), tuple(_normalize_list(_p12_A(a, b, M)))
        if role == "C":
            mu, nu = branch if branch is not None else (half + a, half + b)
            mu, nu = _rat(mu), _rat(nu)
            return INF, mu + nu, tuple(_normalize_list(_p12_C(a, b, M, mu, nu)))
    if family == "P2_4_6_6":
        if branch == "1-a,1-b":
            a, b = 1 - a, 1 - b
        if role == "A":
            return 0, Fraction(0), tuple(_p22_A(a, b, M))
        if role == "B":
            return 1, Fraction(3, 2) - a - b, tuple(_normalize_list(_p22_B(a, b, M)))
        if role == "C":
            return INF, 1 - a + b, tuple(_normalize_list(_p22_C(a, b, M, corrected)))
    if family == "P2_4_6_8":
        if role == "A":
            return 0, Fraction(0), tuple(_p21_A(a, b, M))
        if role == "B":
            g = _rat(branch if branch is not None else a)
            return 1, g, tuple(_normalize_list(_p21_B(a, b, M, g, corrected)))
    raise ValueError("no printed %s-coefficients for %s" % (role, family))


def special_coeffs(family, role, a, b, m, branch=None, corrected=False):
    """The m-th printed coefficient, normalized so that m = 0 gives 1."""
    return special_series(family, role, _rat(a), _rat(b), m + 1, branch, corrected)[2][m]


def special_solution(family, role, a, b, M, branch=None, corrected=False):
    p, e, cs = special_series(family, role, _rat(a), _rat(b), M, branch, corrected)
    return LocalSolution(p, e, [list(cs)])
