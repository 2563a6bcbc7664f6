"""Exact arithmetic: rationals, cyclotomic numbers, the parameter field
Q(a, b), dense matrices over any of them, and Jordan data of
quasi-unipotent matrices.

Nothing in here touches floating point.  Cyclotomic numbers are stored
as integer coefficient vectors over the power basis of Q(zeta_N) with a
common denominator; the minimal conductor is recovered on demand
(printing, hashing, ``canonical``) rather than after every operation.
"""

from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm

import sympy
from sympy import QQ


Rat = Fraction


class NonQuasiUnipotent(ValueError):
    pass


class NonCyclotomicFactor(ValueError):
    pass


class SpecializationPole(ZeroDivisionError):
    pass


class ParseError(ValueError):
    pass


def as_rat(x):
    """Exact rational from int, Fraction or a string like '-3/4'.

    Floats are refused on purpose: every number entering the library
    must be exact.
    """
    if isinstance(x, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip()
        if any(c in s for c in ".eE") or not s:
            raise ParseError("not an exact rational: %r" % x)
        try:
            return Fraction(s)
        except ValueError:
            raise ParseError("not an exact rational: %r" % x) from None
    if hasattr(x, "numerator") and hasattr(x, "denominator") and not isinstance(x, float):
        return Fraction(int(x.numerator), int(x.denominator))
    raise TypeError("cannot convert %r to an exact rational" % (x,))


def format_rat(q):
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return "%d/%d" % (q.numerator, q.denominator)


# ---------------------------------------------------------------------------
# elementary number theory

def totient(n):
    result = n
    p = 2
    m = n
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def prime_factors(n):
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def divisors(n):
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def _pdiv_exact(num, den):
    """Exact quotient of integer polynomials (low to high), den monic."""
    num = list(num)
    q = [0] * (len(num) - len(den) + 1)
    for i in range(len(q) - 1, -1, -1):
        c = num[i + len(den) - 1]
        q[i] = c
        if c:
            for j, d in enumerate(den):
                num[i + j] -= c * d
    assert not any(num[: len(den) - 1]), "inexact cyclotomic division"
    return q


@lru_cache(maxsize=None)
def cyclotomic_poly(n):
    """Integer coefficients of Phi_n, lowest degree first."""
    p = [-1] + [0] * (n - 1) + [1]
    for d in divisors(n)[:-1]:
        p = _pdiv_exact(p, cyclotomic_poly(d))
    return tuple(p)


@lru_cache(maxsize=None)
def _power_table(n):
    """x^e mod Phi_n for e = 0 .. n-1, as integer vectors of length phi(n)."""
    phi = cyclotomic_poly(n)
    deg = len(phi) - 1
    rows = []
    cur = [1] + [0] * (deg - 1)
    for _ in range(n):
        rows.append(tuple(cur))
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for j in range(deg):
                cur[j] -= top * phi[j]
    return tuple(rows)


# ---------------------------------------------------------------------------
# roots of unity (possibly with generic symbolic factors)

class RootOfUnity:
    """exp(2*pi*i*e) with e in [0, 1), optionally times a monomial in
    generic roots of unity such as x or y^-1.

    The generic symbols stand for roots of unity subject to the usual
    genericity conditions (no unexpected coincidences).  Concrete
    eigenvalues never carry symbols.
    """

    __slots__ = ("exponent", "symbols")

    def __init__(self, exponent, symbols=()):
        e = as_rat(exponent)
        object.__setattr__(self, "exponent", e - (e.numerator // e.denominator))
        syms = {}
        for name, k in symbols:
            syms[name] = syms.get(name, 0) + k
        object.__setattr__(
            self, "symbols", tuple(sorted((s, k) for s, k in syms.items() if k)))

    def __setattr__(self, *args):
        raise AttributeError("RootOfUnity is immutable")

    @classmethod
    def generic(cls, name, power=1):
        return cls(0, ((name, power),))

    @property
    def is_concrete(self):
        return not self.symbols

    @property
    def order(self):
        if self.symbols:
            raise ValueError("generic root of unity has no fixed order")
        return self.exponent.denominator

    def is_one(self):
        return self.exponent == 0 and not self.symbols

    def __mul__(self, other):
        if not isinstance(other, RootOfUnity):
            return NotImplemented
        return RootOfUnity(self.exponent + other.exponent, self.symbols + other.symbols)

    def inverse(self):
        return RootOfUnity(-self.exponent, tuple((s, -k) for s, k in self.symbols))

    def __truediv__(self, other):
        return self * other.inverse()

    def __pow__(self, k):
        return RootOfUnity(self.exponent * k, tuple((s, v * k) for s, v in self.symbols))

    def __eq__(self, other):
        if isinstance(other, int) and other == 1:
            return self.is_one()
        if not isinstance(other, RootOfUnity):
            return NotImplemented
        return self.exponent == other.exponent and self.symbols == other.symbols

    def __hash__(self):
        return hash((self.exponent, self.symbols))

    def __lt__(self, other):
        return self._key() < other._key()

    def _key(self):
        return (self.symbols, self.exponent)

    def value(self):
        if self.symbols:
            raise ValueError("cannot evaluate a generic root of unity")
        return root_of_unity_value(self.exponent)

    def __str__(self):
        e = self.exponent
        named = {Fraction(0): "", Fraction(1, 2): "-", Fraction(1, 4): "i",
                 Fraction(3, 4): "-i"}
        if not self.symbols:
            if e == 0:
                return "1"
            if e == Fraction(1, 2):
                return "-1"
            if e in named:
                return named[e]
            return "e(%s)" % format_rat(e)
        mono = "*".join(s if k == 1 else "%s^%d" % (s, k) for s, k in self.symbols)
        if e in named:
            pre = named[e]
            if pre in ("", "-"):
                return pre + mono
            return pre + "*" + mono
        return "e(%s)*%s" % (format_rat(e), mono)

    __repr__ = __str__


def root_of_unity_value(e):
    """exp(2*pi*i*e) as an exact cyclotomic number."""
    e = as_rat(e)
    e = e - (e.numerator // e.denominator)
    return CycloNum.zeta(e.denominator, e.numerator).canonical()


# ---------------------------------------------------------------------------
# cyclotomic numbers

class CycloNum:
    """Element of Q(zeta_N) in the power basis 1, zeta_N, ..., zeta_N^(phi-1).

    Stored as integer numerators over one positive denominator.
    """

    __slots__ = ("n", "num", "den")

    def __init__(self, n, coeffs):
        coeffs = [as_rat(c) for c in coeffs]
        deg = len(cyclotomic_poly(n)) - 1
        if len(coeffs) < deg:
            coeffs = coeffs + [Fraction(0)] * (deg - len(coeffs))
        if len(coeffs) > deg:
            # reduce an over-long power expansion
            vec = [Fraction(0)] * deg
            table = _power_table(n)
            for k, c in enumerate(coeffs):
                if c:
                    row = table[k % n]
                    for j in range(deg):
                        if row[j]:
                            vec[j] += c * row[j]
            coeffs = vec
        d = lcm(*[c.denominator for c in coeffs]) if coeffs else 1
        self._set(n, [int(c * d) for c in coeffs], d)

    def _set(self, n, num, den):
        g = gcd(den, *num)
        if g > 1:
            num = [c // g for c in num]
            den //= g
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "num", tuple(num))
        object.__setattr__(self, "den", den)

    def __setattr__(self, *args):
        raise AttributeError("CycloNum is immutable")

    @classmethod
    def _raw(cls, n, num, den):
        obj = object.__new__(cls)
        if den < 0:
            num = [-c for c in num]
            den = -den
        obj._set(n, num, den)
        return obj

    @classmethod
    def from_rational(cls, q):
        q = as_rat(q)
        return cls._raw(1, [q.numerator], q.denominator)

    @classmethod
    def zeta(cls, n, k=1):
        table = _power_table(n)
        return cls._raw(n, list(table[k % n]), 1)

    @property
    def conductor(self):
        return self.n

    def coefficients(self):
        return [Fraction(c, self.den) for c in self.num]

    # -- embedding between conductors
    def embed(self, m):
        if m == self.n:
            return self
        if m % self.n:
            raise ValueError("Q(zeta_%d) does not embed in Q(zeta_%d)" % (self.n, m))
        step = m // self.n
        table = _power_table(m)
        out = [0] * len(table[0])
        for k, c in enumerate(self.num):
            if c:
                row = table[(k * step) % m]
                for j, r in enumerate(row):
                    if r:
                        out[j] += c * r
        return CycloNum._raw(m, out, self.den)

    @staticmethod
    def _coerce(x):
        if isinstance(x, CycloNum):
            return x
        if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
            return CycloNum.from_rational(x)
        return None

    def _pair(self, other):
        if self.n == other.n:
            return self, other
        m = lcm(self.n, other.n)
        return self.embed(m), other.embed(m)

    # -- arithmetic
    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        x, y = self._pair(other)
        num = [a * y.den + b * x.den for a, b in zip(x.num, y.num)]
        return CycloNum._raw(x.n, num, x.den * y.den)

    __radd__ = __add__

    def __neg__(self):
        return CycloNum._raw(self.n, [-c for c in self.num], self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            q = Fraction(other)
            return CycloNum._raw(self.n, [c * q.numerator for c in self.num],
                                 self.den * q.denominator)
        if not isinstance(other, CycloNum):
            return NotImplemented
        x, y = self._pair(other)
        n = x.n
        deg = len(x.num)
        prod = [0] * (2 * deg - 1)
        for i, a in enumerate(x.num):
            if a:
                for j, b in enumerate(y.num):
                    if b:
                        prod[i + j] += a * b
        out = prod[:deg]
        if len(prod) > deg:
            table = _power_table(n)
            for k in range(deg, len(prod)):
                c = prod[k]
                if c:
                    row = table[k % n]
                    for j, r in enumerate(row):
                        if r:
                            out[j] += c * r
        return CycloNum._raw(n, out, x.den * y.den)

    __rmul__ = __mul__

    def galois(self, k):
        """The automorphism zeta_N -> zeta_N^k (k coprime to N)."""
        table = _power_table(self.n)
        out = [0] * len(self.num)
        for e, c in enumerate(self.num):
            if c:
                for j, r in enumerate(table[(e * k) % self.n]):
                    if r:
                        out[j] += c * r
        return CycloNum._raw(self.n, out, self.den)

    def conjugate(self):
        return self.galois(-1)

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a cyclotomic field")
        if self.is_rational():
            q = self.to_rational()
            return CycloNum.from_rational(1 / q)
        rest = None
        for k in range(2, self.n):
            if gcd(k, self.n) == 1:
                g = self.galois(k)
                rest = g if rest is None else rest * g
        norm = (self * rest).to_rational()
        return rest * (1 / norm)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self * (1 / Fraction(other))
        if not isinstance(other, CycloNum):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        result = CycloNum.from_rational(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- predicates
    def is_zero(self):
        return not any(self.num)

    def is_rational(self):
        return not any(self.num[1:])

    def to_rational(self):
        if not self.is_rational():
            raise ValueError("%s is not rational" % self)
        return Fraction(self.num[0], self.den)

    def is_rational_integer(self):
        return self.is_rational() and self.num[0] % self.den == 0

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        c = self.canonical()
        if c.n == 1:
            return hash(Fraction(c.num[0], c.den))
        return hash((c.n, c.num, c.den))

    # -- minimal conductor
    def canonical(self):
        """The same number written over its smallest cyclotomic field."""
        if self.is_rational():
            if self.n == 1:
                return self
            return CycloNum._raw(1, [self.num[0]], self.den)
        for d in divisors(self.n)[1:-1]:
            if d % 4 == 2:
                continue
            found = self._restrict(d)
            if found is not None:
                return found
        if self.n % 4 == 2:
            return self._restrict(self.n // 2) or self
        return self

    def _restrict(self, d):
        n = self.n
        for k in range(1, n):
            if k % d == 1 % d and gcd(k, n) == 1 and k != 1:
                if self.galois(k) != self:
                    return None
        phi_d = len(cyclotomic_poly(d)) - 1
        cols = [CycloNum.zeta(d, j).embed(n).num for j in range(phi_d)]
        rows = [[Fraction(cols[j][i]) for j in range(phi_d)] for i in range(len(self.num))]
        rhs = [Fraction(c, self.den) for c in self.num]
        sol = Matrix(rows).solve(rhs)
        if sol is None:
            return None
        return CycloNum(d, sol)

    # -- printing
    def __str__(self):
        c = self.canonical()
        if c.n == 1:
            return format_rat(Fraction(c.num[0], c.den))
        terms = []
        for k, a in enumerate(c.num):
            if not a:
                continue
            q = Fraction(a, c.den)
            if k == 0:
                terms.append(format_rat(q))
                continue
            mono = "z%d" % c.n if k == 1 else "z%d^%d" % (c.n, k)
            if q == 1:
                terms.append(mono)
            elif q == -1:
                terms.append("-" + mono)
            else:
                terms.append(format_rat(q) + "*" + mono)
        out = terms[0]
        for t in terms[1:]:
            out += ("-" + t[1:]) if t.startswith("-") else "+" + t
        return out

    def __repr__(self):
        return "CycloNum(%s)" % self


def cyclo(x):
    """Coerce int/Fraction/CycloNum to CycloNum."""
    y = CycloNum._coerce(x)
    if y is None:
        raise TypeError("not a cyclotomic number: %r" % (x,))
    return y


def conductor_of(x):
    return x.n if isinstance(x, CycloNum) else 1


# ---------------------------------------------------------------------------
# the parameter field Q(a, b)

PARAM_SYMBOLS = sympy.symbols("a b")
PARAMS = QQ.frac_field(*PARAM_SYMBOLS)


def param_gens():
    """The generators a and b of Q(a, b)."""
    return tuple(PARAMS.from_sympy(s) for s in PARAM_SYMBOLS)


def specialize(x, a, b):
    """Evaluate an element of Q(a, b) at rational (a, b)."""
    vals = [QQ(int(v.numerator), int(v.denominator)) for v in (as_rat(a), as_rat(b))]
    den = x.denom(*vals)
    if den == 0:
        raise SpecializationPole("denominator %s vanishes at a=%s, b=%s"
                                 % (x.denom.as_expr(), a, b))
    q = x.numer(*vals) / den
    return Fraction(int(q.numerator), int(q.denominator))


# ---------------------------------------------------------------------------
# dense matrices over an exact field

def _is_zero(x):
    return x == 0


def _norm_entry(x):
    if isinstance(x, int) and not isinstance(x, bool):
        return Fraction(x)
    return x


class Matrix:
    """Dense immutable matrix.  Entries may be Fractions, CycloNums or
    elements of a sympy field; they only need + - * / and == 0."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows):
        rows = tuple(tuple(_norm_entry(x) for x in r) for r in rows)
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged matrix")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "nrows", len(rows))
        object.__setattr__(self, "ncols", ncols)

    def __setattr__(self, *args):
        raise AttributeError("Matrix is immutable")

    @classmethod
    def identity(cls, n, one=Fraction(1), zero=Fraction(0)):
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, m, n, zero=Fraction(0)):
        return cls([[zero] * n for _ in range(m)])

    @classmethod
    def diag(cls, entries, zero=Fraction(0)):
        n = len(entries)
        return cls([[entries[i] if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, cols):
        return cls(list(zip(*cols)))

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def row(self, i):
        return list(self.rows[i])

    def col(self, j):
        return [r[j] for r in self.rows]

    def columns(self):
        return [self.col(j) for j in range(self.ncols)]

    def map(self, f):
        return Matrix([[f(x) for x in r] for r in self.rows])

    @property
    def T(self):
        return Matrix(list(zip(*self.rows))) if self.nrows else Matrix([])

    def __eq__(self, other):
        if not isinstance(other, Matrix) or self.shape != other.shape:
            return NotImplemented if not isinstance(other, Matrix) else False
        return all(_is_zero(a - b) for r, s in zip(self.rows, other.rows) for a, b in zip(r, s))

    def __hash__(self):
        return hash(self.shape)

    def __add__(self, other):
        return Matrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other):
        return Matrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self):
        return Matrix([[-a for a in r] for r in self.rows])

    def __mul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise ValueError("shape mismatch %s * %s" % (self.shape, other.shape))
            cols = other.columns()
            out = []
            for r in self.rows:
                nz = [(k, a) for k, a in enumerate(r) if not _is_zero(a)]
                row = []
                for c in cols:
                    acc = None
                    for k, a in nz:
                        b = c[k]
                        if not _is_zero(b):
                            acc = a * b if acc is None else acc + a * b
                    row.append(Fraction(0) if acc is None else acc)
                out.append(row)
            return Matrix(out)
        return Matrix([[a * other for a in r] for r in self.rows])

    def __rmul__(self, other):
        return Matrix([[other * a for a in r] for r in self.rows])

    def apply(self, vec):
        out = []
        for r in self.rows:
            acc = Fraction(0)
            for a, v in zip(r, vec):
                if not _is_zero(a) and not _is_zero(v):
                    acc = a * v + acc
            out.append(acc)
        return out

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        result = Matrix.identity(self.nrows)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def trace(self):
        acc = Fraction(0)
        for i in range(self.nrows):
            acc = self.rows[i][i] + acc
        return acc

    def is_identity(self):
        return all(_is_zero(self.rows[i][j] - (1 if i == j else 0))
                   for i in range(self.nrows) for j in range(self.ncols))

    def kron(self, other):
        return Matrix([[a * b for a in ra for b in rb]
                       for ra in self.rows for rb in other.rows])

    def hstack(self, other):
        return Matrix([r + s for r, s in zip(self.rows, other.rows)])

    def vstack(self, other):
        return Matrix(self.rows + other.rows)

    def submatrix(self, rows, cols):
        return Matrix([[self.rows[i][j] for j in cols] for i in rows])

    # -- elimination
    def rref(self):
        """Reduced row echelon form and pivot columns (first nonzero pivot)."""
        a = [list(r) for r in self.rows]
        pivots = []
        i = 0
        for j in range(self.ncols):
            p = None
            for k in range(i, self.nrows):
                if not _is_zero(a[k][j]):
                    p = k
                    break
            if p is None:
                continue
            a[i], a[p] = a[p], a[i]
            piv = a[i][j]
            inv = 1 / piv if not isinstance(piv, CycloNum) else piv.inverse()
            a[i] = [x * inv if not _is_zero(x) else x for x in a[i]]
            for k in range(self.nrows):
                if k != i:
                    f = a[k][j]
                    if not _is_zero(f):
                        rowi = a[i]
                        a[k] = [x - f * y if not _is_zero(y) else x for x, y in zip(a[k], rowi)]
            pivots.append(j)
            i += 1
            if i == self.nrows:
                break
        return Matrix(a) if a else self, pivots

    def rank(self):
        return len(self.rref()[1])

    def kernel_basis(self):
        r, pivots = self.rref()
        free = [j for j in range(self.ncols) if j not in pivots]
        zero, one = Fraction(0), Fraction(1)
        basis = []
        for f in free:
            v = [zero] * self.ncols
            v[f] = one
            for i, p in enumerate(pivots):
                v[p] = -r.rows[i][f]
            basis.append(v)
        return basis

    def solve(self, rhs):
        """One solution x of self * x = rhs, or None."""
        aug = self.hstack(Matrix([[x] for x in rhs]))
        r, pivots = aug.rref()
        if self.ncols in pivots:
            return None
        x = [Fraction(0)] * self.ncols
        for i, p in enumerate(pivots):
            x[p] = r.rows[i][self.ncols]
        return x

    def inverse(self):
        n = self.nrows
        aug = self.hstack(Matrix.identity(n))
        r, pivots = aug.rref()
        if pivots[:n] != list(range(n)):
            raise ZeroDivisionError("singular matrix")
        return r.submatrix(range(n), range(n, 2 * n))

    def det(self):
        a = [list(r) for r in self.rows]
        n = self.nrows
        d = Fraction(1)
        for j in range(n):
            p = next((k for k in range(j, n) if not _is_zero(a[k][j])), None)
            if p is None:
                return Fraction(0)
            if p != j:
                a[j], a[p] = a[p], a[j]
                d = -d
            piv = a[j][j]
            d = d * piv
            for k in range(j + 1, n):
                f = a[k][j]
                if not _is_zero(f):
                    f = f / piv
                    a[k] = [x - f * y for x, y in zip(a[k], a[j])]
        return d

    def charpoly(self):
        """Coefficients of det(x*1 - M), lowest degree first (Faddeev-LeVerrier)."""
        n = self.nrows
        coeffs = [Fraction(0)] * (n + 1)
        coeffs[n] = Fraction(1)
        ident = Matrix.identity(n)
        m = Matrix.zeros(n, n)
        for k in range(1, n + 1):
            m = self * m + ident * coeffs[n - k + 1]
            coeffs[n - k] = -(self * m).trace() / k
        return coeffs

    def __str__(self):
        return "[" + ",\n ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.rows) + "]"

    __repr__ = __str__


def rank(m):
    return m.rank()


def kernel_basis(m):
    return m.kernel_basis()


def solve_linear(m, rhs):
    return m.solve(rhs)


def char_poly(m):
    return m.charpoly()


def matrix_conductor(m):
    return lcm(1, *[conductor_of(x) for r in m.rows for x in r])


# ---------------------------------------------------------------------------
# polynomials with exact coefficients (lowest degree first)

def _poly_trim(p):
    p = list(p)
    while p and _is_zero(p[-1]):
        p.pop()
    return p


def _poly_mul(p, q):
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if _is_zero(a):
            continue
        for j, b in enumerate(q):
            if not _is_zero(b):
                out[i + j] = out[i + j] + a * b
    return out


def _poly_eval(p, x):
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _poly_divmod_monic(p, d):
    p = list(p)
    q = [Fraction(0)] * max(len(p) - len(d) + 1, 0)
    for i in range(len(q) - 1, -1, -1):
        c = p[i + len(d) - 1]
        q[i] = c
        if c:
            for j, e in enumerate(d):
                p[i + j] -= c * e
    return q, _poly_trim(p[: len(d) - 1])


def cyclotomic_factor(p, bound=120):
    """Write a monic rational polynomial as a product of Phi_d, d <= bound.

    Returns [(d, multiplicity), ...]; raises NonCyclotomicFactor if a
    nontrivial cofactor remains.
    """
    p = _poly_trim([as_rat(c) for c in p])
    if not p or p[-1] != 1:
        raise ValueError("cyclotomic_factor expects a monic polynomial")
    out = []
    for d in range(1, bound + 1):
        if len(p) <= 1:
            break
        if totient(d) > len(p) - 1:
            continue
        phi = cyclotomic_poly(d)
        mult = 0
        while len(p) - 1 >= len(phi) - 1:
            q, r = _poly_divmod_monic(p, phi)
            if r:
                break
            p = q
            mult += 1
        if mult:
            out.append((d, mult))
    if len(p) > 1:
        raise NonCyclotomicFactor("non-cyclotomic factor %s" % p)
    return out


def rational_norm_poly(coeffs):
    """Norm down to Q of a polynomial with cyclotomic coefficients."""
    n = lcm(1, *[conductor_of(c) for c in coeffs])
    if n <= 2:
        return [as_rat(c) if not isinstance(c, CycloNum) else c.to_rational() for c in coeffs]
    cs = [cyclo(c).embed(n) for c in coeffs]
    acc = None
    for k in range(1, n):
        if gcd(k, n) == 1:
            conj = [c.galois(k) for c in cs]
            acc = conj if acc is None else _poly_mul(acc, conj)
    return [cyclo(c).to_rational() for c in acc]


# ---------------------------------------------------------------------------
# Jordan data

class JordanForm:
    """Jordan type of one matrix: multiset of (eigenvalue, block size).

    Eigenvalues are RootOfUnity instances (possibly generic).
    """

    __slots__ = ("blocks",)

    def __init__(self, blocks):
        acc = {}
        for eig, size, mult in blocks:
            if size <= 0 or mult < 0:
                raise ValueError("bad Jordan block (%s, %s, %s)" % (eig, size, mult))
            if mult:
                acc[(eig, size)] = acc.get((eig, size), 0) + mult
        items = sorted(((e, s, m) for (e, s), m in acc.items()),
                       key=lambda t: (t[0]._key(), -t[1]))
        object.__setattr__(self, "blocks", tuple(items))

    def __setattr__(self, *args):
        raise AttributeError("JordanForm is immutable")

    @classmethod
    def from_spec(cls, *parts):
        """JordanForm.from_spec((eig, size), (eig, size), ...) with eig a
        RootOfUnity or a rational exponent."""
        out = []
        for eig, size in parts:
            if not isinstance(eig, RootOfUnity):
                eig = RootOfUnity(eig)
            out.append((eig, size, 1))
        return cls(out)

    @property
    def dim(self):
        return sum(s * m for _, s, m in self.blocks)

    def eigenvalues(self):
        seen = []
        for e, _, _ in self.blocks:
            if e not in seen:
                seen.append(e)
        return seen

    def at(self, eig):
        """{size: multiplicity} for one eigenvalue."""
        return {s: m for e, s, m in self.blocks if e == eig}

    def geometric(self, eig):
        return sum(m for e, _, m in self.blocks if e == eig)

    def rank_minus(self, eig):
        """rank(T - eig) for T of this Jordan type."""
        return self.dim - self.geometric(eig)

    def scaled(self, mu):
        return JordanForm([(e * mu, s, m) for e, s, m in self.blocks])

    def centralizer_dim_gl(self):
        total = 0
        for eig in self.eigenvalues():
            sizes = self.at(eig)
            for j, v in sizes.items():
                for k, w in sizes.items():
                    total += min(j, k) * v * w
        return total

    def is_unipotent(self):
        return all(e.is_one() for e, _, _ in self.blocks)

    def __eq__(self, other):
        return isinstance(other, JordanForm) and self.blocks == other.blocks

    def __hash__(self):
        return hash(self.blocks)

    def __str__(self):
        parts = []
        for e, s, m in self.blocks:
            es = str(e)
            if s == 1:
                piece = es
            elif es == "1":
                piece = "J(%d)" % s
            elif es == "-1":
                piece = "-J(%d)" % s
            else:
                piece = "%s*J(%d)" % (es, s)
            parts.extend([piece] * m)
        return "(" + ",".join(parts) + ")"

    __repr__ = __str__


def _root_candidates(charpoly_coeffs, bound):
    norm = rational_norm_poly(charpoly_coeffs)
    lead = norm[-1]
    norm = [c / lead for c in norm]
    orders = [d for d, _ in cyclotomic_factor(norm, bound)]
    n = lcm(1, *[conductor_of(c) for c in charpoly_coeffs])
    found = []
    for d in orders:
        for k in range(d):
            if gcd(k, d) != 1:
                continue
            rho = CycloNum.zeta(d, k)
            m = lcm(n, d)
            val = _poly_eval([cyclo(c).embed(m) for c in charpoly_coeffs], rho.embed(m))
            if val.is_zero():
                found.append(RootOfUnity(Fraction(k, d)))
    return found


def jordan_data(m, bound=120):
    """Jordan type of a quasi-unipotent matrix via rank profiles.

    v(rho, j) = r_{j-1} - 2 r_j + r_{j+1} with r_k = rank((M - rho)^k).
    """
    n = m.nrows
    coeffs = m.charpoly()
    try:
        eigs = _root_candidates(coeffs, bound)
    except NonCyclotomicFactor as exc:
        raise NonQuasiUnipotent(str(exc)) from None
    blocks = []
    total = 0
    for rho in eigs:
        shifted = m - Matrix.identity(n) * rho.value()
        ranks = [n]
        power = Matrix.identity(n)
        while True:
            power = power * shifted
            ranks.append(power.rank())
            if ranks[-1] == ranks[-2]:
                break
        ranks.append(ranks[-1])
        for j in range(1, len(ranks) - 1):
            v = ranks[j - 1] - 2 * ranks[j] + ranks[j + 1]
            if v:
                blocks.append((rho, j, v))
                total += j * v
    if total != n:
        raise NonQuasiUnipotent("eigenvalues found account for %d of %d dimensions"
                                % (total, n))
    return JordanForm(blocks)
