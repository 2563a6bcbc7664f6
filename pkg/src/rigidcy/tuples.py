"""Monodromy tuples and the operations on them: convolution, middle
convolution, middle tensor and Hadamard products, exterior and symmetric
powers, invariant bilinear forms, equivalence testing and the Scott /
dimension-count irreducibility tests.

Matrices are exactalg.Matrix over Q or a cyclotomic field.  Scalars such
as lambda may be given as RootOfUnity, CycloNum or rationals.
"""

from fractions import Fraction
from itertools import combinations, combinations_with_replacement, product
import random

from .exactalg import (CycloNum, JordanForm, Matrix, RootOfUnity, cyclo,
                       jordan_data)

INF = "inf"


class DegenerateInput(ValueError):
    pass


class OrderConflict(ValueError):
    pass


class NoSkewForm(ValueError):
    pass


class Inconclusive(Exception):
    pass


class UnknownClass(ValueError):
    pass


def scalar_value(x):
    """RootOfUnity / CycloNum / int / Fraction -> exact field element."""
    if isinstance(x, RootOfUnity):
        return x.value()
    if isinstance(x, CycloNum):
        return x.canonical()
    return Fraction(x)


def _ident(n):
    return Matrix.identity(n)


def _is_scalar_one(x):
    return x == 1


class MonodromyTuple:
    """Points (s_1, ..., s_r, inf) and matrices (T_1, ..., T_{r+1}) whose
    product is the identity."""

    def __init__(self, points, matrices, check=True):
        points = tuple(points)
        matrices = tuple(matrices)
        if len(points) != len(matrices):
            raise ValueError("need one matrix per point")
        if len(points) < 2 or points[-1] != INF:
            raise ValueError("points must end with inf")
        if len(set(points)) != len(points):
            raise ValueError("points must be distinct")
        n = matrices[0].nrows
        if any(m.shape != (n, n) for m in matrices):
            raise ValueError("all matrices must be square of the same size")
        self.points = points
        self.matrices = matrices
        if check:
            prod = _ident(n)
            for m in matrices:
                prod = prod * m
            if not prod.is_identity():
                raise ValueError("product of the tuple is not the identity")

    @property
    def rank(self):
        return self.matrices[0].nrows

    @property
    def r(self):
        return len(self.points) - 1

    def __len__(self):
        return len(self.matrices)

    def __getitem__(self, i):
        return self.matrices[i]

    def at(self, point):
        return self.matrices[self.points.index(point)]

    def map(self, f):
        return MonodromyTuple(self.points, [f(m) for m in self.matrices], check=False)

    def conjugate(self, s):
        """(S T_i S^-1)_i"""
        si = s.inverse()
        return self.map(lambda m: s * m * si)

    def dual(self):
        return MonodromyTuple(self.points, [m.inverse().T for m in self.matrices])

    def jordan(self):
        return [jordan_data(m) for m in self.matrices]

    def __eq__(self, other):
        return (isinstance(other, MonodromyTuple) and self.points == other.points
                and all(a == b for a, b in zip(self.matrices, other.matrices)))

    def __repr__(self):
        return "MonodromyTuple(points=%r, rank=%d)" % (self.points, self.rank)


def rank_one_tuple(points, scalars):
    """Rank-one tuple from scalars (RootOfUnity, CycloNum or rationals)
    attached to the given points; the product must be 1."""
    mats = [Matrix([[scalar_value(s)]]) for s in scalars]
    return MonodromyTuple(points, mats)


def trivial_tuple(points, n=1):
    return MonodromyTuple(points, [_ident(n)] * len(points))


# ---------------------------------------------------------------------------
# convolution

class ConvolutionData:
    def __init__(self, tuple_, lam, blocks, kspace, lspace):
        self.tuple = tuple_
        self.lam = lam
        self.B = blocks
        self.K = kspace
        self.L = lspace

    @property
    def dim(self):
        return self.tuple.rank * self.tuple.r


def _block_matrix(blocks):
    rows = []
    for brow in blocks:
        for i in range(brow[0].nrows):
            row = []
            for b in brow:
                row.extend(b.rows[i])
            rows.append(row)
    return Matrix(rows)


def convolution(T, lam):
    """The convolution (B_1, ..., B_{r+1}) on V^r with the subspaces K, L."""
    lam = scalar_value(lam)
    if lam == 0:
        raise DegenerateInput("lambda must be nonzero")
    n, r = T.rank, T.r
    one = _ident(n)
    zero = Matrix.zeros(n, n)
    bs = []
    for k in range(r):
        blocks = []
        for i in range(r):
            if i != k:
                blocks.append([one if j == i else zero for j in range(r)])
                continue
            row = []
            for j in range(r):
                if j < k:
                    row.append((T[j] - one) * lam)
                elif j == k:
                    row.append(T[j] * lam)
                else:
                    row.append(T[j] - one)
            blocks.append(row)
        bs.append(_block_matrix(blocks))
    prod = _ident(n * r)
    for b in bs:
        prod = prod * b
    bs.append(prod.inverse())
    kspace = []
    for k in range(r):
        for v in (T[k] - one).kernel_basis():
            w = [Fraction(0)] * (n * r)
            w[k * n:(k + 1) * n] = v
            kspace.append(w)
    lspace = (prod - _ident(n * r)).kernel_basis()
    return ConvolutionData(T, lam, bs, kspace, lspace)


def displayed_l_space(T, lam):
    """Span of (T_2...T_r v, T_3...T_r v, ..., v) for v in
    ker(lam T_1...T_r - 1); equals L when lam != 1."""
    lam = scalar_value(lam)
    n, r = T.rank, T.r
    prod = _ident(n)
    for m in T.matrices[:r]:
        prod = prod * m
    out = []
    for v in (prod * lam - _ident(n)).kernel_basis():
        pieces = []
        for k in range(r):
            tail = _ident(n)
            for m in T.matrices[k + 1:r]:
                tail = tail * m
            pieces.extend(tail.apply(v))
        out.append(pieces)
    return out


def _column_space_basis(vectors, dim):
    if not vectors:
        return []
    m = Matrix.from_columns(vectors)
    _, piv = m.rref()
    return [vectors[j] for j in piv]


def _quotient(blocks, sub, dim):
    """Action of each matrix on V / sub where sub is invariant."""
    sub = _column_space_basis(sub, dim)
    k = len(sub)
    if k == dim:
        return []
    aug = Matrix.from_columns(sub + [[Fraction(int(i == j)) for i in range(dim)]
                                     for j in range(dim)]) if sub else _ident(dim)
    _, piv = aug.rref()
    extra = [j - k for j in piv if j >= k]
    cols = sub + [[Fraction(int(i == j)) for i in range(dim)] for j in extra]
    p = Matrix.from_columns(cols)
    pinv = p.inverse()
    rng = range(k, dim)
    return [(pinv * b * p).submatrix(rng, rng) for b in blocks]


def _check_mc_input(T):
    if T.rank == 1:
        nontrivial = sum(1 for m in T.matrices[:-1] if not m.is_identity())
        if nontrivial < 2:
            raise DegenerateInput("rank one input needs two nontrivial finite entries")


def middle_convolution(T, lam, check=True):
    """MC_lambda(T): the action of the B_k on V^r / (K + L)."""
    if check:
        _check_mc_input(T)
        witness = invariant_subspace_probe(T)
        if witness is not None:
            raise DegenerateInput("input tuple is reducible (invariant subspace of dim %d)"
                                  % len(witness))
    data = convolution(T, lam)
    mats = _quotient(data.B, data.K + data.L, data.dim)
    if not mats:
        raise DegenerateInput("middle convolution is zero-dimensional")
    return MonodromyTuple(T.points, mats)


def mc_rank_formula(T, lam):
    """sum rk(T_k - 1) - (n - rk(lam T_1...T_r - 1)) for lam != 1."""
    lam = scalar_value(lam)
    n = T.rank
    prod = _ident(n)
    for m in T.matrices[:-1]:
        prod = prod * m
    total = sum((m - _ident(n)).rank() for m in T.matrices[:-1])
    return total - (n - (prod * lam - _ident(n)).rank())


# ---------------------------------------------------------------------------
# middle tensor and Hadamard products

def merge_points(a, b):
    """Merge two point orders (inf last) into one linear order that
    restricts to both, preferring the first order on ties."""
    fa = [p for p in a if p != INF]
    fb = [p for p in b if p != INF]
    out = []
    i = j = 0
    while i < len(fa) or j < len(fb):
        if i < len(fa) and fa[i] in out:
            i += 1
            continue
        if j < len(fb) and fb[j] in out:
            j += 1
            continue
        if i < len(fa):
            head = fa[i]
            if head not in fb[j:]:
                if head in fb:
                    raise OrderConflict("point %r out of order" % (head,))
                out.append(head)
                i += 1
                continue
            if j < len(fb) and fb[j] == head:
                out.append(head)
                i += 1
                j += 1
                continue
            other = fb[j]
            if other in fa[i:]:
                raise OrderConflict("orders of %r and %r disagree" % (head, other))
            out.append(other)
            j += 1
        else:
            head = fb[j]
            if head in fa:
                raise OrderConflict("point %r out of order" % (head,))
            out.append(head)
            j += 1
    return tuple(out) + (INF,)


def pad_tuple(T, points):
    """Put T on a larger point set, inserting identities."""
    n = T.rank
    mats = []
    for p in points:
        mats.append(T.at(p) if p in T.points else _ident(n))
    return MonodromyTuple(points, mats)


def middle_tensor(T1, T2):
    pts = merge_points(T1.points, T2.points)
    a = pad_tuple(T1, pts)
    b = pad_tuple(T2, pts)
    return MonodromyTuple(pts, [x.kron(y) for x, y in zip(a.matrices, b.matrices)])


def _inverse_scalar(lam):
    if isinstance(lam, RootOfUnity):
        return lam.inverse()
    v = scalar_value(lam)
    return v.inverse() if isinstance(v, CycloNum) else 1 / v


def hadamard_seed(lam, zero=Fraction(0)):
    """The rank-one tuple (lam^-1, lam) at (0, inf)."""
    return rank_one_tuple((zero, INF), (_inverse_scalar(lam), lam))


def middle_hadamard(T, lam, check=True):
    """MH_lambda(T) = MC_lambda(MT(T, (lam^-1, lam) at (0, inf)))."""
    return middle_convolution(middle_tensor(T, hadamard_seed(lam)), lam, check=check)


def mh_rank_formula(T, lam, zero=Fraction(0)):
    """sum over entries other than T_0 of rk(T_i - 1) + rk(lam^-1 T_0 - 1) - n."""
    lam = scalar_value(lam)
    inv = lam.inverse() if isinstance(lam, CycloNum) else 1 / lam
    n = T.rank
    one = _ident(n)
    total = 0
    for p, m in zip(T.points, T.matrices):
        if p == zero:
            total += (m * inv - one).rank()
        else:
            total += (m - one).rank()
    if zero not in T.points:
        total += (one * inv - one).rank()
    return total - n


# ---------------------------------------------------------------------------
# exterior and symmetric powers

def ext_power_matrix(m, k):
    n = m.nrows
    idx = list(combinations(range(n), k))
    return Matrix([[m.submatrix(rows, cols).det() for cols in idx] for rows in idx])


def sym_power_matrix(m, k):
    n = m.nrows
    idx = list(combinations_with_replacement(range(n), k))
    pos = {t: i for i, t in enumerate(idx)}
    cols = []
    for mono in idx:
        # image of e_{i1} ... e_{ik}: product of the columns of m
        poly = {(): Fraction(1)}
        for i in mono:
            nxt = {}
            for key, c in poly.items():
                for r in range(n):
                    a = m[r, i]
                    if a == 0:
                        continue
                    nk = tuple(sorted(key + (r,)))
                    nxt[nk] = nxt.get(nk, Fraction(0)) + c * a
            poly = nxt
        col = [Fraction(0)] * len(idx)
        for key, c in poly.items():
            col[pos[key]] = c
        cols.append(col)
    return Matrix.from_columns(cols)


def ext_power(T, k):
    return MonodromyTuple(T.points, [ext_power_matrix(m, k) for m in T.matrices])


def sym_power(T, k):
    return MonodromyTuple(T.points, [sym_power_matrix(m, k) for m in T.matrices])


# ---------------------------------------------------------------------------
# invariant bilinear forms

def invariant_bilinear_forms(T):
    """Bases of the invariant symmetric and skew forms G (T^t G T = G)."""
    n = T.rank
    rows = []
    for m in T.matrices[:-1]:
        for a in range(n):
            for b in range(n):
                row = []
                for c in range(n):
                    for d in range(n):
                        v = m[c, a] * m[d, b]
                        if a == c and b == d:
                            v = v - 1
                        row.append(v)
                rows.append(row)
    sols = Matrix(rows).kernel_basis()
    forms = [Matrix([v[i * n:(i + 1) * n] for i in range(n)]) for v in sols]
    sym = _independent([g + g.T for g in forms])
    skew = _independent([g - g.T for g in forms])
    return {"symmetric": sym, "skew": skew}


def _independent(mats):
    if not mats:
        return []
    n = mats[0].nrows
    vecs = [[x for r in g.rows for x in r] for g in mats]
    basis = _column_space_basis(vecs, n * n)
    out = []
    for v in basis:
        if any(x != 0 for x in v):
            out.append(Matrix([v[i * n:(i + 1) * n] for i in range(n)]))
    return out


def form_type(T):
    forms = invariant_bilinear_forms(T)
    if forms["skew"] and not forms["symmetric"]:
        return "symplectic"
    if forms["symmetric"] and not forms["skew"]:
        return "orthogonal"
    if not forms["skew"] and not forms["symmetric"]:
        return "none"
    return "mixed"


def ext2_primitive(T):
    """Action of a symplectic rank-4 tuple on the complement of the
    invariant line inside Lambda^2."""
    forms = invariant_bilinear_forms(T)
    skew = [g for g in forms["skew"] if g.det() != 0]
    if not skew:
        raise NoSkewForm("tuple preserves no nondegenerate skew form")
    omega = skew[0]
    winv = omega.inverse()
    n = T.rank
    pairs = list(combinations(range(n), 2))
    line = [winv[i, j] for i, j in pairs]
    functional = Matrix([[omega[i, j] for i, j in pairs]])
    comp = functional.kernel_basis()
    p = Matrix.from_columns(comp + [line])
    pinv = p.inverse()
    k = len(comp)
    mats = [(pinv * ext_power_matrix(m, 2) * p).submatrix(range(k), range(k))
            for m in T.matrices]
    return MonodromyTuple(T.points, mats)


def invariant_line_in_ext2(T):
    """Vector in Lambda^2 fixed by every entry of ext_power(T, 2)."""
    ext = ext_power(T, 2)
    n = ext.rank
    rows = []
    for m in ext.matrices:
        rows.extend((m - _ident(n)).rows)
    return Matrix(rows).kernel_basis()


# ---------------------------------------------------------------------------
# irreducibility probe

def _spin(vectors, gens):
    """Smallest subspace containing the vectors and stable under gens."""
    if not vectors:
        return []
    dim = len(vectors[0])
    basis = _column_space_basis(vectors, dim)
    queue = list(basis)
    while queue:
        v = queue.pop()
        for g in gens:
            w = g.apply(v)
            cand = basis + [w]
            if len(_column_space_basis(cand, dim)) > len(basis):
                basis.append(w)
                queue.append(w)
                if len(basis) == dim:
                    return basis
    return basis


def invariant_subspace_probe(T, tries=3, seed=0):
    """Search for a proper invariant subspace by spinning eigenvectors
    of the entries (and of the dual tuple).  Returns a basis of one, or
    None if nothing was found."""
    n = T.rank
    if n == 1:
        return None
    rng = random.Random(seed)
    for tup in (T, T.dual()):
        gens = list(tup.matrices[:-1])
        for m in tup.matrices:
            try:
                jd = jordan_data(m)
            except ValueError:
                continue
            for eig in jd.eigenvalues():
                ker = (m - _ident(n) * eig.value()).kernel_basis()
                cands = list(ker)
                for _ in range(tries if len(ker) > 1 else 0):
                    cands.append([sum((x * rng.randint(-5, 5) for x in col), Fraction(0))
                                  for col in zip(*ker)])
                for v in cands:
                    if all(x == 0 for x in v):
                        continue
                    span = _spin([v], gens)
                    if len(span) < n:
                        if tup is T:
                            return span
                        # annihilator of an invariant subspace of the dual
                        return Matrix(span).kernel_basis()
    return None


# ---------------------------------------------------------------------------
# equivalence

def _words(mats, length):
    out = []
    for k in range(1, length + 1):
        for w in product(range(len(mats)), repeat=k):
            m = mats[w[0]]
            for i in w[1:]:
                m = m * mats[i]
            out.append((w, m))
    return out


def intertwiners(T, U):
    """Basis of {S : S T_i = U_i S for all i}."""
    n = T.rank
    rows = []
    for a_mat, b_mat in zip(T.matrices[:-1], U.matrices[:-1]):
        for a in range(n):
            for b in range(n):
                row = [Fraction(0)] * (n * n)
                for c in range(n):
                    # (S A)_{ab} = sum_c S_{ac} A_{cb}
                    row[a * n + c] = row[a * n + c] + a_mat[c, b]
                    # (B S)_{ab} = sum_c B_{ac} S_{cb}
                    row[c * n + b] = row[c * n + b] - b_mat[a, c]
                rows.append(row)
    return [Matrix([v[i * n:(i + 1) * n] for i in range(n)])
            for v in Matrix(rows).kernel_basis()]


def find_intertwiner(T, U, seed=0):
    """An invertible S with S T_i S^-1 = U_i, or None if none exists.

    Raises Inconclusive when the intertwiner space is nonzero but no
    invertible element turned up among a few random combinations."""
    basis = intertwiners(T, U)
    if not basis:
        return None
    for s in basis:
        if s.det() != 0:
            return s
    rng = random.Random(seed)
    for _ in range(20):
        s = basis[0] * 0
        for b in basis:
            s = s + b * rng.randint(-9, 9)
        if s.det() != 0:
            return s
    raise Inconclusive("intertwiners exist but none invertible was found")


def tuples_equivalent(T, U, word_length=3):
    """Simultaneous conjugacy of two tuples on the same points."""
    if T.rank != U.rank or T.points != U.points:
        return False
    for a, b in zip(T.matrices, U.matrices):
        if a.trace() != b.trace():
            return False
    for (_, a), (_, b) in zip(_words(T.matrices[:-1], word_length),
                              _words(U.matrices[:-1], word_length)):
        if a.trace() != b.trace():
            return False
    for a, b in zip(T.matrices, U.matrices):
        if jordan_data(a) != jordan_data(b):
            return False
    return find_intertwiner(T, U) is not None


# ---------------------------------------------------------------------------
# Scott formula and dimension counts

def _jordan_list(T):
    if isinstance(T, MonodromyTuple):
        return T.jordan(), T.rank
    forms = list(T)
    return forms, forms[0].dim


def scott_check(T):
    """Irreducibility tests for a tuple or a list of JordanForms.

    scott_sum = sum rk(T_i - 1) must be >= 2n; dim_sum = sum dim C_GL(T_i)
    must be <= (r-1) n^2 + 2.  The looser value (r-1)^2 n^2 + 2 is
    reported alongside for reference."""
    forms, n = _jordan_list(T)
    r = len(forms) - 1
    one = RootOfUnity(0)
    scott_sum = sum(f.rank_minus(one) for f in forms)
    dim_sum = sum(f.centralizer_dim_gl() for f in forms)
    bound = (r - 1) * n * n + 2
    return {
        "rank": n,
        "scott_sum": scott_sum,
        "scott_bound": 2 * n,
        "scott_ok": scott_sum >= 2 * n,
        "dim_sum": dim_sum,
        "dim_bound": bound,
        "dim_bound_squared": (r - 1) ** 2 * n * n + 2,
        "dim_ok": dim_sum <= bound,
        "linearly_rigid_count": dim_sum == bound,
    }


def sp4_rigidity_check(T):
    """sum of codim C_Sp4(T_i) == 20 for a tuple or list of JordanForms."""
    from .numerology import centralizer_dim_sp4
    forms, n = _jordan_list(T)
    if n != 4:
        raise UnknownClass("Sp4 rigidity needs rank 4")
    try:
        codims = [10 - centralizer_dim_sp4(f) for f in forms]
    except ValueError as exc:
        raise UnknownClass(str(exc)) from None
    return {"codims": codims, "sum": sum(codims), "rigid": sum(codims) == 20}
