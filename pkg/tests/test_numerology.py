from fractions import Fraction as F

import pytest

from rigidcy.cyfam import monodromy_family
from rigidcy.exactalg import CycloNum, Matrix, RootOfUnity, jordan_data
from rigidcy.numerology import (MINUS_ONE, NotSymplecticClass, centralizer_dim_gl,
                                centralizer_dim_sp4, compare_verdict, enumerate_sp4_cases,
                                ext2_jordan, format_table1, format_table2, mh_jordan,
                                parse_eigenvalue, parse_jordan, sp4_profiles, subcases)
from rigidcy.tuples import _words, ext_power_matrix, invariant_bilinear_forms


def commutant_dim(m, omega=None):
    """dim {X : X m = m X}, intersected with sp(omega) if omega is given."""
    n = m.nrows
    rows = []
    for a in range(n):
        for b in range(n):
            row = [F(0)] * (n * n)
            for c in range(n):
                row[a * n + c] += m[c, b]
                row[c * n + b] -= m[a, c]
            rows.append(row)
    if omega is not None:
        # X^t omega + omega X = 0
        for a in range(n):
            for b in range(n):
                row = [F(0)] * (n * n)
                for c in range(n):
                    row[c * n + a] += omega[c, b]
                    row[c * n + b] += omega[a, c]
                rows.append(row)
    return n * n - Matrix(rows).rank()


@pytest.mark.parametrize("which,params", [
    ("hyp", {"alpha": CycloNum.zeta(5), "beta": CycloNum.zeta(3)}),
    ("p1sym", {"a": 1, "b": 2}),
    ("p2sym", {"a": 1, "b": 3}),
])
def test_centralizer_dims_against_explicit_matrices(which, params):
    T = monodromy_family(which, params)
    omega = [g for g in invariant_bilinear_forms(T)["skew"] if g.det() != 0][0]
    checked = 0
    for _, m in _words(T.matrices[:-1], 3):
        try:
            form = jordan_data(m)
        except ValueError:
            continue
        assert centralizer_dim_gl(form) == commutant_dim(m)
        try:
            d = centralizer_dim_sp4(form)
        except ValueError:
            continue
        assert d == commutant_dim(m, omega)
        checked += 1
    assert checked > 3


def test_ext2_jordan_against_explicit_matrices():
    T = monodromy_family("hyp", {"alpha": CycloNum.zeta(5), "beta": CycloNum.zeta(3)})
    for _, m in _words(T.matrices[:-1], 2):
        try:
            form = jordan_data(m)
            want = jordan_data(ext_power_matrix(m, 2))
        except ValueError:
            continue
        got = ext2_jordan(form)
        blocks = list(got.blocks)
        # add back the trivial line removed from the primitive part
        full = {}
        for e, k, mult in blocks + [(RootOfUnity(0), 1, 1)]:
            full[(e, k)] = full.get((e, k), 0) + mult
        assert full == {(e, k): mult for e, k, mult in want.blocks}


def test_parse_and_print_jordan():
    for text in ["(J(2),1,1)", "(x*J(2),x^-1*J(2))", "(-1,-1,1,1)", "J(4)", "(-J(2),J(2))"]:
        f = parse_jordan(text)
        assert parse_jordan(str(f)) == f
    assert parse_eigenvalue("-i*y") == RootOfUnity(F(3, 4), [("y", 1)])
    assert parse_jordan("-J(4)") == parse_jordan("J(4)").scaled(MINUS_ONE)


def test_not_symplectic():
    with pytest.raises(NotSymplecticClass):
        ext2_jordan(parse_jordan("(e(1/3),1,1,1)"))


def test_profiles_and_subcases():
    profiles = sp4_profiles()
    assert profiles == [(2, 2, 6), (2, 4, 4), (2, 6, 6, 6), (4, 4, 6, 6), (6, 6, 6, 6, 6)]
    assert all(sum(10 - d for d in p) == 20 for p in profiles)
    assert len(subcases((2, 6, 6, 6))) == 4
    assert sum(len(subcases(p)) for p in profiles) == 24


def test_mh_jordan_of_p1sym_seed():
    forms = [parse_jordan("1"), parse_jordan("i^-1*y^-1"), parse_jordan("i*y")]
    out, _ = mh_jordan(forms, parse_eigenvalue("-i*y"))
    # the infinity entry is listed elsewhere by the eigenvalues of its inverse
    assert out == [parse_jordan("J(2)"), parse_jordan("(-1,1)"), parse_jordan("(i*y^-1,i*y)")]


def test_verdict_comparison():
    assert compare_verdict("lin. rigid", "lin. rigid") == "match"
    assert compare_verdict("red. (Scott)", "Λ² red.") == "consistent"
    assert compare_verdict("manual", "Λ² lin. rigid") == "manual"
    assert compare_verdict("lin. rigid", "Λ² red.") == "mismatch"


def test_tables_format():
    rows = enumerate_sp4_cases()
    assert len(format_table2(rows).splitlines()) == len(rows) + 1
    assert "J(5)" in format_table1()
