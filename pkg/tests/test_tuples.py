from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from rigidcy.cyfam import monodromy_family
from rigidcy.exactalg import CycloNum, Matrix, RootOfUnity
from rigidcy.numerology import parse_jordan
from rigidcy.tuples import (INF, DegenerateInput, OrderConflict, convolution, displayed_l_space,
                            ext_power, ext_power_matrix, form_type, merge_points, mc_rank_formula,
                            middle_convolution, middle_hadamard, mh_rank_formula, rank_one_tuple,
                            scott_check, sp4_rigidity_check, sym_power, tuples_equivalent)

PTS = (0, 1, INF)


def seed(e1, e2):
    a, b = RootOfUnity(F(e1, 12)), RootOfUnity(F(e2, 12))
    return rank_one_tuple(PTS, [a, b, (a * b).inverse()])


exps = st.integers(1, 11)


@given(exps, exps, exps)
@settings(max_examples=25, deadline=None)
def test_mc_rank_matches_formula(e1, e2, e3):
    if (e1 + e2) % 12 == 0:
        return
    T = seed(e1, e2)
    lam = RootOfUnity(F(e3, 12))
    U = middle_convolution(T, lam, check=False)
    assert U.rank == mc_rank_formula(T, lam)
    prod = U.matrices[0]
    for m in U.matrices[1:]:
        prod = prod * m
    assert prod.is_identity()


@given(exps, exps, exps)
@settings(max_examples=25, deadline=None)
def test_mh_rank_matches_formula(e1, e2, e3):
    if (e1 + e2) % 12 == 0:
        return
    T = seed(e1, e2)
    lam = RootOfUnity(F(e3, 12))
    try:
        U = middle_hadamard(T, lam, check=False)
    except DegenerateInput:
        assert mh_rank_formula(T, lam) == 0
        return
    assert U.rank == mh_rank_formula(T, lam)


def test_displayed_l_space_spans_l():
    T = middle_convolution(seed(3, 5), RootOfUnity(F(1, 3)))
    lam = RootOfUnity(F(1, 5))
    data = convolution(T, lam)
    shown = displayed_l_space(T, lam)
    assert Matrix(shown).rank() == Matrix(data.L).rank() == len(data.L)
    assert Matrix(shown + data.L).rank() == len(data.L)


def test_first_hadamard_step_of_p1sym_construction():
    # MH_{-iy} on (1, (iy)^-1, iy) at y = e(1/3): (J(2), (-1, 1), (i/y, iy))
    y = F(1, 3)
    L0 = rank_one_tuple(PTS, [RootOfUnity(0), RootOfUnity(-F(1, 4) - y), RootOfUnity(F(1, 4) + y)])
    S = middle_hadamard(L0, RootOfUnity(F(1, 2) + F(1, 4) + y))
    assert S.jordan() == [parse_jordan(t) for t in ("J(2)", "(-1,1)", "(e(7/12),e(11/12))")]


def test_hyp_family_invariants():
    T = monodromy_family("hyp", {"alpha": CycloNum.zeta(5), "beta": CycloNum.zeta(3)})
    assert form_type(T) == "symplectic"
    assert sp4_rigidity_check(T)["rigid"]
    s = scott_check(T)
    assert s["scott_ok"] and s["dim_ok"]


@given(st.lists(st.integers(-3, 3), min_size=16, max_size=16))
@settings(max_examples=15, deadline=None)
def test_equivalence_is_invariant_under_conjugation(entries):
    S = Matrix([entries[4 * i:4 * i + 4] for i in range(4)])
    if S.det() == 0:
        return
    T = monodromy_family("p1sym", {"a": 1, "b": 2})
    assert tuples_equivalent(T, T.conjugate(S))


def test_inequivalent_tuples():
    T = monodromy_family("p1sym", {"a": 1, "b": 2})
    U = monodromy_family("p1sym", {"a": 1, "b": 3})
    assert not tuples_equivalent(T, U)


def test_ext_and_sym_powers():
    m = Matrix([[2, 1, 0, 0], [0, 1, 3, 0], [1, 0, 1, 1], [0, 2, 0, 1]])
    assert ext_power_matrix(m, 4) == Matrix([[m.det()]])
    assert ext_power_matrix(m, 1) == m
    T = monodromy_family("p1sym", {"a": 1, "b": 2})
    assert ext_power(T, 2).rank == 6
    assert sym_power(T, 2).rank == 10
    assert form_type(ext_power(T, 2)) == "orthogonal"


def test_merge_points():
    assert merge_points((0, 1, INF), (0, INF)) == (0, 1, INF)
    assert merge_points((0, INF), (1, 2, INF)) == (0, 1, 2, INF)
    with pytest.raises(OrderConflict):
        merge_points((0, 1, INF), (1, 0, INF))


def test_scott_on_jordan_lists():
    s = scott_check([parse_jordan("J(4)"), parse_jordan("J(4)"), parse_jordan("(J(2),1,1)")])
    assert (s["scott_sum"], s["scott_bound"]) == (7, 8)
    assert not s["scott_ok"]
