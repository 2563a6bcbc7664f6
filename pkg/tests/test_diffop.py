from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st
from sympy import QQ

from rigidcy import cyfam
from rigidcy.diffop import (DiffOp, ParseError, PositivityViolation, apply, dual_op, exponents,
                            ext_pow_op, format_op, from_d_form, from_json, make_La,
                            middle_hadamard_op, normalize, op_mul, parse_op, riemann_scheme,
                            strip_left_linear, sym_pow_op, theta_op, to_d_form, twist_oneminus,
                            twist_power, z_op)
from rigidcy.exactalg import PARAMS
from rigidcy.series import LocalSolution, binom, cauchy_product, poch

small = st.fractions(min_value=-4, max_value=4, max_denominator=5)


@st.composite
def operators(draw):
    m = draw(st.integers(1, 3))
    coeffs = []
    for i in range(m + 1):
        cs = draw(st.lists(small, min_size=1, max_size=4))
        coeffs.append(cs)
    coeffs[0] = coeffs[0] + [F(1)]
    coeffs[-1] = coeffs[-1] + [F(1)]
    return DiffOp(coeffs, QQ)


@given(operators())
@settings(max_examples=50, deadline=None)
def test_print_parse_round_trip(L):
    assert parse_op(format_op(L)) == L
    assert from_json(L.to_json()) == L


@given(operators(), operators(), operators())
@settings(max_examples=25, deadline=None)
def test_composition_is_associative(A, B, C):
    assert op_mul(op_mul(A, B), C) == op_mul(A, op_mul(B, C))


@given(operators(), small, small)
@settings(max_examples=30, deadline=None)
def test_twists_compose(L, c1, c2):
    assert twist_power(twist_power(L, c1), c2) == twist_power(L, c1 + c2)


@given(operators())
@settings(max_examples=25, deadline=None)
def test_normalize_is_idempotent(L):
    N = normalize(L)
    assert normalize(N) == N
    assert N.P(0) == 0 or N.P(0).LC == 1


def test_theta_z_commutation():
    th, z = theta_op(), z_op()
    assert op_mul(th, z) == op_mul(z, th + DiffOp([[1]]))


def test_floats_rejected():
    with pytest.raises(ParseError):
        parse_op("theta^4 - 0.5*z*theta")
    with pytest.raises(ParseError):
        parse_op("theta - 1e3*z")


def test_La_annihilates_binomial_series():
    a = F(1, 3)
    f = LocalSolution(0, 0, [[poch(a, m) / poch(1, m) for m in range(20)]])
    assert all(not c for c in apply(make_La(a), f)[0])


def test_sym_square_annihilates_square():
    f = LocalSolution(0, 0, [[(-1) ** m * binom(-F(1, 2), m) for m in range(15)]])
    S = sym_pow_op(make_La(F(1, 2)), 2)
    assert S.degree == 1
    assert all(not c for c in apply(S, cauchy_product(f, f))[0])


def test_exponents_of_La():
    a = F(2, 7)
    L = make_La(a)
    assert riemann_scheme(L) == {1: [-a], "inf": [a]}
    assert exponents(L, 0) == [0]


def test_twist_oneminus_shifts_exponent_at_one():
    L = make_La(F(1, 5))
    assert exponents(twist_oneminus(L, F(1, 2)), 1) == [F(1, 2) - F(1, 5)]


def test_d_form_round_trip_and_duality():
    L = parse_op("theta^4 - 256*z*(theta+1/2)^4")
    assert from_d_form(to_d_form(L), QQ).same_as(L)
    assert dual_op(dual_op(L)).same_as(L)


def test_ext2_conventions_differ_by_twist():
    L = cyfam.closed_form("P1_4_10_4", F(1, 3), F(1, 5))
    assert ext_pow_op(L, 2, "d").same_as(twist_power(ext_pow_op(L, 2), -1))


def test_strip_left_linear():
    L = make_La(F(1, 3))
    H = op_mul(DiffOp([[F(1, 2), 1]]), L)
    cs, R = strip_left_linear(H)
    assert cs == [F(1, 2)] and R.same_as(L)


def test_positivity_violation():
    with pytest.raises(PositivityViolation):
        middle_hadamard_op(make_La(2), F(1, 3))


def test_symbolic_parse():
    L = parse_op(cyfam.CLOSED_FORMS["P2_4_6_8"])
    assert L.field == PARAMS
    assert parse_op(format_op(L)) == L


def test_golden_round_trip_of_table_operators():
    for fid in cyfam.FAMILIES:
        for a, b, _ in cyfam.table_rows(fid):
            try:
                L = cyfam.family_rescale(fid, a, b)
            except cyfam.IrrationalScale:
                L = cyfam.build_family(fid, a, b)
            assert parse_op(format_op(L)) == L
            assert from_json(L.to_json()) == L
