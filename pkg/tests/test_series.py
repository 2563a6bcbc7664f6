from fractions import Fraction as F
from math import comb

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from rigidcy.diffop import DiffOp, make_La, parse_op, sym_pow_op
from rigidcy.series import (INF, LocalSolution, ParameterExcluded, Resonance, beta_ratios,
                            cauchy_product, frobenius, frobenius_log_basis, hadamard_series,
                            local_solutions, pfq_terminating, poch, special_coeffs,
                            special_series, verify_annihilates, wronskian_pair)

fracs = st.fractions(min_value=F(1, 20), max_value=F(19, 20), max_denominator=20)
AESZ3 = "theta^4 - 256*z*(theta+1/2)^4"


@given(fracs)
@settings(max_examples=30, deadline=None)
def test_frobenius_of_La_is_binomial(a):
    f = frobenius(make_La(a), 0, 0, 12)
    assert list(f.series[0]) == [poch(a, m) / poch(1, m) for m in range(12)]


def test_central_binomial_powers():
    f = frobenius(parse_op("theta^2 - 16*z*(theta+1/2)^2"), 0, 0, 15)
    assert list(f.series[0]) == [comb(2 * m, m) ** 2 for m in range(15)]


def test_log_solution_matches_derivative_in_exponent():
    # y1 = d/dmu of sum A_m(mu) z^(m+mu) at mu = 0
    mu = sp.symbols("mu")
    A, want = sp.Integer(1), [0]
    for m in range(1, 8):
        A *= 256 * ((mu + m - 1 + sp.Rational(1, 2)) / (mu + m)) ** 4
        want.append(sp.diff(A, mu).subs(mu, 0))
    y0, y1 = frobenius_log_basis(parse_op(AESZ3), 8)
    assert [F(int(w.p), int(w.q)) for w in map(sp.Rational, want)] == list(y1.series[0][:8])
    assert list(y1.series[1][:8]) == list(y0.series[0][:8])


def test_resonance_detected():
    with pytest.raises(Resonance):
        frobenius(parse_op("theta*(theta-1) - z*(theta+1)"), 0, 0, 5)


def test_local_solutions_dimension():
    sols = local_solutions(parse_op(AESZ3), 0, 0, 6)
    assert len(sols) == 4


@given(fracs, fracs)
@settings(max_examples=30, deadline=None)
def test_beta_ratios_against_gamma(x, y):
    got = beta_ratios(x, y, 6)
    X, Y = sp.Rational(x.numerator, x.denominator), sp.Rational(y.numerator, y.denominator)
    for m, g in enumerate(got):
        want = sp.gammasimp(sp.beta(X + m, Y) / sp.beta(X, Y))
        assert sp.Rational(g.numerator, g.denominator) == want


@given(st.lists(fracs, min_size=1, max_size=3), st.lists(fracs, min_size=1, max_size=2),
       st.integers(0, 6))
@settings(max_examples=30, deadline=None)
def test_terminating_pfq_against_direct_sum(upper, lower, l):
    k = sp.symbols("k")
    U = [sp.Rational(u.numerator, u.denominator) for u in upper] + [-l]
    V = [sp.Rational(v.numerator, v.denominator) for v in lower]
    term = sp.Mul(*[sp.rf(u, k) for u in U]) / sp.Mul(*[sp.rf(v, k) for v in V]) / sp.factorial(k)
    want = sum(term.subs(k, j) for j in range(l + 1))
    got = pfq_terminating(upper + [-l], lower, l)
    assert sp.Rational(got.numerator, got.denominator) == want


def test_hadamard_chain_matches_frobenius_at_infinity():
    a, b = F(1, 3), F(1, 5)
    f = LocalSolution(INF, a, [[poch(a, m) / poch(1, m) for m in range(15)]])
    for c in (1 - a, b, 1 - b):
        f = hadamard_series(f, c)
    assert f.exponent == a
    assert list(f.series[0]) == list(special_series("P1_4_10_4", "C", a, b, 15, a)[2])


def test_cauchy_square_solves_symmetric_square():
    L = make_La(F(1, 3))
    f = frobenius(L, 0, 0, 12)
    assert verify_annihilates(sym_pow_op(L, 2), cauchy_product(f, f))


def test_wronskian_of_two_solutions_is_constant_for_second_order():
    # no theta^1 term, so f theta(g) - g theta(f) is constant
    L = parse_op("theta^2 - 1/9 - z")
    f = frobenius(L, 0, F(1, 3), 10)
    g = frobenius(L, 0, F(-1, 3), 10)
    W = wronskian_pair(f, g)
    assert W.exponent == 0
    assert all(c == 0 for c in W.series[0][1:])


def test_special_A_at_half():
    for m in range(10):
        assert special_coeffs("P1_4_10_4", "A", "1/2", "1/2", m) == F(comb(2 * m, m), 4 ** m) ** 4


def test_excluded_parameters():
    with pytest.raises(ParameterExcluded):
        special_series("P1_4_8_4", "A", F(1, 4), F(1, 3), 5)


def test_local_solution_printing():
    f = frobenius(make_La(F(1, 2)), 0, 0, 4)
    assert str(f) == "z^(0) * (1 + 1/2*z + 3/8*z^2 + 5/16*z^3 + ...)"
    assert f.to_json()["series"] == [["1", "1/2", "3/8", "5/16"]]
    assert f.truncated(2).M == 2
