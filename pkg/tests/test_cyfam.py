from fractions import Fraction as F

import pytest

from rigidcy.cyfam import (DegenerateParams, IrrationalScale, RadicalScalar, SYM3_NOTE,
                           aesz_lookup, beta_scale, build_family, closed_form, cy1, cy2, cy3,
                           cy_report, family_rescale, minimal_integrality_base, monodromy_family,
                           printed_scheme, q_coordinate, rescale_factor, so5z_conjecture_probe,
                           sp4z_predicate, subgroup_flags)
from rigidcy.diffop import parse_op, riemann_scheme
from rigidcy.exactalg import PARAMS, CycloNum
from rigidcy.series import ParameterExcluded

SQRT2 = CycloNum.zeta(8) + CycloNum.zeta(8, 7)


def test_beta_scale():
    assert beta_scale(F(1, 2)) == 4
    assert beta_scale(F(1, 3)) == RadicalScalar(3, {3: F(1, 2)})
    assert beta_scale(F(1, 6)) == RadicalScalar(12, {3: F(1, 2)})
    assert beta_scale(F(1, 4)) == 8


def test_rescale_factors():
    assert rescale_factor("P1_4_10_4", F(1, 2), F(1, 2)) == 256
    assert rescale_factor("P2_4_6_6", F(1, 2), F(1, 3)) == RadicalScalar(48, {3: F(1, 2)})
    with pytest.raises(IrrationalScale):
        family_rescale("P2_4_6_6", F(1, 2), F(1, 6))
    assert str(family_rescale("P1_4_10_4", "1/2", "1/2")) == "theta^4 - 256*z*(theta+1/2)^4"


def test_radical_scalar_arithmetic():
    r = RadicalScalar(2, {3: F(1, 2)})
    assert r * r == 12
    assert (r ** 2).is_rational
    assert not r.is_rational


def test_closed_forms_and_schemes():
    assert closed_form("P2_4_6_8").field == PARAMS
    a, b = F(1, 3), F(1, 5)
    for fid in ("P1_4_10_4", "P1_4_8_4", "P2_4_6_6", "P2_4_6_8"):
        assert riemann_scheme(build_family(fid, a, b)) == printed_scheme(fid, a, b)


def test_excluded_parameters():
    with pytest.raises(ParameterExcluded):
        build_family("P1_4_8_4", F(1, 4), F(1, 3))
    with pytest.raises(ParameterExcluded):
        build_family("P1_4_10_4", 1, F(1, 3))


def test_aesz_lookup_up_to_symmetry():
    assert aesz_lookup("P1_4_10_4", F(1, 2), F(1, 2)).label == "3"
    assert aesz_lookup("P1_4_10_4", F(2, 3), F(1, 2)).label == "5"
    assert aesz_lookup("P1_4_10_4", F(1, 7), F(1, 2)) is None
    entry = aesz_lookup("P2_4_6_6", F(1, 2), F(1, 3))
    assert entry.label is None and entry.note == SYM3_NOTE


def test_minimal_integrality_base():
    # index = power of z; the constant term is skipped
    assert minimal_integrality_base([1, F(1, 2), F(1, 4)]) == 2
    assert minimal_integrality_base([1, F(1), F(1, 8)]) == 4
    assert minimal_integrality_base([1, F(1, 3), F(1, 4)]) == 6
    assert minimal_integrality_base([F(1, 7), F(5), F(7)]) == 1


def test_q_coordinate_of_theta_squared():
    # solutions 1 and log z give q = z
    assert q_coordinate(parse_op("theta^2"), 5) == [0, 1, 0, 0, 0, 0]


def test_cy_checks_on_non_self_dual_operator():
    L = parse_op("theta^4 - z*(theta+1/3)*(theta+1/5)*(theta+1/7)*(theta+1/11)")
    assert cy1(L)
    assert not cy3(L)
    ok, N, witness = cy2(L, Nmax=100)
    assert not ok and witness is not None


def test_cy_report_json():
    r = cy_report(family_rescale("P1_4_10_4", F(1, 2), F(1, 2)), M=10, q_terms=8)
    doc = r.to_json()
    assert doc["cy1"] and doc["cy2"] and doc["cy3"] and doc["cy4"]
    assert doc["N_cy2"] == 1 and doc["N_cy4"] == 1


def test_monodromy_families_close_up():
    for which, params in [("hyp", {"alpha": CycloNum.zeta(5), "beta": CycloNum.zeta(3)}),
                          ("p1sym", {"a": 1, "b": 2}), ("p2sym", {"a": 1, "b": 3}),
                          ("p2linrig", {"a": 3, "b": 5})]:
        T = monodromy_family(which, params)
        prod = T.matrices[0]
        for m in T.matrices[1:]:
            prod = prod * m
        assert prod.is_identity()
        assert subgroup_flags(T)["form_type"] == "symplectic"


def test_degenerate_parameters():
    with pytest.raises(DegenerateParams):
        monodromy_family("p1sym", {"x": CycloNum.zeta(4), "y": CycloNum.zeta(6)})
    with pytest.raises(DegenerateParams):
        monodromy_family("p2sym", {"a": 2, "b": 2})


def test_sp4z_predicate_examples():
    assert sp4z_predicate("p1sym", {"a": 1, "b": 2})
    assert sp4z_predicate("p2sym", {"a": SQRT2, "b": 2 * SQRT2})
    assert not sp4z_predicate("p2linrig", {"a": F(1, 2), "b": 1})
    assert not sp4z_predicate("p1sym", {"x": CycloNum.zeta(5), "y": CycloNum.zeta(3)})


def test_subgroup_flags():
    T = monodromy_family("hyp", {"alpha": CycloNum.zeta(5), "beta": CycloNum.zeta(3)})
    flags = subgroup_flags(T)
    assert flags["has_J4_unipotent"] and flags["has_transvection"]


def test_so5z_probe():
    found = so5z_conjecture_probe(monodromy_family("p1sym", {"a": 1, "b": 2}))
    assert found["found"]
    assert found["form"].det() != 0
    missing = so5z_conjecture_probe(monodromy_family("p1sym", {"a": F(1, 2), "b": 3}))
    assert not missing["found"]
    cyc = so5z_conjecture_probe(monodromy_family("p1sym", {"x": CycloNum.zeta(5),
                                                            "y": CycloNum.zeta(3)}))
    assert not cyc["found"]
