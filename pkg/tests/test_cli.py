import io
import json
import subprocess
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from rigidcy.cli import (RecipeError, main, parse_cyclo, parse_rational, run_recipe, tuple_doc,
                         tuple_from_doc)
from rigidcy.cyfam import monodromy_family
from rigidcy.exactalg import CycloNum, ParseError
from rigidcy.tuples import tuples_equivalent

P1SYM_SEED = "1, i^-1*y^-1, i*y"
P1SYM_RECIPE = "MH -i*y; MT (-1,1,-1); MH -i^-1*x^-1; MH i*x; ext2; MT (-1,1,-1); MH! -1"


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


def test_op_build_rescaled():
    code, text = run("op", "build", "--family", "P1-4-10-4", "--a", "1/2", "--b", "1/2",
                     "--rescaled")
    assert code == 0 and text.strip() == "theta^4 - 256*z*(theta+1/2)^4"


def test_series_on_built_operator():
    code, text = run("series", "--family", "P1-4-10-4", "--a", "1/2", "--b", "1/2",
                     "--rescaled", "--point", "0", "--terms", "5")
    assert text.strip() == "1, 16, 1296, 160000, 24010000"


def test_cy_all_report():
    code, text = run("cy", "--check", "all", "--op", "theta^4 - 256*z*(theta+1/2)^4")
    doc = json.loads(text)
    assert code == 0
    assert set(doc) >= {"cy1", "cy2", "cy3", "cy4", "N_cy2", "N_cy4", "terms", "witness"}


def test_opdoc_round_trip(tmp_path):
    code, text = run("op", "build", "--family", "P2-4-6-8", "--json")
    path = tmp_path / "op.json"
    path.write_text(text)
    code, again = run("op", "parse", "--opdoc", str(path), "--json")
    assert json.loads(again) == json.loads(text)
    assert json.loads(text)["field"] == "QQ(a,b)"


def test_floats_rejected():
    code, _ = run("op", "build", "--family", "P1-4-10-4", "--a", "0.5", "--b", "1/2")
    assert code == 2
    with pytest.raises(ParseError):
        parse_rational("1e-3")


def test_classify():
    code, text = run("classify")
    assert code == 0
    assert sum(1 for l in text.splitlines() if l[:2] in ("P1", "P2", "P3", "P4", "P5")) == 24
    code, text = run("classify", "--profile", "P3")
    assert len(text.strip().splitlines()) == 5
    code, text = run("classify", "--json")
    doc = json.loads(text)
    assert doc["mismatches"] == 0 and len(doc["table1"]) == 12


def test_hyp_recipe_matches_printed_matrices():
    code, text = run("tuple", "--seed", "1, e(4/5), e(1/5)", "--recipe",
                     "MH e(1/5); MH e(2/3); MH e(1/3)", "--json")
    T = tuple_from_doc(json.loads(text))
    U = monodromy_family("hyp", {"alpha": CycloNum.zeta(5), "beta": CycloNum.zeta(3)})
    assert tuples_equivalent(T, U)


def test_p1sym_recipe_matches_family():
    bind = {"x": "e(1/5)", "y": "e(1/3)"}
    from rigidcy.cli import parse_bindings
    T = run_recipe(P1SYM_SEED, P1SYM_RECIPE, bindings=parse_bindings(
        ["%s=%s" % kv for kv in bind.items()]))
    U = monodromy_family("p1sym", {"x": CycloNum.zeta(5), "y": CycloNum.zeta(3)})
    assert tuples_equivalent(T, U)


def test_empty_recipe_is_seed():
    code, text = run("tuple", "--seed", "1, e(1/3), e(2/3)", "--recipe", "", "--json")
    doc = json.loads(text)
    assert doc["rank"] == 1
    assert [m[0][0] for m in doc["matrices"]] == ["1", "z3", "-1-z3"]


def test_recipe_errors_name_the_step():
    with pytest.raises(RecipeError) as err:
        run_recipe("1, e(1/3), e(2/3)", "MH e(1/5); frob 2")
    assert err.value.index == 2
    code, _ = run("tuple", "--seed", "1, i*y", "--recipe", "MH x")
    assert code == 2


@given(st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=4), min_size=1,
                max_size=6), st.sampled_from([3, 5, 8, 12]))
@settings(max_examples=40, deadline=None)
def test_cyclotomic_scalar_round_trip(coeffs, n):
    x = CycloNum(n, coeffs).canonical()
    from rigidcy.cli import format_scalar
    y = parse_cyclo(format_scalar(x))
    assert y == (x.to_rational() if x.is_rational() else x)


def test_tupledoc_round_trip():
    T = monodromy_family("p1sym", {"x": CycloNum.zeta(5), "y": CycloNum.zeta(3)})
    doc = tuple_doc(T)
    # b = y + 1/y = -1 at y = e(1/3), so only zeta_5 appears
    assert doc["field"] == {"kind": "cyclotomic", "conductor": 5}
    assert tuple_doc(tuple_from_doc(json.loads(json.dumps(doc)))) == doc


def test_console_script():
    out = subprocess.run(["rigidcy", "op", "scheme", "--family", "P1-4-10-4", "--a", "1/3",
                          "--b", "1/5"], capture_output=True, text=True, check=True)
    assert json.loads(out.stdout) == {"0": ["0", "0", "0", "0"], "1": ["0", "1", "1", "2"],
                                      "inf": ["1/5", "1/3", "2/3", "4/5"]}


def test_verify_subset():
    code, text = run("verify", "--only", "15", "--only", "2")
    assert code == 0
    assert "criterion  2 PASS" in text and "criterion 15 PASS" in text
