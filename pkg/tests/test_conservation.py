from __future__ import annotations

import csv
import io
import json
from fractions import Fraction

import pytest

from ait.bitcore import strings_up_to
from ait.complexity import TableStore
from ait.conservation import (ExperimentReport, Row, Thm6Case, all_triples, basic_inequality_rows, check_coding_theorem,
                              check_kraft, drift_bits, exp_thm1, exp_thm2, exp_thm3, exp_thm4, exp_thm5, exp_thm6,
                              exp_thm7, export_csv, sum_identity_rows, transform, transform_from_program,
                              validate_witness, with_drift)
from ait.conservation import FINITE_MAP
from ait.enumeration import Entry, empty_table
from ait.errors import CertifiedInvariantBroken, OperatorOutputFinite, WitnessMismatch
from ait.machine import Budget
from ait.measures import FiniteMeasure, family_from_description, uniform
from ait.mutual import default_support
from ait.oracle import ZEROS, eventually_periodic, eventually_zero, finite_word, parse_oracle, tilde
from ait.uvm import assemble

TOK = TableStore("TOK", Budget(22, 24, 10))


@pytest.mark.parametrize("x,out", [("", ""), ("01", "01"), ("110", "110")])
def test_identity_transform(x, out):
    assert transform("identity").apply_finite(x) == out


@pytest.mark.parametrize("x,out", [("0", "1"), ("10", "00"), ("011", "111")])
def test_bit_flip_first(x, out):
    assert transform("bit-flip-first").apply_finite(x) == out


def test_append_zero():
    assert transform("append-0").apply_finite("1") == "10"


@pytest.mark.parametrize("name,alpha,image", [
    ("op-identity", "per:1:10", "per:1:10"),
    ("drop-first-bit", "per:1:10", "per::10"),
    ("drop-first-bit", "tilde:1", "ez:11"),
    ("interleave-with-zeros", "per:1:10", "per:1:0100"),
    ("even-bits", "per::10", "per::1"),
])
def test_operator_images(name, alpha, image):
    assert transform(name).apply_operator(parse_oracle(alpha)).fingerprint == image


def test_operator_on_finite_oracle():
    with pytest.raises(OperatorOutputFinite):
        transform("op-identity").apply_operator(finite_word("01"))


def test_thm1_tok_closed_form():
    corpus = strings_up_to(2)
    same = exp_thm1(TOK, transform("identity"), corpus, corpus)
    assert len(same.rows) == 49 and same.empirical_constant == 0
    # I(x0:y) - I(x:y) = -2(|x|+1) + 2|x|
    app = exp_thm1(TOK, transform("append-0"), corpus, corpus)
    assert {r.value for r in app.rows} == {-2}


def test_thm2_tok_closed_form():
    rep = exp_thm2(TOK, family_from_description("uniform:1"), ["", "0", "1"], strings_up_to(1))
    for r in rep.rows:
        x = r.inputs["x"].replace("-", "")
        assert r.value == Fraction(1, 2 ** (2 * len(x) + 4))
    assert rep.derived["deficiency_c"] == -4
    assert all(c.passed for c in rep.checks)


def test_thm2_skips_non_probability():
    fam = family_from_description("uniform:1")
    fam.overrides["0"] = FiniteMeasure({"0": Fraction(1, 2)})
    rep = exp_thm2(TOK, fam, ["0"], [""])
    assert not rep.rows and rep.skipped[0]["case"] == "0"


def _tok_sum(n):
    xs = sum(Fraction(2 ** k, 2 ** (4 * k + 2)) for k in range(n + 1))
    ys = sum(Fraction(2 ** k, 2 ** (2 * k + 2)) for k in range(n + 1))
    return xs * ys


def test_thm3_tok_closed_form():
    rep = exp_thm3(TOK, [("", ""), ("1", ""), ("1", "0")], 1)
    for r in rep.rows:
        u = r.inputs["u"].replace("-", "")
        assert r.lhs == _tok_sum(1)
        assert r.value == _tok_sum(1) * 2 ** (2 * len(u))
    assert all(c.passed for c in rep.checks)


def test_thm4_tok():
    rep = exp_thm4(TOK, ["", "1"], eventually_zero("1"), 1)
    assert len(rep.rows) == 2
    for r in rep.rows:
        assert r.extra["K(u)-K^beta(u)"] == 0
    assert all(c.passed for c in rep.checks)


def test_thm5_identity_gap():
    store = TableStore("UVM", Budget(10, 32, 8))
    A = transform("op-identity")
    rep = exp_thm5(store, A, [ZEROS, tilde("1")], strings_up_to(1))
    assert rep.rows and {r.value for r in rep.rows} == {-rep.derived["k_hat_transform"]}


def test_thm5_encoding_invariance():
    store = TableStore("UVM", Budget(10, 32, 8))
    A = transform("op-identity")
    rep = exp_thm5(store, A, [ZEROS], [""], inverse=A, gammas=[ZEROS], support_len=1)
    row = rep.derived["encoding_invariance"]["rows"][0]
    assert row["round_trip"] and float(row["abs_diff_bits"]) == 0


def test_thm5_finite_image_skipped():
    store = TableStore("UVM", Budget(8, 16, 8))
    rep = exp_thm5(store, transform("op-identity"), [finite_word("1")], [""])
    assert rep.skipped and "OperatorOutputFinite" in rep.skipped[0]["reason"]


def test_thm6_tok_semimeasure():
    store = TableStore("TOK", Budget(10, 12, 6))
    case = Thm6Case(ZEROS, uniform(["zeros", "ez:1"]), tilde(""))
    rep = exp_thm6(store, [case], 1)
    assert rep.rows and all(c.passed for c in rep.checks)
    assert Fraction(rep.rows[0].extra["semimeasure_check"]) <= 1
    assert "c_T" in rep.derived


def test_thm7_witness():
    p = assemble("L: OUT0; JMP L")
    validate_witness(p, ZEROS)
    with pytest.raises(WitnessMismatch):
        validate_witness(p, tilde("1"))
    rep = exp_thm7(TableStore("TOK", Budget(10, 12, 6)), p, ZEROS, [ZEROS, eventually_periodic("", "10")], 1)
    assert len(rep.rows) == 2 and rep.derived["program_len"] == len(p)


def test_tok_identity_closed_forms():
    t = TOK.plain
    # sum_x m(<x,e>) / m(e) = (1/4) sum_k 8^-k
    for n in range(3):
        (row,) = sum_identity_rows(t, n, [""])
        assert row.ratio == Fraction(1, 4) * sum(Fraction(1, 8 ** k) for k in range(n + 1))
    # every triple has ratio exactly 1 on TOK
    rows = basic_inequality_rows(t, all_triples(1))
    assert rows and all(r.ratio == 1 for r in rows if r.ratio is not None)


def test_kraft_check_raises_on_broken_table():
    t = empty_table("TOK", None, Budget(4, 4, 4))
    t.entries = {"": Entry(1, 1, 1, "0"), "1": Entry(1, 1, 1, "1"), "0": Entry(1, 1, 1, "1")}
    with pytest.raises(CertifiedInvariantBroken):
        check_kraft(t)
    t.entries = {"": Entry(2, 1, 3, "10")}
    with pytest.raises(CertifiedInvariantBroken):
        check_coding_theorem(t)


def test_certify_raises():
    rep = ExperimentReport("thm1", "TOK", Budget(4, 4, 4), "gap")
    rep.certify("ok", True)
    with pytest.raises(CertifiedInvariantBroken):
        rep.certify("bad", False, "detail")


def test_csv_format():
    rep = ExperimentReport("thm2", "TOK", Budget(4, 4, 4), "ratio")
    assert export_csv(rep) == "case_id,inputs,lhs,rhs,gap_or_ratio,budget\n"
    rep.rows.append(Row("0|1", {"x": "0", "y": "1"}, Fraction(17, 256), Fraction(1), Fraction(17, 256)))
    rows = list(csv.reader(io.StringIO(export_csv(rep))))
    assert rows[1] == ["0|1", "x=0;y=1", "17/256", "1/1", "17/256", "L4-T4-O4"]


def test_report_json_round_trip():
    rep = exp_thm1(TOK, transform("identity"), ["0"], ["1"])
    d = json.loads(rep.dumps())
    assert d["theorem"] == "thm1" and d["empirical_constant"]["num"] == 0
    assert d["rows"][0]["gap"] == {"num": 0, "den": 1, "log2": "-inf"}


def test_drift_on_tok_is_zero():
    store = TableStore("TOK", Budget(9, 12, 6))
    rep = with_drift(lambda s: exp_thm1(s, transform("identity"), ["", "0"], [""]), store)
    assert drift_bits(rep) == 0 and drift_bits(rep, common=False) == 0
    assert rep.drift["budget_doubled"] == "L18-T24-O12"


def test_custom_transform():
    A = transform_from_program("mine", FINITE_MAP, assemble("ODEC; OUT1; HALT"))
    assert A.apply_finite("0") == "01"
    assert default_support(0) == [("", "")]
