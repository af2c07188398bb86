import io
import json
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ncreduce import presentation
from ncreduce.cli import main, parse_gwa_expr
from ncreduce.fileio import ParseError, parse_presentation, serialize_presentation
from ncreduce import gwa_catalog

DATA = Path(__file__).resolve().parent.parent / "data"


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


def test_dims_quantum_plane():
    code, out, _ = run("dims", "--input", DATA / "quantum_plane_q3.json", "--max-degree", 5)
    assert code == 0
    assert "QQ: 1 2 3 4 5 6" in out


def test_dims_with_prime_labels_fields():
    code, out, _ = run("dims", "-i", DATA / "quantum_plane_q3.json", "-N", 4, "--prime", 5, "--format", "json")
    doc = json.loads(out)
    assert [t["field"] for t in doc["dims"]] == ["QQ", "GF(5)"]
    assert doc["dims"][1]["dims"] == [1, 2, 3, 4, 5]


def test_dims_free_algebra():
    code, out, _ = run("dims", "-i", DATA / "free2.json", "-N", 3)
    assert code == 0 and "QQ: 1 2 4 8" in out


def test_dims_filtered():
    code, out, _ = run("dims", "-i", DATA / "weyl.json", "-N", 3)
    assert code == 0 and "QQ: 1 3 6 10" in out and "filtered" in out


def test_parse_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{\n  "generators": [{"name": "x"}],\n  "relations": [[{"word": ["x"], "coeff": "1/0"}]]\n}\n')
    code, _, err = run("dims", "-i", bad, "-N", 2)
    assert code == 2 and "line 3" in err and "zero denominator" in err
    broken = tmp_path / "broken.json"
    broken.write_text('{"generators": [\n  {"name": "x"},\n  oops]}')
    code, _, err = run("dims", "-i", broken)
    assert code == 2 and "line 3, column 3" in err
    with pytest.raises(ParseError, match="undeclared"):
        parse_presentation('{"generators": [{"name": "x"}], "relations": [[{"word": ["z"], "coeff": "1"}]]}')
    with pytest.raises(ParseError, match="duplicate"):
        parse_presentation('{"generators": [{"name": "x"}, {"name": "x"}]}')
    with pytest.raises(ParseError, match="homogeneous"):
        parse_presentation('{"generators": [{"name": "x"}], "mode": "graded", '
                           '"relations": [[{"word": ["x", "x"], "coeff": "1"}, {"word": ["x"], "coeff": "1"}]]}')


def test_envelope(tmp_path):
    code, _, err = run("dims", "-i", DATA / "free2.json", "-N", 11)
    assert code == 2 and "limit" in err
    code, _, _ = run("dims", "-i", DATA / "free2.json", "-N", 11, "--unsafe-limits")
    assert code == 0
    five = tmp_path / "five.json"
    five.write_text(json.dumps({"generators": [{"name": c} for c in "abcde"], "relations": []}))
    code, _, err = run("dims", "-i", five, "-N", 2)
    assert code == 2 and "5 generators" in err


def test_reduce_good():
    code, out, _ = run("reduce", "-i", DATA / "quantum_plane_q3.json", "-p", 5, "-N", 6, "--format", "json")
    assert code == 0
    rep = json.loads(out)["reports"][0]
    assert rep["reduces_well"] and rep["domain_up_to_N"]
    assert len(rep["defect"]) == 7
    assert rep["metadata"]["primes"] == [5] and rep["metadata"]["max_degree"] == 6


def test_reduce_domain_loss_warns():
    code, out, _ = run("reduce", "-i", DATA / "quantum_plane_q2.json", "-p", 2, "-N", 6, "--format", "json")
    assert code == 0
    rep = json.loads(out)["reports"][0]
    assert rep["reduces_well"] and not rep["domain_up_to_N"]
    assert rep["warnings"] and rep["zero_divisor"]["left"] == "x"


def test_reduce_defect_exit_1():
    code, out, _ = run("reduce", "-i", DATA / "defect_p2.json", "-p", 2, "-p", 3, "-N", 5, "--format", "json")
    assert code == 1
    reps = json.loads(out)["reports"]
    assert [r["p"] for r in reps] == [2, 3]
    assert reps[0]["first_bad_degree"] == 2


def test_reduce_filtered_includes_gr_verdict():
    code, out, _ = run("reduce", "-i", DATA / "weyl.json", "-p", 5, "-N", 5, "--format", "json")
    rep = json.loads(out)["reports"][0]
    assert code == 0
    assert rep["gr_presentation_ok"] and rep["lift_applies"] and rep["lift_verified"]
    assert rep["gr"]["dims_kv"]["dims"] == [1, 2, 3, 4, 5, 6]


def test_reduce_rejects_non_prime():
    code, _, _ = run("reduce", "-i", DATA / "quantum_plane_q3.json", "-p", 4)
    assert code == 2


def test_reports_are_deterministic():
    a = run("reduce", "-i", DATA / "defect_p2.json", "-p", 2, "-p", 5, "-N", 5, "--format", "json")[1]
    b = run("reduce", "-i", DATA / "defect_p2.json", "-p", 2, "-p", 5, "-N", 5, "--format", "json")[1]
    assert a == b
    doc = json.loads(a)
    assert list(doc) == sorted(doc)


def test_rees():
    code, out, _ = run("rees", "-i", DATA / "weyl.json", "-N", 4)
    assert code == 0
    assert "-T*T + x*y - y*x" in out or "x*y - y*x - T*T" in out
    assert out.count(" OK") >= 5 and "MISMATCH" not in out
    code, out, _ = run("rees", "-i", DATA / "weyl.json", "-N", 0, "--format", "json")
    doc = json.loads(out)
    assert doc["rees_dims"] == [1] and doc["consistent"] == [True]
    code, _, err = run("rees", "-i", DATA / "quantum_plane_q3.json")
    assert code == 2 and "filtered" in err


def test_gwa_commands():
    assert run("gwa", "mult", "--name", "weyl", "Y*X")[1].strip() == "h"
    assert run("gwa", "mult", "--name", "weyl", "X*X*Y")[1].strip() == "(h + 2)*X"
    code, out, _ = run("gwa", "reduce", "--name", "quantum_weyl", "--param", "q=3", "--prime", 3)
    assert code == 1 and "v_3(alpha = 1/3) = -1" in out
    code, out, _ = run("gwa", "reduce", "--name", "quantum_weyl", "--param", "q=3", "--prime", 5)
    assert code == 0 and "GF(5)" in out
    assert run("gwa", "dims", "--name", "weyl", "--max-degree", 2)[1].strip() == "1 3 6"
    code, _, err = run("gwa", "dims", "--name", "nope")
    assert code == 2 and "unknown catalog entry" in err
    code, out, _ = run("gwa", "catalog", "--format", "json")
    assert {d["name"] for d in json.loads(out)} >= {"weyl", "usl2", "uq_sl2"}


def test_gwa_expression_grammar():
    w = gwa_catalog("weyl")
    assert repr(parse_gwa_expr("(X + 2)*(Y - h)^2", w)) == repr(
        parse_gwa_expr("X*Y*Y - X*Y*h - X*h*Y + X*h*h + 2*Y*Y - 2*Y*h - 2*h*Y + 2*h*h", w))
    assert repr(parse_gwa_expr("-h + 3", w)) == "-h + 3"
    for bad in ("X*", "(X", "X Y", "q", "h^X"):
        with pytest.raises(ValueError):
            parse_gwa_expr(bad, w)


names = st.sampled_from(["x", "y", "z"])
coeff_text = st.fractions(min_value=-9, max_value=9, max_denominator=6).filter(bool).map(
    lambda q: str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}")


@st.composite
def documents(draw):
    gens = draw(st.lists(names, min_size=1, max_size=3, unique=True))
    rels = []
    for _ in range(draw(st.integers(0, 3))):
        terms = draw(st.lists(st.tuples(st.lists(st.sampled_from(gens), min_size=1, max_size=3), coeff_text),
                              min_size=1, max_size=4))
        rels.append([{"word": w, "coeff": c} for w, c in terms])
    return {"generators": [{"name": g, "degree": 1} for g in gens], "mode": "filtered", "relations": rels}


@settings(max_examples=100, deadline=None)
@given(documents())
def test_round_trip(doc):
    try:
        pres = parse_presentation(json.dumps(doc))
    except ParseError:
        return  # e.g. a relation whose terms cancel
    text = serialize_presentation(pres)
    again = parse_presentation(text)
    assert again == pres
    assert serialize_presentation(again) == text


@settings(max_examples=15, deadline=None)
@given(st.sampled_from(["quantum_plane_q3.json", "quantum_plane_q2.json", "defect_p2.json",
                        "weyl.json", "free2.json", "quantum_plane_filtered.json"]),
       st.sampled_from([2, 3, 5, 7]))
def test_exit_code_contract(name, p):
    code, out, _ = run("reduce", "-i", DATA / name, "-p", p, "-N", 4, "--format", "json")
    reps = json.loads(out)["reports"]
    bad = any(any(r["defect"]) or ("gr" in r and any(r["gr"]["defect"])) for r in reps)
    assert code == (1 if bad else 0)
    for r in reps:
        assert len(r["defect"]) == 5
        assert isinstance(r["reduces_well"], bool) and isinstance(r["domain_up_to_N"], bool)
        assert r["reduces_well"] == (not any(r["defect"]))
