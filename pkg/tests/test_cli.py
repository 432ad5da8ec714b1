import json
from pathlib import Path

import pytest

from qlevels.cli import main
from qlevels.qlaurent import QSeries

MODELS = Path(__file__).resolve().parent.parent / "models"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_expand_text(capsys):
    code, out, _ = run(capsys, "expand", str(MODELS / "prop1_st.json"),
                       str(MODELS / "prop1_order3a_spec.json"), "--trunc", "10")
    assert code == 0
    assert out.strip() == "1 + q - q^3 + q^4 + q^5 - q^6 - q^7 + 2*q^9"


def test_expand_json_roundtrip(capsys):
    code, out, _ = run(capsys, "--format", "json", "expand", str(MODELS / "x11_st_level2.json"),
                       str(MODELS / "prop2_order3b_spec.json"), "--trunc", "8")
    assert code == 0
    series = QSeries.from_json(json.loads(out))
    assert series.trunc == 8 and series.is_rational()
    assert json.loads(series.dumps()) == json.loads(out)


def test_global_flags_after_subcommand(capsys):
    a = run(capsys, "--trunc", "4", "mock", "p2.o3.a")
    b = run(capsys, "mock", "p2.o3.a", "--trunc", "4")
    assert a == b and a[1].strip() == "1 + q - 2*q^2 + 3*q^3 - 3*q^4"


def test_mock_accepts_identity_name(capsys):
    assert run(capsys, "mock", "prop2.order3.a", "--trunc", "4")[1] == \
        run(capsys, "mock", "p2.o3.a", "--trunc", "4")[1]


def test_verify_one_and_all(capsys):
    code, out, _ = run(capsys, "verify", "prop3.order7.a", "--trunc", "15")
    assert code == 0 and out.startswith("PASS prop3.order7.a")
    code, out, _ = run(capsys, "--format", "json", "verify", "all", "--trunc", "10")
    reports = json.loads(out)
    assert code == 0 and len(reports) == 15
    assert all(r["status"] == "pass" for r in reports)


def test_catalog_listing(capsys):
    code, out, _ = run(capsys, "catalog")
    assert code == 0 and len(out.strip().splitlines()) == 15
    code, out, _ = run(capsys, "catalog", "--format", "json")
    assert len(json.loads(out)) == 15


def test_selfcheck_is_deterministic(capsys):
    a = run(capsys, "--format", "json", "selfcheck", "--seed", "5")
    b = run(capsys, "--format", "json", "selfcheck", "--seed", "5")
    assert a[0] == 0 and a == b


def test_unknown_identity_exit_2(capsys):
    code, _, err = run(capsys, "verify", "prop9.order1.a")
    assert code == 2 and "unknown identity" in err


def test_bad_flag_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["mock", "p2.o3.a", "--trunc", "-1"])
    assert exc.value.code == 2


def test_malformed_json_exit_2(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run(capsys, "expand", str(bad), str(MODELS / "prop1_order3a_spec.json"))
    assert code == 2 and "not valid JSON" in err
    code, _, err = run(capsys, "expand", str(tmp_path / "missing.json"), str(bad))
    assert code == 2 and "cannot read" in err


def test_schema_error_names_field(capsys, tmp_path):
    model = json.loads((MODELS / "prop1_st.json").read_text())
    model["level"] = "one"
    path = tmp_path / "m.json"
    path.write_text(json.dumps(model))
    code, _, err = run(capsys, "expand", str(path), str(MODELS / "prop1_order3a_spec.json"))
    assert code == 2 and "'level'" in err


def test_unmapped_symbol_exit_2(capsys, tmp_path):
    spec = json.loads((MODELS / "prop1_order3a_spec.json").read_text())
    del spec["sym_map"]["lambda"]
    path = tmp_path / "s.json"
    path.write_text(json.dumps(spec))
    code, _, err = run(capsys, "expand", str(MODELS / "prop1_st.json"), str(path))
    assert code == 2 and "lambda" in err


def test_pole_exit_3(capsys, tmp_path):
    spec = json.loads((MODELS / "prop1_order3a_spec.json").read_text())
    spec["sym_map"]["lambda"] = {"c": "1", "e": 2}
    path = tmp_path / "s.json"
    path.write_text(json.dumps(spec))
    code, _, err = run(capsys, "expand", str(MODELS / "prop1_st.json"), str(path), "--trunc", "5")
    assert code == 3 and "math error" in err


def test_non_convergence_exit_3(capsys, tmp_path):
    model = json.loads((MODELS / "prop1_st.json").read_text())
    model["level"] = 0
    spec = {"series_power": 1,
            "sym_map": {"p": {"c": "1", "e": 0}, "lambda": {"c": "2", "e": 0}},
            "novikov_map": {"Q": {"c": "1", "e": 0}}}
    mp, sp_ = tmp_path / "m.json", tmp_path / "s.json"
    mp.write_text(json.dumps(model))
    sp_.write_text(json.dumps(spec))
    code, _, err = run(capsys, "expand", str(mp), str(sp_), "--trunc", "2", "--degree-cap", "60")
    assert code == 3 and "converge" in err
