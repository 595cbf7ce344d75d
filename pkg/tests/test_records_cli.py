import json
from fractions import Fraction

import numpy as np
import pytest

from qcdesign import cli, records, regsel
from qcdesign.errors import DesignParseError
from qcdesign.gray import SignMatrix
from conftest import full_factorial


@pytest.fixture(scope="module")
def ma_small():
    return regsel.ma_design(3, 32, 19)


def test_record_round_trip(ma_small):
    rec = records.record_from_ma(ma_small)
    text = rec.dumps()
    again = records.DesignRecord.loads(text)
    assert again == rec
    assert again.dumps() == text
    assert records.verify_record(rec)
    assert rec.filename == "qc_n3_N32_q19.json"


def test_record_json_shape(ma_small):
    data = records.record_from_ma(ma_small).to_json()
    assert data["parity"] == "odd" and data["halved"] is True
    assert data["resolution"] == [7, 2]
    assert all(isinstance(p, list) and len(p) == 2 for p in data["wlp"])
    assert data["B"] == ["1", "2"]


def test_tampered_record_fails(ma_small):
    data = records.record_from_ma(ma_small).to_json()
    data["wlp"][2] = [data["wlp"][2][0] + 1, 1]
    assert not records.verify_record(records.DesignRecord.from_json(data))


def test_csv_round_trip():
    D = full_factorial(3)
    for header in (False, True):
        text = records.design_to_csv(D, header)
        assert text.splitlines()[0] == ("1,2,3" if header else "1,1,1")
        assert records.design_from_csv(text) == D


def test_csv_errors():
    with pytest.raises(DesignParseError, match="line 2"):
        records.design_from_csv("1,-1\n1,0\n")
    with pytest.raises(DesignParseError, match="line 3"):
        records.design_from_csv("1,-1\n1,1\n1\n")
    with pytest.raises(DesignParseError, match="line 1"):
        records.design_from_csv("a,b\n")
    with pytest.raises(DesignParseError):
        records.design_from_csv("\n\n")


def test_csv_explicit_header_flag():
    assert records.design_from_csv("x,y\n1,-1\n", header=True).entries.tolist() == [[1, -1]]


def test_atomic_write(tmp_path):
    p = records.atomic_write(tmp_path / "sub" / "a.txt", "hello")
    assert p.read_text() == "hello"
    assert [f.name for f in p.parent.iterdir()] == ["a.txt"]


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cli_omega(capsys):
    code, out, _ = run(capsys, "omega", "--n", "2")
    assert code == 0 and out.split()[:6] == ["01", "10", "11", "12", "13", "21"]
    code, out, _ = run(capsys, "omega", "--n", "4", "--last-even", "--json")
    assert json.loads(out)["size"] == 56
    code, _, err = run(capsys, "omega", "--n", "1")
    assert code == 2 and "error" in err


def test_cli_ma_writes_files(tmp_path, capsys):
    code, out, _ = run(capsys, "ma", "--n", "4", "--runs", "128", "--q", "103", "--out", str(tmp_path))
    assert code == 0
    assert "A3 = 1360" in out and "A4 = 35707" in out
    rec = records.DesignRecord.loads((tmp_path / "qc_n4_N128_q103.json").read_text())
    assert rec.wlp.A(3) == 1360
    D = records.read_design(tmp_path / "qc_n4_N128_q103.csv")
    assert D.entries.shape == (128, 103)
    code, out, _ = run(capsys, "verify", "--record", str(tmp_path / "qc_n4_N128_q103.json"))
    assert code == 0 and out.strip().endswith("ok")


def test_cli_ma_deterministic(tmp_path, capsys):
    for sub in ("a", "b"):
        run(capsys, "ma", "--n", "3", "--runs", "64", "--q", "50", "--out", str(tmp_path / sub), "--header")
    for name in ("qc_n3_N64_q50.json", "qc_n3_N64_q50.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_cli_ma_out_of_regime(capsys, tmp_path):
    code, _, err = run(capsys, "ma", "--n", "4", "--runs", "256", "--q", "2", "--out", str(tmp_path))
    assert code == 2 and "224..240" in err


def test_cli_wlp(tmp_path, capsys):
    f = tmp_path / "ff.csv"
    f.write_text(records.design_to_csv(full_factorial(3)))
    code, out, _ = run(capsys, "wlp", str(f), "--method", "direct")
    assert code == 0 and out.count("= 0") == 3
    ma = regsel.ma_design(3, 64, 50)
    g = tmp_path / "qc.csv"
    g.write_text(records.design_to_csv(ma.design, header=True))
    code, out, _ = run(capsys, "wlp", str(g), "--method", "both", "--max-k", "5", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["method"] == "both" and len(data["A"]) == 5
    bad = tmp_path / "bad.csv"
    bad.write_text("1,1\n1,2\n")
    code, _, err = run(capsys, "wlp", str(bad))
    assert code == 2 and "line 2" in err


def test_cli_wlp_distance_refuses_irregular(tmp_path, capsys):
    rng = np.random.default_rng(1)
    f = tmp_path / "r.csv"
    f.write_text(records.design_to_csv(SignMatrix(rng.choice([1, -1], size=(12, 5)))))
    code, _, err = run(capsys, "wlp", str(f), "--method", "distance")
    assert code == 2


def test_cli_wlp_both_disagreement_exit_code(tmp_path, capsys, monkeypatch):
    f = tmp_path / "ff.csv"
    f.write_text(records.design_to_csv(full_factorial(3)))
    real = cli.wlp_direct
    monkeypatch.setattr(
        cli, "wlp_direct",
        lambda D, k: type(real(D, k))(D.runs, D.factors, (D.runs**2,) + (1,) * k),
    )
    code, _, err = run(capsys, "wlp", str(f), "--method", "both")
    assert code == 3 and "disagree" in err


def test_cli_table1(capsys):
    code, out, _ = run(capsys, "table1", "--n", "4")
    assert code == 0 and "[1 2 12 3 13 23 123]" in out
    code, out, _ = run(capsys, "table1", "--n", "5", "--json")
    assert len(json.loads(out)["rows"]) == 15
    code, _, err = run(capsys, "table1", "--n", "6")
    assert code == 2 and "n = 3, 4, 5" in err


def test_cli_verify(capsys):
    code, out, _ = run(capsys, "verify", "--n", "2")
    assert code == 0 and "FAIL" not in out


def test_cli_profile(capsys):
    code, out, _ = run(capsys, "profile", "--complement", "10,12")
    data = json.loads(out)
    assert code == 0 and data["cubic_score"] == 768 and data["gap"] == 0
    code, out, _ = run(capsys, "profile", "--complement", "10,12", "--odd-role", "10")
    assert json.loads(out)["cubic_score"] == 432
