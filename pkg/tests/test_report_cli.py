import csv
import io
import json
from pathlib import Path

import jsonschema
import pytest

from quncertainty import __version__
from quncertainty.cli import main
from quncertainty.report import RunRecord, emit, parse

SCHEMA = json.loads((Path(__file__).resolve().parents[1] / "docs" / "run_record.schema.json").read_text())


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def record(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--deterministic")
    data = json.loads(out)
    jsonschema.validate(data, SCHEMA)
    assert data["exit_code"] == code
    return code, data


def test_analyze_eigenstate(capsys):
    code, data = record(capsys, "analyze", "--state", "lz-eigenstate:m=1", "--pair", "phi,Lz", "--grid-n", "2049")
    assert code == 0
    res = data["results"][0]
    assert res["applicability"]["modified"] == "Applies"
    assert res["applicability"]["standard"] == "InapplicableDomain(BoundaryConditionViolated)"
    assert res["report"]["satisfied"] == {"modified": True}


def test_analyze_gaussian(capsys):
    code, data = record(capsys, "analyze", "--state", "gaussian:sigma=1,chirp=0.5", "--pair", "x,p",
                        "--grid-n", "4097")
    assert code == 0
    rep = data["results"][0]["report"]
    assert set(rep["satisfied"]) == {"modified", "commutator", "standard"}
    assert rep["stats"]["covariance"] == pytest.approx(0.25, abs=1e-4)


def test_analyze_cusp_inapplicable(capsys):
    code, data = record(capsys, "analyze", "--state", "cusp", "--pair", "x,p", "--grid-n", "1025")
    assert code == 3
    res = data["results"][0]
    assert res["status"] == "inapplicable"
    assert res["domain_report"]["divergence_flag"] is True


def test_analyze_multiplier(capsys):
    code, data = record(capsys, "analyze", "--state", "circle-packet:c0=1,c1=0.5", "--pair", "f:cos(phi),Lz",
                        "--grid-n", "1025")
    assert code == 0
    assert data["results"][0]["applicability"]["commutator"] == "Applies"


def test_domain_check(capsys):
    code, data = record(capsys, "domain-check", "--state", "cusp", "--operator", "p", "--grid-n", "1025")
    assert code == 3
    assert data["results"][0]["domain_report"]["in_domain"] == "No"
    code, data = record(capsys, "domain-check", "--state", "lz:m=2", "--operator", "Lz", "--grid-n", "1025")
    assert code == 0


def test_sweep_json_and_csv(capsys):
    code, data = record(capsys, "sweep", "--state", "gaussian", "--range", "chirp=0:1:0.5", "--pair", "x,p",
                        "--grid-n", "2049", "--jobs", "2")
    assert code == 0 and len(data["results"]) == 3
    code, out, _ = run(capsys, "sweep", "--state", "gaussian", "--range", "chirp=0:1:0.5", "--pair", "x,p",
                       "--grid-n", "2049", "--output", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 3
    assert float(rows[2]["report.stats.covariance"]) == pytest.approx(0.5, abs=1e-3)


def test_classical(capsys, tmp_path):
    path = tmp_path / "s.csv"
    path.write_text("0,0\n1,2\n2,4\n")
    code, data = record(capsys, "classical", str(path))
    assert code == 0 and data["results"][0]["report"]["equality"]


def test_human_output(capsys):
    code, out, _ = run(capsys, "analyze", "--state", "lz:m=0", "--pair", "phi,Lz", "--grid-n", "1025",
                       "--output", "human")
    assert code == 0 and "modified" in out and "InapplicableDomain" in out


def test_usage_errors(capsys, tmp_path):
    assert run(capsys, "analyze", "--state", "nosuch", "--pair", "x,p")[0] == 1
    assert run(capsys, "analyze", "--state", "gaussian", "--pair", "x")[0] == 1
    assert run(capsys, "analyze", "--state", "gaussian", "--pair", "x,q")[0] == 1
    assert run(capsys, "analyze", "--state", "gaussian", "--pair", "phi,p")[0] == 1
    bad = tmp_path / "cfg.json"
    bad.write_text('{"bogus": 1}')
    code, _, err = run(capsys, "analyze", "--state", "gaussian", "--pair", "x,p", "--config", str(bad))
    assert code == 1 and "bogus" in err


def test_config_file_and_hbar(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text('{"line_n": 2049, "hbar": 2.0}')
    code, data = record(capsys, "analyze", "--state", "gaussian", "--pair", "x,p", "--config", str(cfg))
    assert code == 0
    assert data["config"]["hbar"] == 2.0
    assert data["results"][0]["report"]["standard_bound"] == pytest.approx(1.0, abs=1e-4)
    code, data = record(capsys, "analyze", "--state", "gaussian", "--pair", "x,p", "--config", str(cfg),
                        "--hbar", "3")
    assert data["results"][0]["report"]["standard_bound"] == pytest.approx(1.5, abs=1e-4)


def test_deterministic_bytes(capsys, tmp_path):
    args = ["analyze", "--state", "circle-packet:c0=1,c2=0.3j,alpha=0.7", "--pair", "phi,Lz", "--grid-n", "1025",
            "--deterministic"]
    outs = []
    for i in range(2):
        target = tmp_path / f"r{i}.json"
        main(args + ["--out", str(target)])
        outs.append(target.read_bytes())
    assert outs[0] == outs[1]


def test_timestamps_present(capsys):
    code, out, _ = run(capsys, "analyze", "--state", "lz:m=0", "--pair", "phi,Lz", "--grid-n", "513")
    data = json.loads(out)
    assert data["started"] and data["finished"]


def test_roundtrip(capsys):
    main(["analyze", "--state", "gaussian", "--pair", "x,p", "--grid-n", "1025", "--deterministic"])
    text = capsys.readouterr().out
    rec = parse(text)
    assert isinstance(rec, RunRecord)
    assert parse(emit(rec)) == rec
    assert emit(rec) == text


def test_version(capsys):
    code, out, _ = run(capsys, "version")
    assert code == 0 and out.strip() == __version__


def test_exit_code_rules():
    from quncertainty.cli import _exit_code
    ok = {"report": {"satisfied": {"modified": True, "standard": True}}}
    bad = {"report": {"satisfied": {"modified": True, "standard": False}}}
    none = {"report": None}
    assert _exit_code([ok]) == 0
    assert _exit_code([ok, bad]) == 2
    assert _exit_code([none]) == 3
    assert _exit_code([none, ok]) == 0
