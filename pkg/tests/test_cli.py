import csv
import json

import pytest

from qdisc.certify import verify
from qdisc.cli import classify, main, parse_grid


def read_csv(path):
    lines = [l for l in open(path) if not l.startswith("#")]
    return list(csv.DictReader(lines))


def test_discriminate(tmp_path, capsys):
    out = tmp_path / "d.json"
    assert main(["discriminate", "--channels", "ad:0.67,bf:0.87", "--priors", "0.5,0.5",
                 "--strategies", "par,gen", "--out", str(out)]) == 0
    d = json.loads(out.read_text())
    assert d["version"] and d["run_config"]["channels"] == ["ad:0.67", "bf:0.87"]
    vals = {r["strategy"]: float(r["value"]) for r in d["results"]}
    assert 0.8346 < vals["par"] < 0.8347 and 0.8514 < vals["gen"] < 0.8515
    assert main(["discriminate", "--channels", "ad:0.2,ad:0.2", "--strategies", "sep"]) == 0
    assert float(json.loads(capsys.readouterr().out)["results"][0]["value"]) == pytest.approx(0.5)


def test_discriminate_is_deterministic(tmp_path):
    args = ["discriminate", "--channels", "ad:0.37,ad:0.87", "--strategies", "seq12", "--out",
            str(tmp_path / "x.json")]
    main(args)
    first = (tmp_path / "x.json").read_bytes()
    main(args)
    assert (tmp_path / "x.json").read_bytes() == first


def test_bad_input_exit_code(capsys):
    assert main(["discriminate", "--channels", "zz:1"]) == 2
    assert main(["discriminate", "--channels", "ad:0.2", "--priors", "0.5,0.5"]) == 2
    assert main(["discriminate", "--channels", "ad:0.2,ad:0.3", "--strategies", "foo"]) == 2


def test_certify_writes_verifiable_files(tmp_path, capsys):
    rc = main(["certify", "--channels", "ad:0.37,ad:0.87", "--strategies", "par,gen",
               "--assert-hierarchy", "--out", str(tmp_path)])
    assert rc == 0
    files = sorted(p.name for p in tmp_path.iterdir())
    assert files == ["gen_lower.json", "gen_upper.json", "par_lower.json", "par_upper.json"]
    for p in tmp_path.iterdir():
        d = json.loads(p.read_text())
        assert d["meta"]["run_config"]["command"] == "certify"
        assert d["meta"]["radicand_d"] == [7, 13]
        assert verify(d)
    assert "certified" in capsys.readouterr().out


def test_certify_hierarchy_fails_for_identical_channels(tmp_path):
    assert main(["certify", "--channels", "bf:0.9,bf:0.9", "--strategies", "par,seq12",
                 "--assert-hierarchy"]) == 1
    assert main(["certify", "--channels", "bf:0.9,bf:0.9", "--strategies", "par"]) == 0


def test_sweep(tmp_path):
    out = tmp_path / "s.csv"
    assert main(["sweep", "--gammas", "0.0,0.67", "--eta", "0.87", "--out", str(out)]) == 0
    rows = read_csv(out)
    assert list(rows[0]) == ["gamma", "par", "seq", "sep", "gen"]
    g0 = [float(rows[0][k]) for k in ("par", "seq", "sep", "gen")]
    assert all(a <= b + 1e-8 for a, b in zip(g0, g0[1:])) and 0.5 < g0[0] < 1  # identity against a weak bit flip
    assert 0.8346 < float(rows[1]["par"]) < 0.8347
    assert open(out).readline().startswith("# qdisc")


def test_hierarchy_scan(tmp_path, monkeypatch, capsys):
    out = tmp_path / "h.csv"
    assert main(["hierarchy-scan", "--samples", "2", "--seed", "3", "--out", str(out)]) == 0
    rows = read_csv(out)
    assert len(rows) == 2
    summary = json.loads((tmp_path / "h.summary.json").read_text())["summary"]
    assert summary["samples"] == 2
    first = out.read_bytes()
    monkeypatch.setenv("QDISC_THREADS", "2")
    assert main(["hierarchy-scan", "--samples", "2", "--seed", "3", "--out", str(out)]) == 0
    assert out.read_bytes() == first


def test_helpers():
    assert parse_grid("0.50:0.70:0.05") == ["0.50", "0.55", "0.60", "0.65", "0.70"]
    assert parse_grid("0.1,0.2") == ["0.1", "0.2"]
    assert classify([0.5, 0.6, 0.6, 0.7]) == (True, False, True, False)
