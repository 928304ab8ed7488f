import csv
import io
import json
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import pytest

from recgrow import io as rio
from recgrow.cli import main, parse_config, run
from recgrow.places import INFINITY, Place
from conftest import CORPUS, PX

FIB = {"char_coeffs": [-1, -1, 1], "initial_terms": [0, 1], "epsilon": "1/10",
       "n_max": 200, "precision_bits": 256}


@pytest.fixture
def files(tmp_path):
    (tmp_path / "seq.toml").write_text(rio.dumps_spec(CORPUS["worked"], "toml"))
    (tmp_path / "cube.json").write_text(rio.dumps_spec(CORPUS["cube"], "json"))
    (tmp_path / "ralpha.json").write_text(rio.dumps_spec(CORPUS["rational_alpha"], "json"))
    (tmp_path / "collision.json").write_text(rio.dumps_spec(CORPUS["collision"], "json"))
    (tmp_path / "degen.json").write_text(json.dumps({"terms": [
        {"alpha": {"num": ["0/1", "1/1"], "den": ["1/1"]}, "coeffs": [{"num": ["1/1"], "den": ["1/1"]}]},
        {"alpha": {"num": ["0/1", "3/1"], "den": ["1/1"]}, "coeffs": [{"num": ["1/1"], "den": ["1/1"]}]},
    ]}))
    (tmp_path / "fib.json").write_text(json.dumps(FIB))
    (tmp_path / "tm1.json").write_text(json.dumps(
        {"char_coeffs": [-1, 0, 1], "initial_terms": [0, 1], "epsilon": "1/10"}))
    (tmp_path / "zann.json").write_text(json.dumps(
        {"phis": ["x^2", "1 - x^2"], "r": 0, "S": ["inf"]}))
    (tmp_path / "zbad.json").write_text(json.dumps(
        {"phis": [{"num": ["1/1"], "den": ["0/1", "1/1"]}, "x"], "r": 0, "S": ["inf"]}))
    return tmp_path


def _run(args, capsys):
    code = main([str(a) for a in args])
    out = capsys.readouterr()
    return code, out.out, out.err


# ---------------------------------------------------------------- parse_config

def test_parse_verify(files):
    cfg = parse_config(["verify", "--input", str(files / "seq.toml"), "--mu", "inf",
                        "--n-max", "300"])
    assert (cfg.command, cfg.mu, cfg.n_max) == ("verify", INFINITY, 300)


def test_parse_numfield(files):
    cfg = parse_config(["numfield", "--input", str(files / "fib.json"), "--epsilon", "1/10",
                        "--n-max", "200"])
    assert cfg.command == "numfield" and cfg.epsilon == Fraction(1, 10) and cfg.n_max == 200


def test_parse_factor_mu(files):
    cfg = parse_config(["verify", "--input", str(files / "seq.toml"), "--mu", "factor:x^2+1"])
    assert cfg.mu == Place(PX ** 2 + 1)


@pytest.mark.parametrize("argv", [
    ["bogus", "--input", "x"],
    ["verify"],
    ["verify", "--input", "missing.toml"],
    ["numfield", "--input", "{fib}", "--epsilon", "1/x"],
    ["numfield", "--input", "{fib}", "--epsilon", "2"],
    ["verify", "--input", "{seq}", "--n-max", "-1"],
    ["verify", "--input", "{seq}", "--mu", "point:q"],
])
def test_usage_errors_exit_2(files, argv, capsys):
    argv = [a.format(fib=files / "fib.json", seq=files / "seq.toml") for a in argv]
    with pytest.raises(SystemExit) as exc:
        parse_config(argv)
    assert exc.value.code == 2
    assert capsys.readouterr().err


# ---------------------------------------------------------------- run

def test_verify_worked_csv(files, capsys):
    code, out, _ = _run(["verify", "-i", files / "seq.toml", "--n-max", "300"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "# n0_observed=0"
    rows = list(csv.DictReader(io.StringIO("\n".join(l for l in lines if not l.startswith("#")))))
    assert list(rows[0]) == ["n", "mu_Gn", "lower", "upper", "ok", "zero_skip"]
    assert len(rows) == 301
    for r in rows:
        n = int(r["n"])
        assert (int(r["mu_Gn"]), int(r["lower"]), int(r["upper"])) == (-(n + 1), -1 - n, 2 - n)
        assert r["ok"] == "true" and r["zero_skip"] == "false"


def test_verify_json(files, capsys):
    code, out, _ = _run(["verify", "-i", files / "ralpha.json", "--n-max", "10", "-f", "json",
                         "--mu", "point:0"], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["n0_observed"] is not None and len(data["rows"]) == 11


def test_constants_json(files, capsys):
    code, out, _ = _run(["constants", "-i", files / "seq.toml"], capsys)
    data = json.loads(out)
    assert code == 0
    assert {k: data[k] for k in ("c_tilde", "q", "size_over_C", "c1", "c2")} == \
        {"c_tilde": -1, "q": 2, "size_over_C": 3, "c1": 1, "c2": 2}
    assert data["S"] == [["0/1", "1/1"], ["1/1", "1/1"], "inf"]


def test_degree_growth(files, capsys):
    code, out, _ = _run(["degree-growth", "-i", files / "cube.json", "--n-max", "20"], capsys)
    assert code == 0
    rows = [l.split(",") for l in out.splitlines() if l[0].isdigit()]
    assert all(r[4] == "0" for r in rows)
    code, _, err = _run(["degree-growth", "-i", files / "ralpha.json"], capsys)
    assert code == 2 and "polynomial data" in err


def test_horizon(files, capsys):
    code, out, _ = _run(["horizon", "-i", files / "collision.json", "--n-max", "200"], capsys)
    assert code == 0 and out.splitlines()[0] == "# horizon=2"
    assert out.splitlines()[3] == "1,false,1:0;2:0"
    code, out, _ = _run(["horizon", "-i", files / "collision.json", "-f", "json"], capsys)
    data = json.loads(out)
    assert data["horizon"] == 2 and data["dependent"] == [{"n": 1, "subset": [[1, 0], [2, 0]]}]


def test_zannier_commands(files, capsys):
    code, out, _ = _run(["zannier", "-i", files / "zann.json"], capsys)
    assert code == 0
    assert json.loads(out) == {"n": 2, "r": 0, "size_over_C": 1, "lhs": 2, "rhs": 3, "ok": True}
    code, _, err = _run(["zannier", "-i", files / "zbad.json"], capsys)
    assert code == 2 and "S violates hypothesis" in err


def test_numfield_fibonacci(files, capsys):
    code, out, _ = _run(["numfield", "-i", files / "fib.json"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "# min_n=17"
    body = [l.split(",") for l in lines if not l.startswith("#")]
    assert body[0] == ["n", "abs_Gn_digits", "threshold_log", "ok"]
    assert body[1 + 16][3] == "false" and body[1 + 17][3] == "true"
    assert body[1 + 200][1] == str(280571172992510140037611932413038677189525)


def test_numfield_degenerate(files, capsys):
    code, _, err = _run(["numfield", "-i", files / "tm1.json"], capsys)
    assert code == 2 and "degenerate" in err


def test_degenerate_spec_exit_2(files, capsys):
    code, _, err = _run(["verify", "-i", files / "degen.json"], capsys)
    assert code == 2 and "degenerate" in err


def test_malformed_input_exit_2(files, capsys):
    bad = files / "bad.json"
    bad.write_text('{"terms": [{"alpha": ["1.5"], "coeffs": [["1/1"]]}]}')
    code, _, err = _run(["verify", "-i", bad], capsys)
    assert code == 2 and "malformed rational" in err
    bad.write_text("{not json")
    code, _, _ = _run(["constants", "-i", bad], capsys)
    assert code == 2


def test_violation_exit_1(files, capsys, monkeypatch):
    # a broken constant must surface as exit 1, not as bad input
    import recgrow.bounds as bounds
    monkeypatch.setattr(bounds, "theorem1_constant", lambda spec, mu: -5)
    code, out, _ = _run(["verify", "-i", files / "seq.toml", "--n-max", "5"], capsys)
    assert code == 1 and out.startswith("# n0_observed=none")


def test_output_file(files, capsys):
    target = files / "out.csv"
    code = main(["verify", "-i", str(files / "seq.toml"), "--n-max", "5", "-o", str(target)])
    assert code == 0 and capsys.readouterr().out == ""
    assert target.read_text().startswith("# n0_observed=0\n")


# ---------------------------------------------------------------- determinism

@pytest.mark.parametrize("argv", [
    ["verify", "-i", "seq.toml", "--n-max", "120"],
    ["verify", "-i", "seq.toml", "--n-max", "60", "-f", "json", "--mu", "factor:x^2+1"],
    ["constants", "-i", "ralpha.json", "-f", "csv"],
    ["degree-growth", "-i", "seq.toml", "-f", "json"],
    ["horizon", "-i", "collision.json"],
    ["zannier", "-i", "zann.json", "-f", "csv"],
    ["numfield", "-i", "fib.json", "-f", "json"],
])
def test_subprocess_byte_identical(files, argv):
    cmd = [sys.executable, "-m", "recgrow"] + argv
    a = subprocess.run(cmd, cwd=files, capture_output=True, check=True)
    b = subprocess.run(cmd, cwd=files, capture_output=True, check=True,
                       env={**__import__("os").environ, "RECGROW_THREADS": "3"})
    assert a.stdout == b.stdout and a.stdout
    # exact reports carry no floats; only numfield's threshold_log column is decimal
    assert b"." not in a.stdout or argv[0] == "numfield"


def test_round_trip_through_cli(files, capsys, tmp_path):
    # spec -> file -> CLI equals spec -> CLI directly from the re-serialized file
    for name, spec in CORPUS.items():
        p = tmp_path / f"{name}.json"
        p.write_text(rio.dumps_spec(spec))
        assert rio.load_spec(p) == spec
        q = tmp_path / f"{name}.toml"
        q.write_text(rio.dumps_spec(rio.load_spec(p), "toml"))
        assert rio.load_spec(q) == spec
        r1 = run(parse_config(["constants", "-i", str(p)]))
        out1 = capsys.readouterr().out
        r2 = run(parse_config(["constants", "-i", str(q)]))
        out2 = capsys.readouterr().out
        assert r1 == r2 == 0 and out1 == out2
