from __future__ import annotations

import json
import subprocess
import sys

import pytest

from tdnet.cli import main


@pytest.fixture()
def files(tmp_path, capsys):
    c5, td, h = tmp_path / "c5.json", tmp_path / "td23.json", tmp_path / "H.json"
    assert main(["base", "cycle", "--n", "5", "--out", str(c5), "-q"]) == 0
    assert main(["td", "build", "--delta", "2", "--k", "3", "--out", str(td), "-q"]) == 0
    assert main(["construct", "two-step", "--base", str(c5), "--td", str(td), "--out", str(h), "-q"]) == 0
    capsys.readouterr()
    return tmp_path


def test_td_pipeline():
    cmd = [sys.executable, "-m", "tdnet.cli"]
    build = subprocess.run(cmd + ["td", "build", "--delta", "3", "--k", "2"], capture_output=True, text=True, check=True)
    check = subprocess.run(cmd + ["td", "verify"], input=build.stdout, capture_output=True, text=True)
    assert check.returncode == 0 and "pass" in check.stdout
    assert "tdnet 0.1.0" in check.stderr


def test_table(capsys, tmp_path):
    fig = tmp_path / "servers.png"
    assert main(["dcn", "table-qfz", "--figure", str(fig), "-q"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert len(out) == 1 + 8
    assert "3,064,320" in "\n".join(out)
    assert fig.stat().st_size > 0
    assert main(["dcn", "table-qfz", "--json", "-q"]) == 0
    rows = json.loads(capsys.readouterr().out)["rows"]
    assert rows[3] == {"topology": "N_A^2(H*)", "ports": 64, "diameter": 6, "servers": 437760, "switches": 102600}


def test_counts(capsys):
    argv = ["dcn", "counts", "--n", "346", "--e", "346", "--d", "8", "--delta", "8", "--k", "7", "--c", "4", "--json", "-q"]
    assert main(argv) == 0
    data = json.loads(capsys.readouterr().out)
    assert (data["servers"], data["level1"], data["level2"]) == (406896, 16954, 9688)
    assert main(argv[:-4] + ["--c", "8", "-q"]) == 1


def test_sweep_end_to_end(files, capsys):
    fig = files / "hist.png"
    code = main(["verify", "sweep", "--graph", str(files / "H.json"), "--theorem", "2", "--figure", str(fig), "-q", "--json"])
    assert code == 0
    data = json.loads(capsys.readouterr().out)
    assert data["pairs_tested"] == 1980 and data["failures"] == []
    assert fig.stat().st_size > 0


def test_sweep_json_is_reproducible(files, capsys):
    argv = ["verify", "sweep", "--graph", str(files / "H.json"), "--theorem", "5", "--trials", "40", "--seed", "3", "--json", "-q"]
    assert main(argv) == 0
    first = capsys.readouterr().out
    main(argv)
    assert capsys.readouterr().out == first


def test_route_and_verify(files, capsys):
    h = str(files / "H.json")
    p = str(files / "p.json")
    assert main(["route", "one-to-one", "--graph", h, "--src", "Q0|U0_0", "--dst", "Q2|U1_1", "--emit-paths", p, "-q"]) == 0
    capsys.readouterr()
    data = json.loads(open(p).read())
    assert data["mode"] == "internal" and len(data["paths"]) == 2
    assert main(["verify", "paths", "--graph", h, "--paths", p, "-q"]) == 0
    capsys.readouterr()
    assert main(["verify", "menger", "--graph", h, "--src", "Q0|U0_0", "--dst", "Q2|U1_1", "--json", "-q"]) == 0
    assert json.loads(capsys.readouterr().out)["count"] == 2
    # tamper: make the two paths share an interior element
    data["paths"][1][1] = data["paths"][0][1]
    open(p, "w").write(json.dumps(data))
    assert main(["verify", "paths", "--graph", h, "--paths", p, "-q"]) == 1


def test_route_one_to_many(files, capsys):
    h = str(files / "H.json")
    code = main(["route", "one-to-many", "--graph", h, "--src", "Q0|U0_0", "--targets", "Q2|U1_1,Q2|U1_1", "--json", "-q"])
    assert code == 0
    assert json.loads(capsys.readouterr().out)["mode"] == "edge"


def test_exit_codes(files, capsys):
    h = str(files / "H.json")
    assert main(["route", "one-to-one", "--graph", h, "--src", "nope", "--dst", "Q2|U1_1", "-q"]) == 1
    assert main(["td", "verify", "--in", str(files / "missing.json"), "-q"]) == 2
    (files / "junk.json").write_text("{")
    assert main(["td", "verify", "--in", str(files / "junk.json"), "-q"]) == 2
    assert main(["td", "build", "--delta", "3", "--k", "6", "-q"]) == 1
    assert main(["route", "one-to-one", "--graph", str(files / "td23.json"), "--src", "a", "--dst", "b", "-q"]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["td", "build", "--delta", "3", "--k", "2", "--bogus"])
    assert exc.value.code == 2


def test_dcn_commands(tmp_path, capsys):
    c6, td, star = tmp_path / "c6.json", tmp_path / "td.json", tmp_path / "star.json"
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["base", "cycle", "--n", "6", "--out", str(c6), "-q"]) == 0
    assert main(["td", "build", "--delta", "2", "--k", "3", "--out", str(td), "-q"]) == 0
    assert main(["construct", "three-step", "--base", str(c6), "--td", str(td), "--out", str(star), "-q"]) == 0
    assert main(["dcn", "method-a", "--in", str(star), "--c", "1", "--out", str(a), "-q"]) == 0
    assert main(["dcn", "method-b", "--in", str(a), "--out", str(b), "-q"]) == 0
    assert main(["dcn", "diameter", "--in", str(a), "--json", "-q"]) == 0
    # the 12-cycle has line-diameter 6, plus two server hops
    assert json.loads(capsys.readouterr().out)["diameter"] == 8
    assert main(["export-dot", "--in", str(b), "-q"]) == 0
    assert "hexagon" in capsys.readouterr().out


def test_base_double_cover(tmp_path, capsys):
    c5 = tmp_path / "c5.json"
    main(["base", "cycle", "--n", "5", "--out", str(c5), "-q"])
    assert main(["base", "double-cover", "--in", str(c5), "-q"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert len(data["nodes"]) == 10 and len(data["edges"]) == 30
