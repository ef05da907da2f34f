"""Command-line interface: exit codes, JSON output, run manifests."""

import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from rigidembed.cli import dumps17, main
from rigidembed.graphs import PLANE, RigidGraph
from rigidembed.systems import LengthAssignment

QUAD = RigidGraph.from_edges(
    "quad", PLANE, [(1, 2), (1, 3), (2, 3), (1, 4), (2, 4)]
)
QUAD_LENGTHS = LengthAssignment(
    {(1, 2): 1.0, (1, 3): 1.1, (2, 3): 0.9, (1, 4): 1.2, (2, 4): 0.8}, PLANE
)


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    (tmp_path / "quad.json").write_text(json.dumps(QUAD.to_json_dict()))
    (tmp_path / "quad_lengths.json").write_text(
        json.dumps(QUAD_LENGTHS.to_json_dict("quad"))
    )
    return tmp_path


# -- dumps17 -----------------------------------------------------------------


def test_dumps17_full_precision():
    s = dumps17({"x": 1 / 3, "n": 7, "t": "a"})
    assert "0.33333333333333331" in s
    assert json.loads(s) == {"x": 1 / 3, "n": 7, "t": "a"}


def test_dumps17_nested_and_bool():
    s = dumps17({"a": [1.5, {"b": (2.0, True, None)}]})
    doc = json.loads(s)
    assert doc == {"a": [1.5, {"b": [2.0, True, None]}]}
    assert '"1.5"' not in s  # floats are not quoted


# -- catalog -----------------------------------------------------------------


def test_catalog_list(runner, workdir):
    res = runner.invoke(main, ["catalog"])
    assert res.exit_code == 0
    assert "G_48" in res.output and "L_880" in res.output


def test_catalog_dump(runner, workdir):
    res = runner.invoke(main, ["catalog", "G_48"])
    assert res.exit_code == 0
    doc = json.loads(res.output)
    assert doc["known_complex"] == 48
    ids = {p["id"] for p in doc["published_lengths"]}
    assert {"G_48_start28", "G_48_adj32", "G_48_max48"} <= ids


def test_catalog_unknown_exits_2(runner, workdir):
    res = runner.invoke(main, ["catalog", "no_such_entry"])
    assert res.exit_code == 2


# -- bounds ------------------------------------------------------------------


def test_bounds_preset(runner, workdir):
    res = runner.invoke(main, ["bounds", "--preset", "L880"])
    assert res.exit_code == 0
    doc = json.loads(res.output)
    assert doc["bound"] == 860 and doc["exact"] is True
    assert abs(doc["base"] - 430 ** (1 / 7)) < 1e-12


def test_bounds_explicit(runner, workdir):
    res = runner.invoke(
        main,
        ["bounds", "--nG", "7", "--nH", "3", "--rG", "48", "--rH", "1", "--n", "11"],
    )
    assert res.exit_code == 0
    assert json.loads(res.output)["bound"] == 48 * 48


def test_bounds_missing_args_exits_2(runner, workdir):
    res = runner.invoke(main, ["bounds", "--nG", "7"])
    assert res.exit_code == 2


# -- enumerate ---------------------------------------------------------------


def test_enumerate_plane_six(runner, workdir):
    res = runner.invoke(
        main, ["enumerate", "--n", "6", "--dim", "2", "--classify", "-o", "g.jsonl"]
    )
    assert res.exit_code == 0
    doc = json.loads(res.output)
    assert doc["count"] == 13
    assert doc["H1-last"] + doc["H2-last"] == 13
    rows = [json.loads(l) for l in Path("g.jsonl").read_text().splitlines()]
    assert len(rows) == 13
    assert all(r["last_move"] in ("H1-last", "H2-last") for r in rows)


# -- solve -------------------------------------------------------------------


def test_solve_quad(runner, workdir):
    res = runner.invoke(
        main,
        ["solve", "quad.json", "quad_lengths.json", "--seed", "0",
         "--solutions", "sols.jsonl", "--manifest", "run.json"],
    )
    assert res.exit_code == 0, res.output
    doc = json.loads(res.output)
    assert doc["complex"] == 4
    assert 0 <= doc["real_filtered"] <= doc["real"] <= 4
    sols = [json.loads(l) for l in Path("sols.jsonl").read_text().splitlines()]
    assert len(sols) == 4
    for s in sols:
        assert s["class"] in ("Real", "Complex")
        assert s["residual"] < 1e-8
        assert all(len(z) == 2 for z in s["coords"])
    man = json.loads(Path("run.json").read_text())
    assert man["command"] == "solve"
    assert any(p.endswith("quad.json") for p in man["inputs"])
    assert any(p.endswith("sols.jsonl") for p in man["outputs"])
    digests = list(man["inputs"].values()) + list(man["outputs"].values())
    assert all(len(h) == 64 for h in digests)


def test_solve_bad_lengths_exits_2(runner, workdir):
    Path("bad.json").write_text("{not json")
    res = runner.invoke(main, ["solve", "quad.json", "bad.json"])
    assert res.exit_code == 2


def test_solve_mismatched_lengths_exits_2(runner, workdir):
    lam = LengthAssignment({(1, 2): 1.0}, PLANE)
    Path("partial.json").write_text(json.dumps(lam.to_json_dict("quad")))
    res = runner.invoke(main, ["solve", "quad.json", "partial.json"])
    assert res.exit_code == 2


def test_solve_missing_file_exits_2(runner, workdir):
    res = runner.invoke(main, ["solve", "nope.json", "quad_lengths.json"])
    assert res.exit_code == 2


# -- curve / maximize input validation ---------------------------------------


def test_curve_rejects_non_coupler_subgraph(runner, workdir):
    res = runner.invoke(
        main,
        ["curve", "quad.json", "quad_lengths.json", "--subgraph", "1,2,3,4,4"],
    )
    assert res.exit_code == 2


def test_maximize_rejects_unknown_strategy(runner, workdir):
    res = runner.invoke(main, ["maximize", "quad.json", "--start", "bogus"])
    assert res.exit_code == 2


def test_maximize_rejects_bad_subgraph_text(runner, workdir):
    res = runner.invoke(
        main,
        ["maximize", "quad.json", "--method", "linear", "--subgraph", "1,2"],
    )
    assert res.exit_code == 2


# -- manifests written by default --------------------------------------------


def test_default_manifest_path(runner, workdir):
    res = runner.invoke(main, ["bounds", "--preset", "G48"])
    assert res.exit_code == 0
    man = json.loads(Path("rigidembed-bounds.manifest.json").read_text())
    assert man["command"] == "bounds"
    assert man["version"]
    assert man["started"] and man["finished"]
