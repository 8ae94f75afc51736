import json
import re
import subprocess
import sys

import pytest

from heightlab import io
from heightlab.cli import RunConfig, UsageError, main


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def k4_file(tmp_path, capsys):
    p = tmp_path / "k4.json"
    assert run(capsys, "generate", "--family", "k4", "--out", p)[0] == 0
    return p


def test_compute_all(capsys, k4_file):
    code, out, _ = run(capsys, "compute", "--param", "all", "--in", k4_file)
    assert code == 0
    rep = json.loads(out)
    assert (rep["pw"], rep["op"], rep["shh"], rep["hh"]) == (3, 2, 3, 3)
    assert rep["schema"] == "heightlab/v1/report"


def test_outputs_revalidate(capsys, tmp_path, k4_file):
    prefix = tmp_path / "k4"
    assert run(capsys, "compute", "--in", k4_file, "--cert", prefix)[0] == 0
    for name in ("pw", "op"):
        assert run(capsys, "validate", "--in", f"{prefix}.{name}.json", "--graph", k4_file)[0] == 0
    for name in ("hh", "shh"):
        assert run(capsys, "validate", "--in", f"{prefix}.{name}.json")[0] == 0
    grid = tmp_path / "g.json"
    trace = tmp_path / "t.json"
    assert run(capsys, "convert", "--in", f"{prefix}.shh.json", "--out", grid, "--trace", trace)[0] == 0
    assert run(capsys, "validate", "--in", grid, "--simple")[0] == 0
    assert io.kind_of(io.read_json(trace)) == "trace"
    back = tmp_path / "h.json"
    assert run(capsys, "convert", "--in", grid, "--out", back)[0] == 0
    code, out, _ = run(capsys, "validate", "--in", back)
    doc = json.loads(out)
    assert code == 0 and doc["valid"]
    assert set(doc["boundary_slides"]) == {"atomic", "two_step"}


def test_render_fig1(capsys, tmp_path):
    from heightlab import families

    src = tmp_path / "fig1c.json"
    io.write_json(src, io.encode_gridrep(families.fig1_gridrep(), families.fig1_graph()))
    svg = tmp_path / "fig1c.svg"
    assert run(capsys, "render", "--kind", "gridrep", "--in", src, "--out", svg)[0] == 0
    text = svg.read_text()
    assert text.count("<rect") == 32
    ys = {float(y) for y in re.findall(r'<rect[^>]* y="([\d.]+)"', text)}
    assert len(ys) == 4
    assert run(capsys, "render", "--kind", "contact", "--in", src, "--out", tmp_path / "c.svg")[0] == 0
    assert (tmp_path / "c.svg").read_text().count('class="polygon"') == 5
    graph = tmp_path / "fig1.json"
    io.write_json(graph, io.encode_graph(families.fig1_graph()))
    assert run(capsys, "render", "--in", graph, "--out", tmp_path / "g.svg")[0] == 0
    assert (tmp_path / "g.svg").read_text().count("<circle") == 5


def test_broken_homotopy(capsys, tmp_path, k4_file):
    prefix = tmp_path / "k4"
    run(capsys, "compute", "--in", k4_file, "--param", "shh", "--cert", prefix)
    doc = io.read_json(f"{prefix}.shh.json")
    doc["moves"][1]["vertices"][1] = doc["moves"][1]["vertices"][0]
    broken = tmp_path / "broken.json"
    io.write_json(broken, doc)
    code, out, _ = run(capsys, "validate", "--kind", "homotopy", "--in", broken)
    assert code == 1
    v = json.loads(out)
    assert v["valid"] is False and v["index"] == 1


def test_malformed_json(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"faces": [[0,1,2]')
    code, _, err = run(capsys, "validate", "--in", p)
    assert code == 2 and "schema error at $" in err


def test_schema_error_path(capsys, tmp_path):
    p = tmp_path / "bad.json"
    io.write_json(p, {"schema": "heightlab/v1/gridrep", "height": 1, "width": 2, "labels": [[0, "x"]]})
    code, _, err = run(capsys, "validate", "--in", p)
    assert code == 2 and "$.labels[0][1]" in err


def test_not_a_triangulation(capsys, tmp_path):
    p = tmp_path / "quad.json"
    io.write_json(p, {"schema": "heightlab/v1/graph", "faces": [[0, 1, 2], [0, 2, 3]]})
    code, out, _ = run(capsys, "validate", "--in", p)
    assert code == 1 and json.loads(out)["valid"] is False
    assert run(capsys, "compute", "--in", p)[0] == 2


def test_usage_errors(capsys, k4_file):
    assert run(capsys, "nope")[0] == 2
    assert run(capsys, "compute", "--in", k4_file, "--budget", "0")[0] == 2
    assert run(capsys, "compute", "--in", k4_file, "--out", k4_file)[0] == 2
    assert run(capsys, "compute")[0] == 2
    assert run(capsys, "generate", "--family", "nested")[0] == 2


def test_budget_exceeded(capsys, tmp_path):
    p = tmp_path / "s.json"
    run(capsys, "generate", "--family", "apex_strip", "--size", "11", "--out", p)
    code, out, _ = run(capsys, "compute", "--in", p, "--param", "shh", "--budget", "10")
    assert code == 1 and json.loads(out)["error"] == "budget_exceeded"


def test_verify_chain(capsys):
    code, out, _ = run(capsys, "verify-chain", "--family", "stacked", "--size", "6", "--count", "4", "--seed", "2")
    assert code == 0
    doc = json.loads(out)
    assert doc["ok"] and len(doc["chain"]) == 4


def test_sp_pipeline(capsys, tmp_path):
    g = tmp_path / "sp.json"
    assert run(capsys, "generate", "--family", "sp", "--size", "64", "--seed", "5", "--out", g)[0] == 0
    grid = tmp_path / "spg.json"
    assert run(capsys, "convert", "--in", g, "--out", grid)[0] == 0
    assert io.read_json(grid)["height"] <= 14
    assert run(capsys, "validate", "--in", g)[0] == 0


def test_run_config():
    with pytest.raises(UsageError):
        RunConfig("compute", budget=-1)
    with pytest.raises(UsageError):
        RunConfig("compute", in_path="a.json", out_path="./a.json")
    RunConfig("compute", in_path="a.json", out_path="-")


def test_console_script(tmp_path):
    out = subprocess.run([sys.executable, "-m", "heightlab.cli", "generate", "--family", "k3"],
                         capture_output=True, text=True)
    assert out.returncode == 0
    assert json.loads(out.stdout)["n"] == 3
