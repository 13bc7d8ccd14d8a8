import json
import math
import os
import subprocess
import sys
from pathlib import Path

import pytest

from loopvertex.cli import main

DATA = Path(__file__).resolve().parents[1] / "data"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write_spec(tmp_path, spec, name="g.json"):
    p = tmp_path / name
    p.write_text(json.dumps(spec))
    return str(p)


def test_weights_fat_triangle(capsys):
    code, out, _ = run(capsys, "weights", str(DATA / "fat_triangle.json"))
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "tree\tweight"
    assert "{l1,l2}\t1/6" in lines
    assert lines.count("{l2,l4}\t5/24") == 1
    assert lines[-1] == "total\t1/1"


def test_trees_eye(capsys):
    code, out, _ = run(capsys, "trees", str(DATA / "eye.json"))
    assert code == 0
    assert "count\t12" in out and "matrix_tree\t12" in out


def test_disconnected_graph_exit_code(capsys, tmp_path):
    path = write_spec(tmp_path, {"vertices": [1, 2, 3], "edges": [{"id": 1, "ends": [1, 2]}]})
    assert run(capsys, "trees", path)[0] == 3
    assert run(capsys, "weights", path)[0] == 3
    code, out, _ = run(capsys, "weights", path, "--forests")
    assert code == 0 and out.startswith("forest\tweight")


def test_bad_input_exit_codes(capsys, tmp_path):
    bad = write_spec(tmp_path, {"vertices": [1], "edges": [{"id": 1, "ends": [1, 9]}]})
    code, _, err = run(capsys, "weights", bad)
    assert code == 2 and "$.edges[0].ends[1]" in err
    assert run(capsys, "weights", str(tmp_path / "missing.json"))[0] == 2
    assert run(capsys, "nonsense")[0] == 2
    assert run(capsys, "series", "--order", "4")[0] == 2
    assert run(capsys, "census", "--order", "0")[0] == 2


def test_series_both_sides(capsys):
    code, out, _ = run(capsys, "series", "--order", "3")
    doc = json.loads(out)
    assert code == 0 and doc["equal"] is True
    assert doc["lve"]["lambda_coefficients"] == ["1/1", "-3/1", "105/2", "-3465/2"]


def test_series_log(capsys):
    doc = json.loads(run(capsys, "series", "--order", "3", "--side", "log")[1])
    assert doc["lambda_coefficients"] == ["0/1", "-3/1", "48/1", "-1584/1"]


def test_census_order_one(capsys):
    code, out, err = run(capsys, "census", "--order", "1")
    assert code == 0
    assert json.loads(out) == {"L:1,1|E:0-1": {"count": "3/1", "order": 1},
                               "L:2|E:0-0": {"count": "6/1", "order": 1}}
    assert "9 extensions in 2 classes" in err


def test_resum_order_three(capsys):
    code, out, _ = run(capsys, "resum", "--order", "3")
    assert code == 0
    profile_rows = [l.split("\t") for l in out.splitlines() if l.startswith("# 123")]
    assert sorted(r[4] for r in profile_rows) == ["192/1", "384/1", "384/1"]
    assert all(r[4] == r[5] for r in profile_rows)
    balance = [l[2:].split("\t") for l in out.splitlines() if l[2:3].isdigit() and l[3:4] == "\t"]
    assert [(b[0], b[1], b[-1]) for b in balance] == [("1", "3/1", "True"), ("2", "105/1", "True"),
                                                     ("3", "10395/1", "True")]


def test_env_cap(capsys, monkeypatch):
    monkeypatch.setenv("LVE_MAX_ORDER", "1")
    assert run(capsys, "series", "--order", "2")[0] == 2
    assert run(capsys, "series", "--order", "1")[0] == 0
    monkeypatch.setenv("LVE_MAX_ORDER", "x")
    assert run(capsys, "series", "--order", "1")[0] == 2


def test_amplitude_bubble(capsys):
    code, out, _ = run(capsys, "amplitude", "--graph", str(DATA / "bubble.json"), "--dimension", "1")
    doc = json.loads(out)
    assert code == 0
    assert abs(doc["value"] - math.gamma(1.5)) <= 3 * doc["error"]
    assert round(doc["value"], 3) == 0.886


def test_amplitude_tree_and_errors(capsys):
    code, out, _ = run(capsys, "amplitude", "--tree", "V1|E:", "--dimension", "0", "--order", "2",
                       "--budget", "4096")
    doc = json.loads(out)
    assert code == 0 and [o["order"] for o in doc["orders"]] == [1, 2]
    assert abs(doc["orders"][0]["value"] + 2) <= 3 * doc["orders"][0]["error"] + 1e-9
    assert run(capsys, "amplitude", "--tree", "V9|E:", "--dimension", "0")[0] == 2
    assert run(capsys, "amplitude", "--graph", str(DATA / "bubble.json"), "--dimension", "2")[0] == 2


def test_output_and_manifest_reproduce(capsys, tmp_path):
    out1, man1 = tmp_path / "a.txt", tmp_path / "a.json"
    argv = ["--output", str(out1), "--manifest", str(man1),
            "amplitude", "--graph", str(DATA / "fat_triangle.json"), "--dimension", "0.5", "--budget", "4096"]
    assert main(argv) == 0
    assert capsys.readouterr().out == ""
    manifest = json.loads(man1.read_text())
    assert manifest["seed"] == 0
    assert manifest["inputs"][str(DATA / "fat_triangle.json")]
    first = out1.read_bytes()
    assert main(manifest["argv"]) == 0
    assert out1.read_bytes() == first
    assert json.loads(man1.read_text()) == manifest


def test_module_entry_point():
    env = dict(os.environ)
    proc = subprocess.run([sys.executable, "-m", "loopvertex", "series", "--order", "1", "--side", "feynman"],
                          capture_output=True, text=True, env=env, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["lambda_coefficients"] == ["1/1", "-3/1"]
