import json

import pytest

from hda_pathlab.cli import main
from hda_pathlab.dpath import PathPresentation, paths_equal
from hda_pathlab.precubical import PrecubicalSet, boundary_cube, grid_complex, standard_cube

from corpus import SWISS_CROSS

EXOTIC = {
    "segments": [
        {"cube": "**0", "breakpoints": [[0, [0, 0]], ["3/2", [1, "1/2"]]]},
        {"cube": "1**", "breakpoints": [["3/2", ["1/2", 0]], [3, [1, 1]]]},
    ]
}


@pytest.fixture
def files(tmp_path):
    def write(name, doc):
        p = tmp_path / name
        p.write_text(json.dumps(doc) if not isinstance(doc, str) else doc)
        return str(p)

    return {
        "cube3": write("cube3.json", standard_cube(3).to_json_dict()),
        "boundary3": write("boundary3.json", boundary_cube(3).to_json_dict()),
        "swiss": write("swiss.json", grid_complex((5, 5), SWISS_CROSS).to_json_dict()),
        "exotic": write("exotic.json", EXOTIC),
        "broken": write("broken.json", "{"),
        "write": write,
        "dir": tmp_path,
    }


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def payload(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


def test_validate(files, capsys):
    assert payload(capsys, "validate", files["cube3"])["valid"] is True
    doc = standard_cube(2).to_json_dict()
    for c in doc["cubes"]:
        if c["id"] == "**":
            c["d0"] = c["d0"][::-1]
    code, out, _ = run(capsys, "validate", files["write"]("bad.json", doc))
    assert code == 2
    result = json.loads(out)
    assert not result["valid"] and {v["kind"] for v in result["violations"]} == {"identity"}


def test_chains_and_category(files, capsys):
    assert payload(capsys, "chains", files["cube3"], "--length", "3")["count"] == 13
    listed = payload(capsys, "chains", files["cube3"], "-n", "3", "--list")["chains"]
    assert len(listed) == 13 and ["***"] in listed
    dot, js = files["dir"] / "c.dot", files["dir"] / "c.json"
    res = payload(capsys, "category", files["cube3"], "-n", "3", "--dot", str(dot), "--json", str(js))
    assert res["objects"] == 13 and res["morphisms"] == 24
    assert dot.read_text().startswith("digraph")
    assert len(json.loads(js.read_text())["morphisms"]) == 24


def test_homology_and_exec_space(files, capsys, monkeypatch):
    res = payload(capsys, "homology", files["boundary3"], "--length", "3")
    assert res["betti"] == [1, 1] and res["euler"] == 0
    for threads in ("0", "2"):
        monkeypatch.setenv("HDA_PATHLAB_THREADS", threads)
        rows = payload(capsys, "exec-space", files["swiss"], "--max-length", "10")["rows"]
        assert [r["length"] for r in rows] == [10]
        assert rows[0]["betti"][0] == 2 and not any(rows[0]["betti"][1:])
    single = payload(capsys, "homology", files["swiss"], "-n", "10")
    assert single == rows[0]


def test_triplets(files, capsys):
    out = files["dir"] / "trip"
    payload(capsys, "homology", files["cube3"], "-n", "3", "--triplets", str(out))
    assert (out / "boundary_1.txt").read_text().splitlines()[0] == "13 24 48"


def test_determinism_and_report(files, capsys):
    a = payload(capsys, "--report", "homology", files["boundary3"], "-n", "3")
    b = payload(capsys, "--report", "homology", files["boundary3"], "-n", "3")
    assert a["result"] == b["result"] and a["input_digest"] == b["input_digest"]
    assert a["input_digest"].startswith("sha256:") and set(a["timings_ms"]) >= {"chains", "nerve", "homology"}


def test_path_commands(files, capsys):
    m, p = files["boundary3"], files["exotic"]
    assert payload(capsys, "path", m, "length", "--path", p) == {"length": 3}
    assert payload(capsys, "path", m, "vertices", "--path", p) == {"vertices": [0, 3]}
    track = payload(capsys, "path", m, "track", "--path", p)["track"]
    assert track["entries"] == [{"cube": "**0", "A": [1, 2], "B": [1]}, {"cube": "1**", "A": [2], "B": [1, 2]}]
    assert len(payload(capsys, "path", m, "actions", "--path", p)["actions"]) == 3
    assert set(payload(capsys, "path", m, "progress", "--path", p)["progress"]["actions"]) == {"1", "2", "3"}
    nat = payload(capsys, "path", m, "naturalize", "--path", p)["path"]
    K = PrecubicalSet.load(m)
    original = PathPresentation.from_json(K, EXOTIC)
    assert paths_equal(PathPresentation.from_json(K, nat), original)


def test_tamify_commands(files, capsys):
    m, p = files["boundary3"], files["exotic"]
    out = payload(capsys, "tamify", m, "--path", p)["path"]
    assert out["vertices"] == [0, 1, 2, 3]
    reg = payload(capsys, "tamify", m, "--path", p, "--iterate")
    assert reg["regular"] and reg["type"] == [1, 1, 1] and reg["steps"] <= 3
    # emitted paths reload to equal values
    K = PrecubicalSet.load(m)
    again = PathPresentation.from_json(K, out)
    assert PathPresentation.from_json(K, again.to_json()) == again


def test_error_exit_codes(files, capsys):
    code, _, err = run(capsys, "path", files["boundary3"], "minimal", "--path", files["exotic"])
    assert code == 2 and json.loads(err)["error"] == "NotTame"
    code, _, err = run(capsys, "chains", files["broken"], "-n", "2")
    assert code == 1 and json.loads(err)["error"] == "json"
    code, _, _ = run(capsys, "chains", files["cube3"])
    assert code == 1
    bad_path = files["write"]("bad_path.json", {"segments": [{"cube": "**0", "breakpoints": [[0, [1, 0]], [1, [0, 0]]]}]})
    code, _, _ = run(capsys, "path", files["boundary3"], "length", "--path", bad_path)
    assert code == 1
    unknown = files["write"]("unknown.json", {"segments": [{"cube": "nope", "breakpoints": [[0, [0]], [1, [1]]]}]})
    code, _, _ = run(capsys, "path", files["boundary3"], "length", "--path", unknown)
    assert code == 1


def test_pretty_and_generate(files, capsys):
    code, out, _ = run(capsys, "--pretty", "homology", files["boundary3"], "-n", "3")
    assert code == 0 and "betti [1, 1]" in out
    doc = payload(capsys, "generate", "grid", "5,5", "--forbidden", json.dumps(SWISS_CROSS))
    assert PrecubicalSet.from_json_dict(doc).counts() == (36, 56, 20)
    assert PrecubicalSet.from_json_dict(payload(capsys, "generate", "double")).counts() == (8, 12, 6, 2)
