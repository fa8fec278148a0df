import json
import math
import subprocess
import sys
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tubehost.cli import direction_grid, main, run_scene
from tubehost.scene import Scene, SceneError, parse_scene

SAMPLE = Path(__file__).resolve().parent.parent / "scenes" / "quadrant.json"

SLIVER = {
    "dim": 3,
    "set": {"vertices": [[1.88439, 1.74415, 1.76701], [-0.64026, 0.9525, -0.72995],
                         [-0.37887, -1.57475, -1.69489]],
            "rays": [[-0.54871, 0.82966, -0.10281]]},
    "queries": [{"type": "verify", "check": "reconstruction"}],
}


def write(tmp_path, data, name="scene.json"):
    p = tmp_path / name
    p.write_text(data if isinstance(data, str) else json.dumps(data))
    return str(p)


def run_cli(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_sample_scene_report(capsys):
    code, out, err = run_cli(["run", str(SAMPLE)], capsys)
    assert code == 0, err
    rep = json.loads(out)
    r = rep["results"]
    assert rep["verifications_failed"] == 0 and rep["seed"] == 0
    assert r[0]["inf"] == 1.0 and r[0]["support_function"] == -1.0
    assert r[1]["inf"] == "-inf" and r[1]["support_function"] == "inf"
    assert r[2]["alpha"] == pytest.approx(math.exp(-1.0), rel=1e-15)
    assert r[3]["provenance"] == "bracketed" and r[3]["lower"] <= r[3]["upper"]
    assert r[4]["momenta"] == [[0.0, 1.0], [1.0, 2.0]] and r[4]["recession_unwitnessed"]
    assert r[5]["contains_C"] and r[5]["clip_radius"] == 20.0
    assert r[6]["alpha"] == pytest.approx(math.exp(-0.5), rel=1e-15)
    assert r[6]["spectrum"] == [0.5, "inf"]
    assert r[7]["passed"] and r[7]["instances"] == 3 and r[7]["provenance"] == "exact"
    assert r[8]["provenance"] == "sampled"
    assert all("wall_time_s" not in e for e in r)


def test_reports_are_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["run", str(SAMPLE), "--seed", "7", "--out", str(a)]) == 0
    assert main(["run", str(SAMPLE), "--seed", "7", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_seed_changes_sampled_results(capsys):
    _, out0, _ = run_cli(["run", str(SAMPLE), "--seed", "0"], capsys)
    _, out1, _ = run_cli(["run", str(SAMPLE), "--seed", "1"], capsys)
    assert out0 != out1


def test_timing_flag(capsys):
    code, out, _ = run_cli(["run", str(SAMPLE), "--timing"], capsys)
    assert code == 0
    assert all(e["wall_time_s"] >= 0 for e in json.loads(out)["results"])


def test_csv_report(capsys):
    code, out, _ = run_cli(["run", str(SAMPLE), "--format", "csv"], capsys)
    lines = out.splitlines()
    assert code == 0 and lines[0] == "index,type,provenance,field,value"
    assert "0,support,exact,inf,1.0" in lines


def test_failed_verification_exits_1(tmp_path, capsys):
    code, out, _ = run_cli(["run", write(tmp_path, SLIVER)], capsys)
    rep = json.loads(out)
    assert code == 1 and rep["verifications_failed"] == 1
    assert rep["results"][0]["violated"] == "reconstruction_rate"


def test_empty_queries(tmp_path, capsys):
    code, out, _ = run_cli(["run", write(tmp_path, {"dim": 2, "queries": []})], capsys)
    assert code == 0 and json.loads(out)["results"] == []


def test_random_instances_without_a_set(tmp_path, capsys):
    scene = {"dim": 1, "queries": [{"type": "verify", "check": "boundedness", "random_dim": 2, "count": 5},
                                   {"type": "spectrum1d", "m": -1.0, "im": 2.0}]}
    code, out, _ = run_cli(["run", write(tmp_path, scene)], capsys)
    r = json.loads(out)["results"]
    assert code == 0 and r[0]["instances"] == 5
    assert r[1]["alpha"] == pytest.approx(math.exp(2.0), rel=1e-15)


@pytest.mark.parametrize("scene,needle", [
    ('{"dim": 2,\n "queries": [\n  {"type": "support" "x": [1, 1]}]}', "line 3"),
    ({"dim": 0}, "$.dim"),
    ({"dim": 2, "queries": [{"type": "nope"}]}, "$.queries[0].type"),
    ({"dim": 2, "set": {"vertices": [[0, 0]]}, "queries": [{"type": "support", "x": [1]}]},
     "$.queries[0].x"),
    ({"dim": 1, "set": {"vertices": [[0]], "rays": [[1]]},
      "queries": [{"type": "alpha", "re": [0], "im": [-1]}]}, "$.queries[0]"),
    ({"dim": 1, "set": {"vertices": [[0]]}, "colour": "red"}, "$.colour"),
    ({"dim": 1, "queries": [{"type": "support", "x": [1]}]}, "needs the scene to define 'set'"),
    ({"dim": 1, "queries": [{"type": "verify", "check": "x"}]}, "$.queries[0].check"),
    ({"dim": 1, "set": {"vertices": [[0]], "halfspaces": [{"normal": [1], "offset": 1}]}},
     "$.set.halfspaces"),
])
def test_input_errors_exit_2(tmp_path, capsys, scene, needle):
    code, out, err = run_cli(["run", write(tmp_path, scene)], capsys)
    assert code == 2 and out == ""
    assert err.startswith("tubehost: input error:") and needle in err


def test_missing_file(capsys, tmp_path):
    code, _, err = run_cli(["run", str(tmp_path / "none.json")], capsys)
    assert code == 2 and "cannot read" in err


def test_profile_half_line(tmp_path, capsys):
    scene = {"dim": 1, "set": {"vertices": [[0.5]], "rays": [[1]]}}
    code, out, _ = run_cli(["profile", write(tmp_path, scene)], capsys)
    assert code == 0
    assert out.splitlines() == ["d1,s_C", "-1.0,inf", "1.0,-0.5"]


def test_profile_of_origin_is_zero(tmp_path, capsys):
    code, out, _ = run_cli(["profile", write(tmp_path, {"dim": 2, "set": {"vertices": [[0, 0]]}}),
                            "--points", "8"], capsys)
    rows = out.splitlines()[1:]
    assert code == 0 and len(rows) == 8
    assert {r.split(",")[-1] for r in rows} == {"0.0"}


def test_profile_bounded_is_finite(tmp_path, capsys):
    scene = {"dim": 3, "set": {"vertices": [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]]}}
    code, out, _ = run_cli(["profile", write(tmp_path, scene), "--points", "50"], capsys)
    rows = [r.split(",") for r in out.splitlines()[1:]]
    assert code == 0 and len(rows) == 50
    for r in rows:
        d = [float(v) for v in r[:3]]
        # s_C(d) = -min over the vertices of <v, d>
        assert float(r[3]) == pytest.approx(-min(0.0, *d), abs=1e-15)


def test_profile_dimension_limit(tmp_path, capsys):
    code, _, err = run_cli(["profile", write(tmp_path, {"dim": 4, "set": {"vertices": [[0, 0, 0, 0]]}})],
                           capsys)
    assert code == 2 and "dimension" in err


def test_direction_grids_are_unit():
    for dim in (1, 2, 3):
        G = direction_grid(dim, 40)
        assert all(abs(sum(v * v for v in g) - 1.0) < 1e-12 for g in G)


def test_console_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "tubehost.cli", "run", str(SAMPLE)],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["verifications_failed"] == 0


def test_run_scene_in_process():
    report, code = run_scene(Scene.from_dict({"dim": 1, "set": {"vertices": [[2.0]]},
                                              "queries": [{"type": "support", "x": [3.0]}]}))
    assert code == 0 and report["results"][0]["inf"] == 6.0


# ---- scene round trips -------------------------------------------------------------

finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False)


@st.composite
def scenes(draw):
    dim = draw(st.integers(1, 4))
    vec = st.lists(finite, min_size=dim, max_size=dim)
    vertices = draw(st.lists(vec, min_size=1, max_size=4))
    rays = draw(st.one_of(st.none(), st.lists(vec, max_size=3)))
    queries = draw(st.lists(st.one_of(
        st.builds(lambda x: {"type": "support", "x": x}, vec),
        st.builds(lambda r, i: {"type": "alpha", "re": r, "im": i}, vec, vec),
        st.builds(lambda e: {"type": "reconstruct", "epsilon": e},
                  st.floats(min_value=1e-6, max_value=0.999)),
        st.builds(lambda c, n: {"type": "verify", "check": c, "samples": n},
                  st.sampled_from(["bcdual", "minimizer", "momentum"]), st.integers(1, 50)),
    ), max_size=5))
    return {"dim": dim, "set": {"vertices": vertices, **({} if rays is None else {"rays": rays})},
            "queries": queries}


@given(scenes())
@settings(max_examples=80)
def test_scene_round_trip(data):
    s = Scene.from_dict(data)
    assert Scene.from_dict(s.to_dict()) == s
    assert parse_scene(s.to_json()) == s


def test_scene_error_is_input_error():
    with pytest.raises(SceneError) as info:
        parse_scene('{"dim": 1, "queries": [{"type": "reconstruct", "epsilon": 1.5}]}')
    assert info.value.path == "$.queries[0].epsilon"
