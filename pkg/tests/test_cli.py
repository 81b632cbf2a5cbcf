import json
from pathlib import Path

import numpy as np
import pytest

from netforms.cli import main

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture
def path3_file(tmp_path):
    p = tmp_path / "net.json"
    p.write_text(json.dumps({
        "vertices": [0, 1, 2],
        "edges": [{"u": 0, "v": 1, "c": 1.0}, {"u": 1, "v": 2, "c": 1.0}],
    }))
    return p


@pytest.fixture
def disconnected_file(tmp_path):
    p = tmp_path / "disc.json"
    p.write_text(json.dumps({
        "vertices": [0, 1, 2, 3],
        "edges": [{"u": 0, "v": 1, "c": 1.0}, {"u": 2, "v": 3, "c": 1.0}],
    }))
    return p


def test_net_validate(path3_file, capsys):
    assert main(["net", "validate", str(path3_file)]) == 0
    assert "markov=True" in capsys.readouterr().out


def test_net_assemble_matches_matrix(path3_file, tmp_path):
    out = tmp_path / "A.csv"
    assert main(["net", "assemble", str(path3_file), "--output", str(out)]) == 0
    rows = [[float(x) for x in line.split(",")] for line in out.read_text().strip().splitlines()]
    assert np.array_equal(rows, [[1, -1, 0], [-1, 2, -1], [0, -1, 1]])


def test_trace_command(path3_file, capsys):
    assert main(["trace", "--net", str(path3_file), "--subset", "0,2"]) == 0
    rows = [[float(x) for x in line.split(",")] for line in capsys.readouterr().out.strip().splitlines()]
    assert np.allclose(rows, [[0.5, -0.5], [-0.5, 0.5]], atol=1e-12)


def test_resistance_pair_and_all(path3_file, capsys):
    assert main(["resistance", "--net", str(path3_file), "--pairs", "0,2"]) == 0
    assert abs(float(capsys.readouterr().out) - 2.0) <= 1e-12
    assert main(["resistance", "--net", str(path3_file), "--pairs", "all"]) == 0
    rows = [[float(x) for x in line.split(",")] for line in capsys.readouterr().out.strip().splitlines()]
    assert np.allclose(rows, [[0, 1, 2], [1, 0, 1], [2, 1, 0]], atol=1e-12)


def test_resistance_disconnected_exit_2(disconnected_file, capsys):
    assert main(["resistance", "--net", str(disconnected_file), "--pairs", "0,2"]) == 2
    err = json.loads(capsys.readouterr().err)
    assert err["error"]["type"] == "numerical"
    assert "infinite" in err["error"]["message"]


def test_malformed_json_exit_1_names_offset(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"vertices": [0, 1], "edges": [}')
    assert main(["net", "validate", str(bad)]) == 1
    err = json.loads(capsys.readouterr().err)
    assert err["error"]["type"] == "validation"
    assert "byte offset 31" in err["error"]["message"]


def test_unknown_flag_exit_1(path3_file, capsys):
    assert main(["trace", "--net", str(path3_file), "--subset", "0,2", "--bogus"]) == 1
    assert json.loads(capsys.readouterr().err)["error"]["type"] == "validation"


def test_decompose_json(path3_file, capsys):
    assert main(["decompose", "--net", str(path3_file)]) == 0
    d = json.loads(capsys.readouterr().out)
    assert d["J"] == [{"x": 0, "y": 1, "value": 0.5}, {"x": 1, "y": 2, "value": 0.5}]
    assert d["kappa"] == [0.0, 0.0, 0.0]


def test_seq_build_check_profile(tmp_path, capsys):
    seq = tmp_path / "seq.json"
    assert main(["seq", "build", "dyadic", "--levels", "3", "--output", str(seq)]) == 0
    capsys.readouterr()
    assert main(["seq", "check", str(seq)]) == 0
    assert "compatible" in capsys.readouterr().out
    f = tmp_path / "f.csv"
    f.write_text("\n".join(str(k / 8) for k in range(9)) + "\n")
    out = tmp_path / "profile.csv"
    assert main(["seq", "profile", str(seq), "--f", str(f), "--output", str(out)]) == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "level,energy"
    assert all(abs(float(line.split(",")[1]) - 1.0) <= 1e-12 for line in lines[1:])


def test_seq_check_incompatible_exit_2(tmp_path, capsys):
    seq = {
        "levels": [
            {"vertices": [0, 1], "edges": [{"u": 0, "v": 1, "c": 3.0}]},
            {"vertices": [0, 1, 2], "edges": [{"u": 0, "v": 1, "c": 1.0}, {"u": 1, "v": 2, "c": 1.0}]},
        ],
        "inclusions": [[0, 2]],
    }
    p = tmp_path / "seq.json"
    p.write_text(json.dumps(seq))
    assert main(["seq", "check", str(p)]) == 2
    assert json.loads(capsys.readouterr().err)["error"]["type"] == "numerical"


def test_gasket_build_with_calibration(tmp_path, capsys):
    seq = tmp_path / "g.json"
    assert main(["seq", "build", "gasket", "--levels", "1", "--calibrate", "--output", str(seq)]) == 0
    capsys.readouterr()
    assert main(["seq", "check", str(seq)]) == 0


def test_gelfand_commands(tmp_path, capsys):
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps({"points": [0, 1, 2], "generators": [[1.0, 1.0, 2.0]]}))
    mu = tmp_path / "mu.json"
    mu.write_text(json.dumps([0.25, 0.75, 1.0]))

    assert main(["gelfand", "embed", "--spec", str(spec)]) == 0
    emb = json.loads(capsys.readouterr().out)
    assert emb["classes"] == [[0, 1], [2]]
    assert emb["separated"] is False

    assert main(["gelfand", "pushforward", "--spec", str(spec), "--mu", str(mu)]) == 0
    push = json.loads(capsys.readouterr().out)
    assert push["atoms"] == [1.0, 1.0]
    assert push["total"] == 2.0

    f = tmp_path / "f.csv"
    f.write_text("3\n3\n-1\n")
    assert main(["gelfand", "isometry", "--spec", str(spec), "--mu", str(mu), "--f", str(f)]) == 0
    iso = json.loads(capsys.readouterr().out)
    assert iso["difference"] <= 1e-12

    assert main(["gelfand", "closure", "--spec", str(spec), "--epsilon", "0.1"]) == 0
    clo = json.loads(capsys.readouterr().out)
    assert clo["flagged"] == [False, False]


def test_gamma_csv(path3_file, tmp_path, capsys):
    f = tmp_path / "f.csv"
    f.write_text("1\n0.5\n0\n")
    assert main(["gamma", "--form", str(path3_file), "--f", str(f)]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "vertex,mass"
    masses = [float(line.split(",")[1]) for line in lines[1:]]
    assert np.allclose(masses, [0.125, 0.25, 0.125], atol=1e-14)


def test_demo_counterexample_outputs_and_idempotence(tmp_path, capsys):
    out1 = tmp_path / "run1"
    out2 = tmp_path / "run2"
    for out in (out1, out2):
        assert main(["demo", "counterexample", "--levels", "8", "--set", "0,0.5,1",
                     "--min-level", "4", "--outdir", str(out)]) == 0
    csv1 = (out1 / "counterexample.csv").read_bytes()
    csv2 = (out2 / "counterexample.csv").read_bytes()
    svg1 = (out1 / "counterexample.svg").read_bytes()
    svg2 = (out2 / "counterexample.svg").read_bytes()
    assert csv1 == csv2 and svg1 == svg2
    lines = csv1.decode().strip().splitlines()
    assert lines[0] == "level,energy,gamma_mass"
    assert all(line.split(",")[1] == "1" for line in lines[1:])


def test_demo_svg_matches_golden(tmp_path):
    out = tmp_path / "run"
    assert main(["demo", "counterexample", "--levels", "8", "--set", "0,0.5,1",
                 "--min-level", "4", "--outdir", str(out)]) == 0
    golden = (GOLDEN / "counterexample.svg").read_bytes()
    assert (out / "counterexample.svg").read_bytes() == golden


def test_sim_hit_and_worker_determinism(path3_file, tmp_path, capsys):
    args = ["sim", "hit", "--net", str(path3_file), "--seed", "7", "--n", "400",
            "--targets", "0,2", "--start", "1"]
    assert main(args) == 0
    out1 = capsys.readouterr().out
    assert main(args + ["--workers", "3"]) == 0
    out2 = capsys.readouterr().out
    d1, d2 = json.loads(out1), json.loads(out2)
    assert d1["estimate"] == d2["estimate"] and d1["stderr"] == d2["stderr"]
    assert abs(d1["estimate"] - 0.5) <= 4.0 * d1["stderr"]


def test_sim_commute_and_occupy(path3_file, capsys):
    assert main(["sim", "commute", "--net", str(path3_file), "--seed", "3", "--n", "2000",
                 "--pair", "0,2"]) == 0
    d = json.loads(capsys.readouterr().out)
    assert abs(d["estimate"] - 6.0) <= 0.15 * 6.0

    assert main(["sim", "occupy", "--net", str(path3_file), "--seed", "4", "--n", "60",
                 "--horizon", "200"]) == 0
    d = json.loads(capsys.readouterr().out)
    assert d["l1_distance"] < 0.1


def test_input_files_never_mutated(path3_file):
    before = path3_file.read_bytes()
    main(["net", "assemble", str(path3_file), "--output", str(path3_file.parent / "o.csv")])
    main(["resistance", "--net", str(path3_file), "--pairs", "all",
          "--output", str(path3_file.parent / "r.csv")])
    assert path3_file.read_bytes() == before


def test_reproduce_all_quick(tmp_path, capsys):
    out = tmp_path / "rep"
    assert main(["reproduce-all", "--quick", "--outdir", str(out)]) == 0
    report = json.loads((out / "report.json").read_text())
    assert len(report) == 9
    assert all(r["passed"] for r in report)
    table = (out / "report.txt").read_text()
    assert table.count("PASS") == 9


def test_reproduce_all_negative_control(tmp_path, capsys):
    out = tmp_path / "rep-bad"
    code = main(["reproduce-all", "--quick", "--gasket-factor", "1.6", "--outdir", str(out)])
    assert code == 2
    report = json.loads((out / "report.json").read_text())
    failed = [r["name"] for r in report if not r["passed"]]
    assert failed == ["compatibility and monotonicity"]
