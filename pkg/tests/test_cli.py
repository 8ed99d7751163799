import json
import subprocess
import sys

import numpy as np
import pytest

from netnorm import Network, load_network
from netnorm.cli import main
from netnorm.io import dump_matrix


@pytest.fixture
def files(tmp_path):
    (tmp_path / "tri.csv").write_text("src,dst,weight\na,b,1\nb,c,1\na,c,1\n")
    (tmp_path / "path.csv").write_text("src,dst,weight\na,b,1\nb,c,1\n")
    (tmp_path / "other.csv").write_text("src,dst,weight\na,b,1\nb,d,1\n")
    (tmp_path / "bad.csv").write_text("src,dst,weight\na,b,1\na,b,1\n")
    return tmp_path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


class TestDescribe:
    def test_triangle_table(self, files, capsys):
        code, out, _ = run(capsys, "describe", "--input", files / "tri.csv")
        assert code == 0
        mean_row = next(line for line in out.splitlines() if "Mean" in line)
        assert mean_row.split()[2] == "2.00"

    def test_json(self, files, capsys):
        code, out, _ = run(capsys, "describe", "--input", files / "tri.csv", "--format", "json")
        doc = json.loads(out)
        assert code == 0 and doc["tri"]["mean_degree"] == 2.0 and doc["tri"]["diameter"] == 1

    def test_malformed_input(self, files, capsys):
        code, _, err = run(capsys, "describe", "--input", files / "bad.csv")
        assert code == 2
        assert "DuplicateEdge" in err and "line 3" in err

    def test_network_round_trip(self, files, capsys, rng):
        w = np.triu(rng.random((5, 5)) * (rng.random((5, 5)) < 0.6), 1)
        net = Network(w + w.T, list("pqrst"))
        with open(files / "w.csv", "w") as fh:
            dump_matrix(net, fh)
        code, out, _ = run(capsys, "describe", "--input", files / "w.csv", "--format", "json", "--with-network")
        assert code == 0
        (files / "w.json").write_text(out)
        assert load_network(files / "w.json") == net


class TestTest:
    def test_identical_all_one(self, files, capsys):
        code, out, _ = run(capsys, "test", "--a", files / "tri.csv", "--b", files / "tri.csv",
                           "--R", 19, "--format", "json")
        assert code == 0
        assert all(r["p_value"] == 1.0 for r in json.loads(out))
        assert len(json.loads(out)) == 7

    def test_byte_identical(self, files, capsys):
        argv = ["test", "--a", files / "tri.csv", "--b", files / "path.csv", "--stats", "t22,s_inf1",
                "--R", 99, "--alpha", 0.05, "--seed", 42]
        first = run(capsys, *argv)[1]
        second = run(capsys, *argv)[1]
        assert first == second and first

    def test_label_mismatch(self, files, capsys):
        code, _, err = run(capsys, "test", "--a", files / "tri.csv", "--b", files / "other.csv", "--R", 19)
        assert code == 2
        assert "LabelMismatch" in err and "'c'" in err

    def test_invalid_params(self, files, capsys):
        code, _, err = run(capsys, "test", "--a", files / "tri.csv", "--b", files / "path.csv", "--R", 0)
        assert code == 2 and "InvalidParams" in err

    def test_fail_on_reject(self, tmp_path, capsys, rng):
        n = 30
        a = np.triu(rng.random((n, n)) < 0.05, 1).astype(float)
        b = np.triu(rng.random((n, n)) < 0.6, 1).astype(float)
        for name, w in (("a.csv", a + a.T), ("b.csv", b + b.T)):
            with open(tmp_path / name, "w") as fh:
                dump_matrix(Network(w), fh)
        argv = ["test", "--a", tmp_path / "a.csv", "--b", tmp_path / "b.csv", "--stats", "avg_degree_absdiff",
                "--R", 99]
        assert run(capsys, *argv)[0] == 0
        assert run(capsys, *argv, "--fail-on-reject")[0] == 1

    def test_config_file_and_override(self, files, capsys):
        cfg = files / "cfg.json"
        cfg.write_text(json.dumps({"stats": "t22", "R": 19, "format": "csv"}))
        code, out, _ = run(capsys, "test", "--a", files / "tri.csv", "--b", files / "path.csv", "--config", cfg)
        assert code == 0 and out.splitlines()[1].startswith("t22,")
        code, out, _ = run(capsys, "test", "--a", files / "tri.csv", "--b", files / "path.csv", "--config", cfg,
                           "--format", "json")
        assert json.loads(out)[0]["R"] == 19

    def test_unknown_config_key(self, files, capsys):
        cfg = files / "cfg.json"
        cfg.write_text(json.dumps({"replicates": 19}))
        code, _, err = run(capsys, "test", "--a", files / "tri.csv", "--b", files / "path.csv", "--config", cfg)
        assert code == 2 and "replicates" in err

    def test_threads_from_environment(self, files, capsys, monkeypatch):
        argv = ["test", "--a", files / "tri.csv", "--b", files / "path.csv", "--R", 49]
        serial = run(capsys, *argv)[1]
        monkeypatch.setenv("NETNORM_THREADS", "4")
        assert run(capsys, *argv)[1] == serial


class TestSimulate:
    def test_writes_csv_and_json(self, tmp_path, capsys):
        out = tmp_path / "study"
        argv = ["simulate", "--preset", "sparse-er", "--n", 16, "--trials", 1, "--R", 19, "--seed", 3,
                "--out", out]
        code, text, _ = run(capsys, *argv)
        assert code == 0 and "t22" in text
        csv_text = (tmp_path / "study.csv").read_text()
        assert len(csv_text.strip().splitlines()) == 3
        summary = json.loads((tmp_path / "study.json").read_text())
        assert summary["trials"] == 1 and set(summary["statistics"]) == {"t22", "s_inf1"}
        run(capsys, *argv)
        assert (tmp_path / "study.csv").read_text() == csv_text

    def test_model_files(self, tmp_path, capsys):
        (tmp_path / "f1.json").write_text(json.dumps({"kind": "er", "n": 12, "p": 0.3}))
        (tmp_path / "f2.csv").write_text("\n".join(",".join(["0.1"] * 12) for _ in range(12)) + "\n")
        code, out, _ = run(capsys, "simulate", "--config", _cfg(tmp_path, {
            "f1": str(tmp_path / "f1.json"), "f2": str(tmp_path / "f2.csv"), "trials": 2, "R": 19}),
            "--format", "json")
        assert code == 0 and json.loads(out)["trials"] == 2

    def test_missing_models(self, capsys):
        assert run(capsys, "simulate", "--trials", 1)[0] == 2


def _cfg(tmp_path, doc):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(doc))
    return path


class TestDiagnose:
    def test_sparse_preset(self, capsys):
        code, out, _ = run(capsys, "diagnose", "--preset", "sparse-er", "--n", 50, "--format", "json")
        doc = json.loads(out)
        assert code == 0
        assert doc["t22_pop"] == pytest.approx(2.94, rel=1e-9)
        assert doc["tau"] <= doc["sigma"]

    def test_identical_models(self, tmp_path, capsys):
        spec = {"kind": "er", "n": 8, "p": 0.2}
        code, out, _ = run(capsys, "diagnose", "--config", _cfg(tmp_path, {"f1": spec, "f2": spec}),
                           "--format", "json")
        doc = json.loads(out)
        assert code == 0
        assert doc["t22_pop_over_tau"] == 0 and doc["t_inf1_pop_over_sigma"] == 0
        assert doc["tau"] <= doc["sigma"]

    def test_text(self, capsys):
        code, out, _ = run(capsys, "diagnose", "--preset", "degree-het", "--n", 12)
        assert code == 0 and "t22_pop_over_tau" in out


def test_module_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "netnorm", "describe", "--input", str(files / "path.csv")],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "Mean" in proc.stdout


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["test", "--R", "many"])
    assert exc.value.code == 2
