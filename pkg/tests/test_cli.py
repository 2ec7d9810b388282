import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from hsicselect import load_csv

PKG_ROOT = Path(__file__).resolve().parents[1]


def run_cli(*args, env_extra=None, cwd=None):
    import os

    env = os.environ.copy()
    if env_extra:
        env.update(env_extra)
    return subprocess.run(
        [sys.executable, "-m", "hsicselect", *args],
        capture_output=True,
        text=True,
        env=env,
        cwd=cwd or PKG_ROOT,
    )


def parse_kv(stdout):
    out = {}
    for line in stdout.splitlines():
        if "=" in line:
            key, _, value = line.partition("=")
            out[key] = value
    return out


@pytest.fixture(scope="module")
def toy_csv(tmp_path_factory):
    """Feature f0 equals the binary label; f1, f2 are fixed noise."""
    rng = np.random.default_rng(0)
    m = 100
    y = np.where(rng.random(m) < 0.5, 1, -1)
    y[:2] = [1, -1]
    path = tmp_path_factory.mktemp("cli") / "toy.csv"
    lines = ["f0,f1,f2,y"]
    noise = rng.standard_normal((m, 2))
    for i in range(m):
        lines.append(f"{y[i]},{float(noise[i, 0])!r},{float(noise[i, 1])!r},{y[i]}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


class TestSynthCommand:
    def test_writes_expected_shape(self, tmp_path):
        out = tmp_path / "xor.csv"
        res = run_cli("synth", "--dataset", "xor", "--samples", "400", "--seed", "5", "--out", str(out))
        assert res.returncode == 0
        lines = out.read_text().splitlines()
        assert len(lines) == 401
        assert lines[0].count(",") == 22  # 22 features + label

    def test_byte_identical_for_seed(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        run_cli("synth", "--dataset", "regression", "--samples", "40", "--seed", "3", "--out", str(a))
        run_cli("synth", "--dataset", "regression", "--samples", "40", "--seed", "3", "--out", str(b))
        assert a.read_bytes() == b.read_bytes()

    def test_regression_labels_reload_as_real(self, tmp_path):
        out = tmp_path / "reg.csv"
        run_cli("synth", "--dataset", "regression", "--samples", "40", "--seed", "1", "--out", str(out))
        from hsicselect import LabelType

        assert load_csv(out, "y").label_type is LabelType.REAL

    def test_bad_sample_count_exits_2(self, tmp_path):
        res = run_cli("synth", "--dataset", "xor", "--samples", "9", "--out", str(tmp_path / "x.csv"))
        assert res.returncode == 2


class TestHsicCommand:
    def test_deterministic_permutation_p(self, toy_csv):
        args = ("hsic", "--data", str(toy_csv), "--label-col", "y",
                "--test", "permutation", "--perms", "199", "--seed", "7")
        a, b = run_cli(*args), run_cli(*args)
        assert a.returncode == 0
        assert a.stdout == b.stdout

    def test_perfect_dependence_minimal_p(self, toy_csv, tmp_path):
        # single feature equal to the label: observed beats all permutations
        ds = load_csv(toy_csv, "y")
        single = tmp_path / "single.csv"
        lines = ["f0,y"] + [f"{int(l)},{int(l)}" for l in ds.labels]
        single.write_text("\n".join(lines) + "\n", encoding="utf-8")
        res = run_cli("hsic", "--data", str(single), "--label-col", "y",
                      "--test", "permutation", "--perms", "199", "--seed", "11")
        assert res.returncode == 0
        kv = parse_kv(res.stdout)
        assert float(kv["p_value"]) == pytest.approx(1.0 / 200.0)

    def test_constant_labels_score_zero(self, tmp_path):
        path = tmp_path / "const.csv"
        rows = "\n".join(
            f"{float(v)!r},1" for v in np.random.default_rng(0).standard_normal(20)
        )
        path.write_text("x,y\n" + rows + "\n", encoding="utf-8")
        res = run_cli("hsic", "--data", str(path), "--label-col", "y", "--perms", "19")
        assert res.returncode == 0
        assert abs(float(parse_kv(res.stdout)["hsic"])) < 1e-12

    def test_asymptotic_mode(self, toy_csv):
        res = run_cli("hsic", "--data", str(toy_csv), "--label-col", "y", "--test", "asymptotic")
        assert res.returncode == 0
        kv = parse_kv(res.stdout)
        assert 0.0 <= float(kv["p_value"]) <= 1.0
        assert float(kv["variance"]) > 0.0

    def test_missing_column_exits_2(self, toy_csv):
        res = run_cli("hsic", "--data", str(toy_csv), "--label-col", "nope")
        assert res.returncode == 2
        assert "nope" in res.stderr

    def test_too_few_rows_exits_3(self, tmp_path):
        path = tmp_path / "tiny.csv"
        path.write_text("x,y\n1,1\n2,-1\n0,1\n", encoding="utf-8")
        res = run_cli("hsic", "--data", str(path), "--label-col", "y", "--perms", "19")
        assert res.returncode == 3

    def test_env_seed_override(self, toy_csv):
        explicit = run_cli("hsic", "--data", str(toy_csv), "--label-col", "y",
                           "--perms", "99", "--seed", "21")
        via_env = run_cli("hsic", "--data", str(toy_csv), "--label-col", "y",
                          "--perms", "99", env_extra={"HSIC_SEED": "21"})
        assert parse_kv(explicit.stdout)["p_value"] == parse_kv(via_env.stdout)["p_value"]
        assert "seed=21" in via_env.stdout


class TestSelectCommand:
    def test_ranks_relevant_feature_first(self, toy_csv, tmp_path):
        out = tmp_path / "sel.json"
        res = run_cli("select", "--data", str(toy_csv), "--label-col", "y",
                      "--method", "bahsic", "--out", str(out))
        assert res.returncode == 0
        doc = json.loads(out.read_text())
        assert doc["ranking"][0] == 0
        assert doc["ranking_names"][0] == "f0"
        assert res.stderr.splitlines()[0] == "1\tf0"

    def test_num_features_lists_all_when_d(self, toy_csv, tmp_path):
        out = tmp_path / "sel.json"
        run_cli("select", "--data", str(toy_csv), "--label-col", "y",
                "--num-features", "3", "--out", str(out))
        doc = json.loads(out.read_text())
        assert sorted(doc["selected"]) == [0, 1, 2]

    def test_byte_identical_json(self, toy_csv, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        args = ("select", "--data", str(toy_csv), "--label-col", "y", "--seed", "4")
        run_cli(*args, "--out", str(a))
        run_cli(*args, "--out", str(b))
        assert a.read_bytes() == b.read_bytes()

    def test_document_matches_schema(self, toy_csv, tmp_path):
        jsonschema = pytest.importorskip("jsonschema")
        out = tmp_path / "sel.json"
        run_cli("select", "--data", str(toy_csv), "--label-col", "y",
                "--method", "fohsic", "--out", str(out))
        schema = json.loads(
            (PKG_ROOT / "src/hsicselect/schemas/selection.schema.json").read_text()
        )
        jsonschema.validate(json.loads(out.read_text()), schema)

    def test_stdout_json_when_no_out(self, toy_csv):
        res = run_cli("select", "--data", str(toy_csv), "--label-col", "y")
        doc = json.loads(res.stdout)
        assert doc["kind"] == "selection"
        assert doc["schema_version"] == 1


class TestBenchCommand:
    def test_small_grid(self, tmp_path):
        prefix = tmp_path / "bench"
        res = run_cli("bench", "--dataset", "multiclass", "--sizes", "40",
                      "--runs", "2", "--methods", "pearson,mi", "--seed", "1",
                      "--jobs", "1", "--out", str(prefix))
        assert res.returncode == 0
        doc = json.loads((tmp_path / "bench.json").read_text())
        assert doc["runs"] == 2
        assert {c["method"] for c in doc["cells"]} == {"pearson", "mi"}
        for cell in doc["cells"]:
            assert cell["failed"] is False
            assert len(cell["ranks"]) == 4  # 2 runs x 2 relevant features
        csv_lines = (tmp_path / "bench.csv").read_text().splitlines()
        assert csv_lines[0] == "dataset,method,size,median_rank,failed"
        assert len(csv_lines) == 3

    def test_matches_schema(self, tmp_path):
        jsonschema = pytest.importorskip("jsonschema")
        prefix = tmp_path / "b"
        run_cli("bench", "--dataset", "xor", "--sizes", "40", "--runs", "2",
                "--methods", "mi", "--jobs", "1", "--out", str(prefix))
        schema = json.loads(
            (PKG_ROOT / "src/hsicselect/schemas/benchmark.schema.json").read_text()
        )
        jsonschema.validate(json.loads((tmp_path / "b.json").read_text()), schema)

    def test_unknown_method_exits_2(self, tmp_path):
        res = run_cli("bench", "--dataset", "xor", "--sizes", "40", "--runs", "1",
                      "--methods", "relief", "--jobs", "1", "--out", str(tmp_path / "x"))
        assert res.returncode == 2

    def test_deterministic_json(self, tmp_path):
        args = ("bench", "--dataset", "regression", "--sizes", "40", "--runs", "2",
                "--methods", "pearson", "--seed", "9", "--jobs", "1")
        run_cli(*args, "--out", str(tmp_path / "r1"))
        run_cli(*args, "--out", str(tmp_path / "r2"))
        assert (tmp_path / "r1.json").read_bytes() == (tmp_path / "r2.json").read_bytes()

    def test_parallel_matches_serial(self, tmp_path):
        base = ("bench", "--dataset", "multiclass", "--sizes", "40,80", "--runs", "2",
                "--methods", "pearson,mi", "--seed", "3")
        run_cli(*base, "--jobs", "1", "--out", str(tmp_path / "serial"))
        run_cli(*base, "--jobs", "2", "--out", str(tmp_path / "par"))
        assert (tmp_path / "serial.json").read_bytes() == (tmp_path / "par.json").read_bytes()


class TestVersionFlag:
    def test_reports_backend(self):
        res = run_cli("--version")
        assert res.returncode == 0
        assert "backend" in res.stdout
