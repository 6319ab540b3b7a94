import json
import subprocess
import sys

import numpy as np
import pytest

from reduction_lab.cli import main


def write_spec(path, dimension, generators, unital):
    def encode(M):
        return [[[float(np.real(z)), float(np.imag(z))] for z in row] for row in M]

    path.write_text(
        json.dumps(
            {
                "dimension": dimension,
                "generators": [encode(g) for g in generators],
                "unital": unital,
            }
        )
    )


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def m2_spec(tmp_path):
    e12 = np.array([[0, 1], [0, 0]], dtype=complex)
    e21 = e12.T.copy()
    path = tmp_path / "m2.json"
    write_spec(path, 2, [e12, e21], unital=False)
    return path


@pytest.fixture
def triangular_spec(tmp_path):
    path = tmp_path / "ut.json"
    gens = [np.diag([1.0, 0.0]), np.diag([0.0, 1.0]), np.array([[0.0, 1.0], [0.0, 0.0]])]
    write_spec(path, 2, [g.astype(complex) for g in gens], unital=False)
    return path


class TestAnalyze:
    def test_full_matrix_algebra(self, capsys, m2_spec):
        code, out, _ = run(capsys, ["analyze", str(m2_spec)])
        assert code == 0
        report = json.loads(out)
        assert report["radical_dimension"] == 0
        assert report["reduction_property"]["verdict"] is True
        assert report["wedderburn_profile"] == [[2, 1]]
        assert report["projection_constant_lower_bound"] == pytest.approx(1.0)
        assert report["bicommutant_equals_algebra"] is True

    def test_triangular_witness(self, capsys, triangular_spec):
        code, out, _ = run(capsys, ["analyze", str(triangular_spec)])
        assert code == 0
        report = json.loads(out)
        assert report["reduction_property"]["verdict"] is False
        cert = report["reduction_property"]["certificate"]
        assert "uncomplemented_subspace_frame" in cert
        frame = np.asarray(cert["uncomplemented_subspace_frame"], dtype=float)
        assert frame.shape == (2, 1, 2)
        assert report["wedderburn_profile"] is None

    def test_empty_generators_unital(self, capsys, tmp_path):
        path = tmp_path / "scalars.json"
        write_spec(path, 3, [], unital=True)
        code, out, _ = run(capsys, ["analyze", str(path)])
        assert code == 0
        report = json.loads(out)
        assert report["reduction_property"]["verdict"] is True
        assert report["wedderburn_profile"] == [[1, 3]]

    def test_missing_file_exit_one(self, capsys, tmp_path):
        code, _, err = run(capsys, ["analyze", str(tmp_path / "nope.json")])
        assert code == 1 and "error" in err

    def test_bad_json_exit_one(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        code, _, err = run(capsys, ["analyze", str(path)])
        assert code == 1 and "error" in err

    def test_shape_mismatch_exit_one(self, capsys, tmp_path):
        path = tmp_path / "mismatch.json"
        path.write_text(json.dumps({"dimension": 3, "generators": [[[[0, 0]]]], "unital": True}))
        code, _, err = run(capsys, ["analyze", str(path)])
        assert code == 1 and "error" in err

    def test_json_roundtrip_byte_identical(self, capsys, m2_spec):
        _, out, _ = run(capsys, ["analyze", str(m2_spec)])
        parsed = json.loads(out)
        again = json.dumps(parsed, sort_keys=True, separators=(",", ":")) + "\n"
        assert again == out

    def test_deterministic_modulo_timing(self, capsys, m2_spec):
        _, out1, _ = run(capsys, ["analyze", str(m2_spec), "--seed", "7"])
        _, out2, _ = run(capsys, ["analyze", str(m2_spec), "--seed", "7"])
        r1, r2 = json.loads(out1), json.loads(out2)
        r1.pop("timing_seconds"), r2.pop("timing_seconds")
        assert r1 == r2

    def test_text_format(self, capsys, m2_spec):
        code, out, _ = run(capsys, ["analyze", str(m2_spec), "--format", "text"])
        assert code == 0
        assert "reduction property:     yes" in out

    def test_tolerance_override_in_spec_file(self, capsys, tmp_path):
        path = tmp_path / "loose.json"
        path.write_text(json.dumps({
            "dimension": 2,
            "generators": [[[[0, 0], [1, 0]], [[0, 0], [0, 0]]]],
            "unital": True,
            "tolerance": {"eq_eps": 1e-6, "rank_eps": 1e-9},
        }))
        code, out, _ = run(capsys, ["analyze", str(path)])
        assert code == 0
        report = json.loads(out)
        assert report["radical_dimension"] == 1


class TestGallery:
    def test_a_lambda_bound(self, capsys):
        code, out, _ = run(capsys, ["gallery", "a_lambda", "--lambda", "3"])
        assert code == 0
        report = json.loads(out)
        assert report["projection_constant_lower_bound"] >= 3.0
        assert report["projection_constant_lower_bound"] == pytest.approx(np.sqrt(10.0))

    def test_digraph_asymmetric(self, capsys):
        code, out, _ = run(capsys, ["gallery", "digraph", "--edges", "1>2"])
        assert code == 0
        report = json.loads(out)
        assert report["reduction_property"]["verdict"] is False

    def test_graph_truncation_profile(self, capsys):
        code, out, _ = run(
            capsys,
            ["gallery", "graph_truncation", "--k", "3", "--decay", "0.3", "--quick"],
        )
        assert code == 0
        report = json.loads(out)
        assert report["wedderburn_profile"] == [[3, 2]]

    def test_csl_masks(self, capsys):
        code, out, _ = run(capsys, ["gallery", "csl", "--masks", "10,01"])
        assert code == 0
        report = json.loads(out)
        assert report["reduction_property"]["verdict"] is True

    def test_non_reflexive(self, capsys):
        code, out, _ = run(capsys, ["gallery", "non_reflexive"])
        assert code == 0
        assert json.loads(out)["radical_dimension"] == 1

    def test_unknown_edges_syntax_exit_one(self, capsys):
        code, _, err = run(capsys, ["gallery", "digraph", "--edges", "1-2"])
        assert code == 1 and "error" in err

    def test_structural_failure_exit_two(self, capsys):
        code, _, err = run(capsys, ["gallery", "graph_truncation", "--k", "3", "--decay", "1.5"])
        assert code == 2 and "error" in err


class TestSelftest:
    def test_quick_selftest_passes(self, capsys):
        code, out, _ = run(capsys, ["selftest", "--quick", "--seed", "42"])
        assert code == 0
        assert "FAIL" not in out
        assert out.count("PASS") >= 8

    def test_alternate_seed(self, capsys):
        code, out, _ = run(capsys, ["selftest", "--quick", "--seed", "7"])
        assert code == 0
        assert "FAIL" not in out


class TestEntryPoints:
    def test_module_entry_point(self, m2_spec):
        proc = subprocess.run(
            [sys.executable, "-m", "reduction_lab", "analyze", str(m2_spec)],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert json.loads(proc.stdout)["reduction_property"]["verdict"] is True

    def test_env_seed_respected(self, m2_spec):
        env_run = subprocess.run(
            [sys.executable, "-m", "reduction_lab", "analyze", str(m2_spec)],
            capture_output=True,
            text=True,
            env={"REDUCTION_LAB_SEED": "7", "PATH": "/usr/bin:/bin"},
        )
        flag_run = subprocess.run(
            [sys.executable, "-m", "reduction_lab", "analyze", str(m2_spec), "--seed", "7"],
            capture_output=True,
            text=True,
        )
        a, b = json.loads(env_run.stdout), json.loads(flag_run.stdout)
        a.pop("timing_seconds"), b.pop("timing_seconds")
        assert a == b
