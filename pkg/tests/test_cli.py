import json
import os

import numpy as np
import pytest

from datacomplexity.cli import main
from datacomplexity.report import REPORT_SCHEMA_V1
from datacomplexity.synthetic import SyntheticSpec, generate, parse_synth_uri


def run_cli(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ---------------------------------------------------------------------------
# synthetic generators


def test_generators_deterministic():
    for gen in ("gaussian_blob", "circle", "clusters", "random_bytes"):
        a = generate(SyntheticSpec(gen, seed=5)).matrix
        b = generate(SyntheticSpec(gen, seed=5)).matrix
        assert np.array_equal(a, b)


def test_parity_generator_balanced():
    m = generate(SyntheticSpec("parity", seed=0, params={"n": 64})).matrix
    assert m.shape == (64, 3)
    assert np.all(m[:, 2] == m[:, 0] * m[:, 1])
    assert m.mean(axis=0) == pytest.approx([0, 0, 0])


def test_phase_ring_on_unit_circle():
    m = generate(SyntheticSpec("phase_ring", seed=0, params={"n": 16})).matrix
    assert np.allclose(np.linalg.norm(m, axis=1), 1.0)


def test_parse_synth_uri():
    spec = parse_synth_uri("synth:circle:n=50,noise=0.1,seed=9")
    assert spec.generator == "circle"
    assert spec.seed == 9
    assert spec.params == {"n": 50, "noise": 0.1}


# ---------------------------------------------------------------------------
# profile


def test_profile_parity_interaction_order(capsys):
    code, out, _ = run_cli(["profile", "synth:parity", "--seed", "1"], capsys)
    assert code == 0
    report = json.loads(out)
    assert report["metrics"]["interaction_order"]["raw"] == 3.0


def test_profile_circle_betti_dominant(capsys):
    code, out, _ = run_cli(["profile", "synth:circle", "--seed", "9"], capsys)
    assert code == 0
    report = json.loads(out)
    assert report["topology"]["betti_1_dominant"] is True


def test_profile_missing_file(capsys):
    code, _, err = run_cli(["profile", "/nonexistent/file.csv"], capsys)
    assert code == 2
    assert err.strip()


def test_profile_validates_against_schema(capsys):
    import jsonschema

    code, out, _ = run_cli(["profile", "synth:gaussian_blob:n=40,d=3", "--seed", "2"], capsys)
    assert code == 0
    jsonschema.validate(json.loads(out), REPORT_SCHEMA_V1)


def test_profile_does_not_mutate_input(tmp_path, capsys):
    path = tmp_path / "data.csv"
    path.write_text("1,2\n3,4\n5,6\n")
    before = path.read_bytes()
    code, _, _ = run_cli(["profile", str(path)], capsys)
    assert code == 0
    assert path.read_bytes() == before


def test_profile_csv_format(capsys):
    code, out, _ = run_cli(["profile", "synth:parity", "--seed", "1", "--format", "csv"], capsys)
    assert code == 0
    assert out.splitlines()[0] == "metric,raw,normalized"


def test_profile_partial_report_on_metric_failure(tmp_path, capsys):
    # a Rips cap below the point count fails the topology metric; the run
    # still emits a report, with error flags and exit code 1
    cfg = tmp_path / "cfg.json"
    cfg.write_text('{"rips_point_cap": 4}')
    code, out, _ = run_cli(
        ["profile", "synth:gaussian_blob:n=30,d=2", "--config", str(cfg)], capsys
    )
    assert code == 1
    report = json.loads(out)
    assert any(f.startswith("error:persistence") for f in report["flags"])
    assert any(f.startswith("error:classical_complexity") for f in report["flags"])
    assert "distributional_entropy" in report["metrics"]


# ---------------------------------------------------------------------------
# qprofile


def test_qprofile_basis_one_hot_m3_zero(tmp_path, capsys):
    path = tmp_path / "onehot.csv"
    path.write_text("1,0,0\n0,1,0\n0,0,1\n")
    code, out, _ = run_cli(["qprofile", str(path), "--map", "basis"], capsys)
    assert code == 0
    report = json.loads(out)
    assert report["metrics"]["m3_entanglement_entropy"]["raw"] == pytest.approx(0.0, abs=1e-9)


def test_qprofile_amplitude_capacity_exit_3(tmp_path, capsys):
    path = tmp_path / "wide.csv"
    path.write_text(",".join(["1"] * 8) + "\n" + ",".join(["2"] * 8) + "\n")
    code, _, err = run_cli(
        ["qprofile", str(path), "--map", "amplitude", "--qubits", "2"], capsys
    )
    assert code == 3
    assert "requires 3 qubits" in err


def test_qprofile_phase_ring_m6_positive(capsys):
    code, out, _ = run_cli(["qprofile", "synth:phase_ring", "--map", "angle", "--seed", "3"], capsys)
    assert code == 0
    report = json.loads(out)
    assert report["metrics"]["m6_embedding_topology"]["raw"] > 0.0


# ---------------------------------------------------------------------------
# barren


def test_barren_negative_slope(tmp_path, capsys):
    out_base = str(tmp_path / "study")
    code, _, _ = run_cli(
        ["barren", "--n-min", "2", "--n-max", "4", "--depth", "2", "--samples", "200",
         "--seed", "5", "--output", out_base],
        capsys,
    )
    assert code == 0
    study = json.loads(open(out_base + ".json").read())["gradient_study"]
    assert study["fitted_slope"] < 0
    csv_lines = open(out_base + ".csv").read().splitlines()
    assert csv_lines[0] == "n,variance"
    assert len(csv_lines) == 4


def test_barren_sample_floor(capsys):
    code, _, err = run_cli(["barren", "--samples", "0"], capsys)
    assert code == 4
    assert "samples must be >= 200" in err


def test_barren_qubit_cap(capsys):
    code, _, err = run_cli(["barren", "--n-max", "13", "--samples", "200"], capsys)
    assert code == 4


def test_barren_deterministic_csv(tmp_path, capsys):
    args = ["barren", "--n-min", "2", "--n-max", "3", "--depth", "1",
            "--samples", "200", "--seed", "11", "--format", "csv"]
    _, out_a, _ = run_cli(args, capsys)
    _, out_b, _ = run_cli(args, capsys)
    assert out_a == out_b


# ---------------------------------------------------------------------------
# report


def test_report_renders_config_hash(tmp_path, capsys):
    report_path = str(tmp_path / "r.json")
    run_cli(["profile", "synth:parity", "--seed", "1", "--output", report_path], capsys)
    code, out, _ = run_cli(["report", report_path], capsys)
    assert code == 0
    hashes = json.loads(open(report_path).read())["config_hash"]
    assert hashes in out


def test_report_truncated_json_exit_5(tmp_path, capsys):
    report_path = tmp_path / "broken.json"
    report_path.write_text('{"schema_version": "v1", "tool_ver')
    code, _, err = run_cli(["report", str(report_path)], capsys)
    assert code == 5


def test_report_schema_mismatch_exit_5(tmp_path, capsys):
    report_path = tmp_path / "wrong.json"
    report_path.write_text('{"schema_version": "v2"}')
    code, _, _ = run_cli(["report", str(report_path)], capsys)
    assert code == 5


def test_report_renders_flags_verbatim(tmp_path, capsys):
    report_path = str(tmp_path / "q.json")
    run_cli(["qprofile", "synth:phase_ring", "--map", "angle", "--output", report_path], capsys)
    code, out, _ = run_cli(["report", report_path], capsys)
    assert code == 0
    assert "m5=decided_proxy" in out
    assert "embedding_input=raw" in out


# ---------------------------------------------------------------------------
# determinism across all commands


@pytest.mark.parametrize(
    "args",
    [
        ["profile", "synth:parity", "--seed", "7"],
        ["profile", "synth:circle:n=40", "--seed", "7"],
        ["qprofile", "synth:phase_ring:n=12", "--map", "angle", "--seed", "7"],
        ["qprofile", "synth:gaussian_blob:n=6,d=2", "--map", "amplitude", "--seed", "7"],
    ],
)
def test_commands_byte_identical(args, capsys):
    _, out_a, _ = run_cli(args, capsys)
    _, out_b, _ = run_cli(args, capsys)
    assert out_a == out_b


def test_shipped_schema_matches_module():
    here = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
    with open(os.path.join(here, "docs", "report_schema_v1.json")) as fh:
        shipped = json.load(fh)
    assert shipped == REPORT_SCHEMA_V1
