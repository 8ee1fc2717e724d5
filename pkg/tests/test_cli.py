# -*- coding: utf-8 -*-
import os
import subprocess
import sys

import orjson
import pandas as pd
import pytest


def run_cli(*args, env=None) -> subprocess.CompletedProcess:

    full_env = dict(os.environ)
    full_env.pop("BEAMSYNTH_SEED", None)
    if env:
        full_env.update(env)
    return subprocess.run(
        [sys.executable, "-m", "kiara_plugin.beamsynth.cli", *[str(a) for a in args]],
        capture_output=True,
        text=True,
        env=full_env,
    )


def config_line(result: subprocess.CompletedProcess) -> dict:

    first = result.stdout.splitlines()[0]
    assert first.startswith("# config ")
    return orjson.loads(first[len("# config ") :])


def field(line: str, key: str) -> str:

    for token in line.split():
        name, _, value = token.partition("=")
        if name == key:
            return value
    raise KeyError(key)


class TestSynth:
    def test_chebyshev(self, tmp_path):

        result = run_cli("synth", "chebyshev", "--sll", -30, "-o", tmp_path)
        assert result.returncode == 0, result.stderr

        config = config_line(result)
        assert config["command"] == "synth"
        assert config["sll_db"] == -30.0

        metrics = result.stdout.splitlines()[1]
        assert metrics.startswith("method=chebyshev")
        assert float(field(metrics, "sll")) <= -29.5
        for name in ("excitation.json", "pattern.csv", "run_config.yaml"):
            assert (tmp_path / name).is_file()

        pattern = pd.read_csv(tmp_path / "pattern.csv")
        assert list(pattern.columns) == ["theta_deg", "af_db", "af_re", "af_im"]
        assert len(pattern) == 3601

    def test_fourier_broadside_symmetric(self, tmp_path):

        result = run_cli("synth", "fourier", "-o", tmp_path)
        assert result.returncode == 0, result.stderr

        data = orjson.loads((tmp_path / "excitation.json").read_bytes())
        amplitudes = data["amplitudes"]
        assert data["n_elements"] == 16
        assert amplitudes == pytest.approx(amplitudes[::-1])

    def test_woodward_lawson_samples(self, tmp_path):

        result = run_cli("synth", "woodward-lawson", "--steer", 70, "-o", tmp_path)
        assert result.returncode == 0, result.stderr

        samples = pd.read_csv(tmp_path / "samples.csv")
        assert list(samples.columns) == ["m", "theta_deg", "u", "b"]
        assert len(samples) == 16

    def test_no_output_folder(self, tmp_path):

        result = run_cli("synth", "taylor")
        assert result.returncode == 0, result.stderr
        assert len(result.stdout.splitlines()) == 2

    def test_unknown_method(self):

        result = run_cli("synth", "least-squares")
        assert result.returncode == 2

    def test_unknown_flag(self):

        result = run_cli("synth", "chebyshev", "--no-such-flag")
        assert result.returncode == 2

    def test_invalid_design(self):

        # sidelobe level above the allowed design range
        result = run_cli("synth", "chebyshev", "--sll", -5)
        assert result.returncode == 2

    def test_steer_out_of_range(self):

        result = run_cli("synth", "fourier", "--steer", 0)
        assert result.returncode == 2

    def test_rerun_from_config(self, tmp_path):

        first = tmp_path / "first"
        second = tmp_path / "second"
        result = run_cli("synth", "taylor", "--sll", -35, "--n-bar", 4, "-o", first)
        assert result.returncode == 0, result.stderr

        rerun = run_cli("--config", first / "run_config.yaml", "synth", "taylor", "-o", second)
        assert rerun.returncode == 0, rerun.stderr
        assert config_line(rerun)["sll_db"] == -35.0

        for name in ("excitation.json", "pattern.csv"):
            assert (first / name).read_bytes() == (second / name).read_bytes()
        assert result.stdout.splitlines()[1:] == rerun.stdout.splitlines()[1:]

    def test_config_applies_to_recording_command(self, tmp_path):

        result = run_cli("synth", "chebyshev", "--n", 8, "-o", tmp_path / "synth")
        assert result.returncode == 0, result.stderr

        config_file = tmp_path / "synth" / "run_config.yaml"
        other = run_cli("--config", config_file, "dataset")
        assert other.returncode == 0, other.stderr
        assert config_line(other)["n_elements"] == 16

        same = run_cli("--config", config_file, "synth", "chebyshev")
        assert config_line(same)["n_elements"] == 8

    def test_config_from_unknown_command(self, tmp_path):

        config_file = tmp_path / "run_config.yaml"
        config_file.write_text("command: no-such-command\nn_elements: 8\n")
        result = run_cli("--config", config_file, "synth", "chebyshev")
        assert result.returncode == 2


class TestAnalyze:
    def test_stored_excitation(self, tmp_path):

        synth = run_cli("synth", "chebyshev", "-o", tmp_path / "cheb")
        assert synth.returncode == 0, synth.stderr

        excitation_file = tmp_path / "cheb" / "excitation.json"
        data = orjson.loads(excitation_file.read_bytes())
        assert data["spacing_m"] == pytest.approx(0.0612, abs=1e-4)
        assert data["wavenumber_rad_m"] == pytest.approx(51.35, abs=0.01)

        result = run_cli("analyze", "--excitation", excitation_file)
        assert result.returncode == 0, result.stderr
        line = result.stdout.splitlines()[1]
        assert line.startswith("method=file")
        assert line.split()[1:] == synth.stdout.splitlines()[1].split()[1:]

    def test_steered(self, tmp_path):

        assert run_cli("synth", "taylor", "-o", tmp_path / "taylor").returncode == 0
        result = run_cli(
            "analyze",
            "--excitation",
            tmp_path / "taylor" / "excitation.json",
            "--steer",
            60,
            "-o",
            tmp_path / "steered",
        )
        assert result.returncode == 0, result.stderr
        assert float(field(result.stdout.splitlines()[1], "peak")) == pytest.approx(60.0, abs=0.1)
        assert (tmp_path / "steered" / "excitation.json").is_file()
        assert len(pd.read_csv(tmp_path / "steered" / "pattern.csv")) == 3601

    def test_invalid_file(self, tmp_path):

        path = tmp_path / "excitation.json"
        path.write_text('{"n_elements": 4, "spacing_wl": 0.5, "amplitudes": [1.0, 1.0], "phases_deg": [0.0, 0.0]}')
        result = run_cli("analyze", "--excitation", path)
        assert result.returncode != 0


class TestScan:
    def test_default_directions(self, tmp_path):

        result = run_cli("scan", "--method", "chebyshev", "-o", tmp_path)
        assert result.returncode == 0, result.stderr

        lines = result.stdout.splitlines()[1:]
        assert len(lines) == 17
        assert lines[0].startswith("steer=40.000 method=chebyshev")

        frame = pd.read_csv(tmp_path / "scan.csv")
        assert len(frame) == 17
        assert list(frame.columns) == ["steer_deg", "peak_deg", "sll_db", "hpbw_deg"]
        assert (tmp_path / "patterns" / "pattern_46.25.csv").is_file()

    def test_single_direction(self, tmp_path):

        result = run_cli("scan", "--from", 70, "--to", 70, "-o", tmp_path)
        assert result.returncode == 0, result.stderr
        assert len(pd.read_csv(tmp_path / "scan.csv")) == 1

    def test_preset(self):

        result = run_cli("scan", "--preset", "selected10")
        assert result.returncode == 0, result.stderr
        assert len(result.stdout.splitlines()) == 11

    def test_reversed_range(self):

        result = run_cli("scan", "--from", 120, "--to", 60)
        assert result.returncode == 2

    def test_range_outside_visible(self):

        result = run_cli("scan", "--from", 0, "--to", 60)
        assert result.returncode == 2


def test_compare(tmp_path):

    result = run_cli("compare", "-o", tmp_path)
    assert result.returncode == 0, result.stderr

    frame = pd.read_csv(tmp_path / "comparison.csv")
    assert list(frame["method"]) == [
        "fourier",
        "woodward-lawson",
        "schelkunoff",
        "chebyshev",
        "taylor",
    ]


class TestDataset:
    def test_default(self, tmp_path):

        result = run_cli("dataset", "-o", tmp_path)
        assert result.returncode == 0, result.stderr
        assert result.stdout.splitlines()[1] == "pairs=101 train=71 validation=15 test=15"

        frame = pd.read_csv(tmp_path / "dataset.csv")
        assert len(frame) == 101
        assert "in_18" in frame.columns
        assert "tgt_16" in frame.columns

    def test_seed_from_environment(self, tmp_path):

        env_run = run_cli("dataset", "-o", tmp_path / "env", env={"BEAMSYNTH_SEED": "7"})
        flag_run = run_cli("dataset", "--seed", 7, "-o", tmp_path / "flag")
        other = run_cli("dataset", "--seed", 8, "-o", tmp_path / "other")

        assert config_line(env_run)["seed"] == 7
        env_data = (tmp_path / "env" / "dataset.csv").read_bytes()
        assert env_data == (tmp_path / "flag" / "dataset.csv").read_bytes()
        assert env_data != (tmp_path / "other" / "dataset.csv").read_bytes()


class TestTraining:
    def test_zero_epochs(self, tmp_path):

        result = run_cli("train", "--epochs", 0, "-o", tmp_path / "a")
        assert result.returncode == 0, result.stderr
        line = result.stdout.splitlines()[1]
        assert field(line, "epochs") == "0"
        assert field(line, "stop") == "max_epochs"
        assert field(line, "converged_epoch") == "none"

        assert (tmp_path / "a" / "model.json").is_file()
        trace = pd.read_csv(tmp_path / "a" / "trace.csv")
        assert list(trace.columns) == ["epoch", "train_mse", "val_mse"]

        again = run_cli("train", "--epochs", 0, "-o", tmp_path / "b")
        assert again.returncode == 0, again.stderr
        assert (tmp_path / "a" / "model.json").read_bytes() == (
            tmp_path / "b" / "model.json"
        ).read_bytes()

    def test_from_dataset_file(self, tmp_path):

        assert run_cli("dataset", "-o", tmp_path).returncode == 0
        model = tmp_path / "net.json"
        result = run_cli(
            "train",
            "--dataset",
            tmp_path / "dataset.csv",
            "--epochs",
            5,
            "--out-model",
            model,
        )
        assert result.returncode == 0, result.stderr
        assert field(result.stdout.splitlines()[1], "epochs") == "5"
        assert model.is_file()

    def test_dataset_with_beam_options(self, tmp_path):

        beam = ["--width-u", 0.30, "--shape", "sector"]
        assert run_cli("dataset", *beam, "-o", tmp_path / "data").returncode == 0
        dataset_file = tmp_path / "data" / "dataset.csv"

        result = run_cli("train", "--dataset", dataset_file, *beam, "--epochs", 0, "-o", tmp_path / "model")
        assert result.returncode == 0, result.stderr
        desired = orjson.loads((tmp_path / "model" / "model.json").read_bytes())["encoding"]["desired"]
        assert desired["shape"] == "sector"
        assert desired["width_u"] == 0.30

        mismatch = run_cli("train", "--dataset", dataset_file, "--epochs", 0)
        assert mismatch.returncode == 1
        assert "input encoding" in mismatch.stderr

    def test_infer(self, trained_model_file, tmp_path):

        result = run_cli("infer", "--model", trained_model_file, "--steer", 70, "-o", tmp_path)
        assert result.returncode == 0, result.stderr

        line = result.stdout.splitlines()[1]
        assert line.startswith("method=nn")
        assert abs(float(field(line, "peak")) - 70.0) <= 2.0
        assert (tmp_path / "excitation.json").is_file()

    def test_infer_outside_training_range(self, trained_model_file):

        result = run_cli("infer", "--model", trained_model_file, "--steer", 30)
        assert result.returncode == 2

    def test_infer_missing_model(self, tmp_path):

        result = run_cli("infer", "--model", tmp_path / "missing.json")
        assert result.returncode == 2


class TestValidateReference:
    def test_all_tables(self, tmp_path):

        result = run_cli("validate-ref", "-o", tmp_path)
        assert result.returncode == 0, result.stderr

        lines = result.stdout.splitlines()
        assert "table=wwl_nn_phases steer=90 status=skipped" in lines
        sums = [float(field(line, "column_sum")) for line in lines if "column_sum=" in line]
        assert len(sums) == 11
        assert all(1.0 <= s <= 1.2 for s in sums)

        frame = pd.read_csv(tmp_path / "reference_report.csv")
        assert list(frame.columns) == [
            "table",
            "steer_deg",
            "status",
            "peak_deg",
            "sll_db",
            "hpbw_deg",
        ]
        assert set(frame["table"]) == {"wwl_nn_phases", "fourier_amplitudes"}

    def test_single_table(self):

        result = run_cli("validate-ref", "--kind", "wwl_nn_phases")
        assert result.returncode == 0, result.stderr
        assert all("fourier_amplitudes" not in line for line in result.stdout.splitlines())
