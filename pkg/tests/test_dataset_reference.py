# -*- coding: utf-8 -*-
import hashlib
import shutil

import numpy as np
import orjson
import pytest

from kiara_plugin.beamsynth.defaults import DEFAULT_TRAINING_DIRECTIONS
from kiara_plugin.beamsynth.exceptions import (
    ConfigurationError,
    DataIntegrityError,
    InvalidArgumentError,
)
from kiara_plugin.beamsynth.models import ArrayGeometry, BeamShape, DesiredPattern, Excitation
from kiara_plugin.beamsynth.models.dataset import DatasetConfig, ReferenceKind
from kiara_plugin.beamsynth.models.neural import PhaseEncoding, SplitLabel, TargetMode
from kiara_plugin.beamsynth.utils import wrap_phase_deg
from kiara_plugin.beamsynth.utils.dataset import (
    decode_targets,
    encode_input,
    encode_targets,
    generate,
    load_reference,
    pipeline_phases,
    split_labels,
    validate_reference_against_pipeline,
)
from kiara_plugin.beamsynth.utils.files import (
    read_dataset,
    read_excitation,
    read_model,
    write_dataset,
    write_excitation,
    write_model,
)
from kiara_plugin.beamsynth.utils.neural import create_mlp


def same_phase(a, b, atol=1e-6) -> bool:
    return bool(np.all(np.abs(wrap_phase_deg(np.asarray(a) - np.asarray(b))) <= atol))


def rows_by_steer(report):
    return {row.steer_deg: row for row in report.rows}


class TestSplit:
    def test_default_sizes(self, training_dataset):

        assert training_dataset.size == 101
        assert training_dataset.label_counts() == {
            "train": 71,
            "validation": 15,
            "test": 15,
        }

    def test_pinned_directions(self, training_dataset):

        train = training_dataset.directions(SplitLabel.train)
        for steer in (40.0, 90.0, 140.0):
            assert steer in train

    def test_deterministic(self):

        a = split_labels(DEFAULT_TRAINING_DIRECTIONS, (0.7, 0.15, 0.15), seed=5)
        b = split_labels(DEFAULT_TRAINING_DIRECTIONS, (0.7, 0.15, 0.15), seed=5)
        c = split_labels(DEFAULT_TRAINING_DIRECTIONS, (0.7, 0.15, 0.15), seed=6)
        assert a == b
        assert a != c

    def test_too_few_directions(self):

        with pytest.raises(ConfigurationError):
            split_labels([40.0, 60.0, 90.0, 140.0], (0.2, 0.4, 0.4), seed=1)

    def test_invalid_fractions(self):

        with pytest.raises(ValueError):
            DatasetConfig(split=(0.5, 0.5, 0.5))


class TestEncoding:
    def test_inputs_in_range(self, training_dataset):

        inputs = np.asarray(training_dataset.inputs)
        assert inputs.shape == (101, 18)
        assert np.all(np.abs(inputs) <= 1.0)

    def test_input_peak_follows_steer(self):

        x = encode_input(40.0)
        assert int(np.argmax(x)) == 0
        assert x[0] == pytest.approx(1.0)
        assert int(np.argmax(encode_input(140.0))) == 17

    def test_sector_inputs_are_binary(self):

        encoding = PhaseEncoding(desired=DesiredPattern(shape=BeamShape.sector))
        x = encode_input(90.0, encoding)
        assert set(np.unique(x)) <= {-1.0, 1.0}
        assert np.any(x == 1.0)

    def test_mirrored_inputs(self):

        assert np.allclose(encode_input(70.0), encode_input(110.0)[::-1])

    def test_out_of_range(self):

        with pytest.raises(InvalidArgumentError):
            encode_input(35.0)

    @pytest.mark.parametrize("mode", [TargetMode.element_span, TargetMode.wrapped])
    def test_targets_decode_to_wrapped_phases(self, mode):

        encoding = PhaseEncoding(target_mode=mode)
        for steer in (40.0, 73.0, 90.0, 127.5):
            raw = pipeline_phases(encoding.geometry, steer)
            targets = encode_targets(raw, encoding)
            assert np.all(np.abs(targets) <= encoding.target_scale + 1e-12)
            assert same_phase(decode_targets(targets, encoding), raw)

    def test_broadside_targets_are_zero(self):

        raw = pipeline_phases(ArrayGeometry(), 90.0)
        assert np.allclose(encode_targets(raw, PhaseEncoding()), 0.0, atol=1e-12)


class TestGenerate:
    def test_sorted_and_unique(self):

        dataset = generate(ArrayGeometry(), [100.0, 60.0, 100.0, 80.0])
        assert dataset.steer_deg == [60.0, 80.0, 100.0]

    def test_empty(self):

        with pytest.raises(InvalidArgumentError):
            generate(ArrayGeometry(), [])

    def test_out_of_range(self):

        with pytest.raises(InvalidArgumentError):
            generate(ArrayGeometry(), [30.0, 90.0])

    def test_phases_are_wrapped(self, training_dataset):

        phases = np.asarray(training_dataset.phases_deg)
        assert np.all(phases > -180.0)
        assert np.all(phases <= 180.0)


class TestReferenceTables:
    def test_wwl_phases(self, reference_folder):

        table = load_reference(ReferenceKind.wwl_nn_phases, reference_folder=str(reference_folder))
        assert table.n_elements == 16
        assert not table.has_column(90.0)
        assert table.value(1, 40.0) == pytest.approx(17.208)

    def test_fourier_amplitudes(self, reference_folder):

        table = load_reference("fourier_amplitudes", reference_folder=str(reference_folder))
        values = table.as_array()
        assert np.array_equal(values, values[::-1])
        for _, total in table.column_sums():
            assert 1.0 <= total <= 1.2
        assert np.array_equal(table.column(40.0), table.column(140.0))

    def test_checksum_mismatch(self, reference_folder, tmp_path):

        folder = tmp_path / "reference"
        shutil.copytree(reference_folder, folder)
        path = folder / "wwl_nn_phases.csv"
        path.write_text(path.read_text().replace("17.208", "17.209", 1))

        with pytest.raises(DataIntegrityError):
            load_reference("wwl_nn_phases", reference_folder=str(folder))

    def test_missing_table(self, reference_folder, tmp_path):

        folder = tmp_path / "reference"
        shutil.copytree(reference_folder, folder)
        (folder / "fourier_amplitudes.csv").unlink()

        with pytest.raises(DataIntegrityError):
            load_reference("fourier_amplitudes", reference_folder=str(folder))

    def test_broken_mirror_symmetry(self, reference_folder, tmp_path):

        folder = tmp_path / "reference"
        shutil.copytree(reference_folder, folder)
        path = folder / "fourier_amplitudes.csv"
        lines = path.read_text().splitlines()
        cells = lines[1].split(",")
        cells[1] = "0.0096"
        lines[1] = ",".join(cells)
        path.write_text("\n".join(lines) + "\n")

        # a consistent checksum, so only the symmetry check can fail
        manifest_path = folder / "manifest.json"
        manifest = orjson.loads(manifest_path.read_bytes())
        manifest["fourier_amplitudes"]["sha256"] = hashlib.sha256(path.read_bytes()).hexdigest()
        manifest_path.write_bytes(orjson.dumps(manifest))

        with pytest.raises(DataIntegrityError, match="differ"):
            load_reference("fourier_amplitudes", reference_folder=str(folder))


class TestReferenceReport:
    def test_wwl_report(self):

        table = load_reference(ReferenceKind.wwl_nn_phases)
        report = validate_reference_against_pipeline(table, ArrayGeometry())
        rows = rows_by_steer(report)

        assert rows[90.0].status == "skipped"
        assert rows[40.0].peak_deg == pytest.approx(35.65, abs=0.2)
        assert rows[140.0].peak_deg == pytest.approx(144.25, abs=0.2)
        for steer in (60.0, 120.0):
            assert rows[steer].status == "ok"

    def test_amplitude_report(self):

        table = load_reference(ReferenceKind.fourier_amplitudes)
        report = validate_reference_against_pipeline(
            table, ArrayGeometry(), directions=[90.0, 95.0]
        )
        rows = rows_by_steer(report)
        assert rows[95.0].status == "skipped"
        assert rows[90.0].peak_deg == pytest.approx(90.0, abs=0.05)

        frame = report.to_frame()
        assert list(frame.columns) == ["steer_deg", "status", "peak_deg", "sll_db", "hpbw_deg"]


class TestFiles:
    def test_model_file(self, tmp_path):

        mlp = create_mlp(seed=3)
        encoding = PhaseEncoding(target_mode=TargetMode.wrapped)
        path = tmp_path / "model.json"
        write_model(str(path), mlp, encoding)

        read_mlp, read_encoding = read_model(str(path))
        assert read_mlp.dict() == mlp.dict()
        assert read_encoding.target_mode == TargetMode.wrapped
        assert read_encoding.steer_range_deg == encoding.steer_range_deg

    def test_model_version_mismatch(self, tmp_path):

        path = tmp_path / "model.json"
        write_model(str(path), create_mlp(), PhaseEncoding())
        data = orjson.loads(path.read_bytes())
        data["input_encoding_version"] = 99
        path.write_bytes(orjson.dumps(data))

        with pytest.raises(DataIntegrityError):
            read_model(str(path))

    def test_invalid_json(self, tmp_path):

        path = tmp_path / "model.json"
        path.write_text("{ not json")
        with pytest.raises(DataIntegrityError):
            read_model(str(path))

    def test_dataset_file(self, tmp_path, training_dataset):

        path = tmp_path / "dataset.csv"
        write_dataset(str(path), training_dataset)
        dataset = read_dataset(str(path), training_dataset.encoding)

        assert dataset.steer_deg == training_dataset.steer_deg
        assert dataset.split == training_dataset.split
        assert np.allclose(dataset.targets, training_dataset.targets, atol=1e-8)
        assert same_phase(dataset.phases_deg, training_dataset.phases_deg, atol=1e-5)

    def test_dataset_file_other_encoding(self, tmp_path, training_dataset):

        path = tmp_path / "dataset.csv"
        write_dataset(str(path), training_dataset)
        sector = PhaseEncoding(desired=DesiredPattern(shape=BeamShape.sector, width_u=0.30))

        with pytest.raises(DataIntegrityError, match="input encoding"):
            read_dataset(str(path), sector)

    def test_dataset_file_beam_options(self, tmp_path):

        desired = DesiredPattern(shape=BeamShape.sector, width_u=0.30)
        dataset = generate(ArrayGeometry(), [50.0, 70.0, 90.0], desired=desired)
        path = tmp_path / "dataset.csv"
        write_dataset(str(path), dataset)

        read = read_dataset(str(path), PhaseEncoding(desired=desired))
        assert np.array_equal(read.inputs, dataset.inputs)
        with pytest.raises(DataIntegrityError):
            read_dataset(str(path))

    def test_dataset_file_missing_columns(self, tmp_path):

        path = tmp_path / "dataset.csv"
        path.write_text("steer_deg,split\n90,train\n")
        with pytest.raises(DataIntegrityError):
            read_dataset(str(path))

    def test_excitation_file(self, tmp_path):

        geometry = ArrayGeometry(n_elements=4)
        excitation = Excitation.from_weights([1.0, 1j, -1.0, 0.5 - 0.5j])
        path = tmp_path / "excitation.json"
        write_excitation(str(path), geometry, excitation)

        read_geometry, read_exc = read_excitation(str(path))
        assert read_geometry == geometry
        assert np.allclose(read_exc.weights, excitation.weights)
