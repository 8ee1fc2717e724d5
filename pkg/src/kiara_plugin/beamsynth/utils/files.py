# -*- coding: utf-8 -*-

"""Reading and writing the files the ``beamsynth`` command-line interface produces.

JSON goes through *orjson* (indented, sorted keys), tables through *pandas* with a fixed float format, run
configurations through *ruamel.yaml*. All writers are deterministic: the same inputs produce byte-identical files.
"""
import os
from typing import Any, Mapping, Tuple, Union

import numpy as np
import orjson

from kiara_plugin.beamsynth.defaults import CSV_FLOAT_FORMAT, INPUT_ENCODING_VERSION
from kiara_plugin.beamsynth.exceptions import (
    ConfigurationError,
    DataIntegrityError,
    InvalidArgumentError,
)
from kiara_plugin.beamsynth.models import ArrayGeometry, Excitation, Pattern, WlSampleSet
from kiara_plugin.beamsynth.models.dataset import SynthesisDataset
from kiara_plugin.beamsynth.models.neural import (
    Mlp,
    PhaseEncoding,
    SplitLabel,
    TrainingTrace,
)

INPUT_TOLERANCE = 1e-6


def _ensure_parent(path: str):

    parent = os.path.dirname(os.path.abspath(path))
    os.makedirs(parent, exist_ok=True)


def write_json(path: str, data: Any):

    _ensure_parent(path)
    with open(path, "wb") as f:
        f.write(
            orjson.dumps(
                data,
                option=orjson.OPT_INDENT_2
                | orjson.OPT_SORT_KEYS
                | orjson.OPT_SERIALIZE_NUMPY,
            )
        )


def read_json(path: str) -> Any:

    try:
        with open(path, "rb") as f:
            return orjson.loads(f.read())
    except orjson.JSONDecodeError as e:
        raise DataIntegrityError(msg=f"Can't parse JSON file '{path}': {e}")


def dumps_compact(data: Any) -> str:
    return orjson.dumps(
        data, option=orjson.OPT_SORT_KEYS | orjson.OPT_SERIALIZE_NUMPY
    ).decode()


def write_frame(path: str, frame):

    _ensure_parent(path)
    frame.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")


def write_excitation(path: str, geometry: ArrayGeometry, excitation: Excitation):

    excitation.check_geometry(geometry)
    write_json(
        path,
        {
            "n_elements": geometry.n_elements,
            "spacing_wl": geometry.spacing_wl,
            "frequency_hz": geometry.frequency_hz,
            "wavelength_m": geometry.wavelength_m,
            "spacing_m": geometry.spacing_m,
            "wavenumber_rad_m": geometry.wavenumber,
            "amplitudes": excitation.amplitudes.tolist(),
            "phases_deg": excitation.phases_deg.tolist(),
        },
    )


def read_excitation(path: str) -> Tuple[ArrayGeometry, Excitation]:

    data = read_json(path)
    try:
        geometry = ArrayGeometry(
            n_elements=data["n_elements"],
            spacing_wl=data["spacing_wl"],
            frequency_hz=data.get("frequency_hz", ArrayGeometry().frequency_hz),
        )
        excitation = Excitation.from_polar(data["amplitudes"], data["phases_deg"])
    except (KeyError, TypeError, ValueError) as e:
        raise DataIntegrityError(msg=f"Invalid excitation file '{path}': {e}")
    excitation.check_geometry(geometry)
    return geometry, excitation


def pattern_frame(pattern: Pattern):

    import pandas as pd

    return pd.DataFrame(
        {
            "theta_deg": pattern.theta,
            "af_db": pattern.db,
            "af_re": np.asarray(pattern.af_re, dtype=float),
            "af_im": np.asarray(pattern.af_im, dtype=float),
        }
    )


def write_pattern(path: str, pattern: Pattern):
    write_frame(path, pattern_frame(pattern))


def write_samples(path: str, sample_set: WlSampleSet):

    import pandas as pd

    frame = pd.DataFrame(
        {
            "m": [s.m for s in sample_set.samples],
            "theta_deg": sample_set.theta,
            "u": sample_set.u,
            "b": sample_set.b,
        }
    )
    write_frame(path, frame)


def dataset_frame(dataset: SynthesisDataset):

    import pandas as pd

    n_in = dataset.encoding.n_inputs
    n_out = dataset.encoding.geometry.n_elements
    frame = pd.DataFrame(
        {"steer_deg": dataset.steer_deg, "split": [x.value for x in dataset.split]}
    )
    inputs = np.asarray(dataset.inputs, dtype=float).reshape(-1, n_in)
    targets = np.asarray(dataset.targets, dtype=float).reshape(-1, n_out)
    for i in range(n_in):
        frame[f"in_{i + 1}"] = inputs[:, i]
    for i in range(n_out):
        frame[f"tgt_{i + 1}"] = targets[:, i]
    return frame


def write_dataset(path: str, dataset: SynthesisDataset):
    write_frame(path, dataset_frame(dataset))


def read_dataset(path: str, encoding: Union[None, PhaseEncoding] = None) -> SynthesisDataset:
    """Read a dataset file; element phases are recovered from the targets with the given encoding.

    The stored inputs must equal the ones the encoding produces for each steering direction.
    """

    import pandas as pd

    from kiara_plugin.beamsynth.utils.dataset import decode_targets, encode_input

    if encoding is None:
        encoding = PhaseEncoding()

    frame = pd.read_csv(path)
    in_cols = [f"in_{i + 1}" for i in range(encoding.n_inputs)]
    tgt_cols = [f"tgt_{i + 1}" for i in range(encoding.geometry.n_elements)]
    missing = [c for c in ["steer_deg", "split", *in_cols, *tgt_cols] if c not in frame.columns]
    if missing:
        raise DataIntegrityError(
            msg=f"Dataset file '{path}' lacks columns: {', '.join(missing)}"
        )

    steer_deg = frame["steer_deg"].astype(float).tolist()
    if not steer_deg:
        raise DataIntegrityError(msg=f"Dataset file '{path}' contains no rows.")
    inputs = frame[in_cols].to_numpy(dtype=float)
    try:
        expected = np.vstack([encode_input(steer, encoding) for steer in steer_deg])
    except InvalidArgumentError as e:
        raise DataIntegrityError(msg=f"Invalid dataset file '{path}': {e}")
    if not np.allclose(inputs, expected, rtol=0.0, atol=INPUT_TOLERANCE):
        worst = float(np.max(np.abs(inputs - expected)))
        raise DataIntegrityError(
            msg=f"Inputs in dataset file '{path}' don't match the input encoding (largest difference: {worst:.3g}), check the beam options."
        )

    targets = frame[tgt_cols].to_numpy(dtype=float)
    try:
        return SynthesisDataset(
            encoding=encoding,
            steer_deg=steer_deg,
            inputs=inputs.tolist(),
            targets=targets.tolist(),
            phases_deg=[decode_targets(t, encoding).tolist() for t in targets],
            split=[SplitLabel(x) for x in frame["split"]],
        )
    except ValueError as e:
        raise DataIntegrityError(msg=f"Invalid dataset file '{path}': {e}")


def write_model(path: str, mlp: Mlp, encoding: PhaseEncoding):

    write_json(
        path,
        {
            "layer_sizes": mlp.layer_sizes,
            "hidden_weights": mlp.hidden_weights,
            "hidden_biases": mlp.hidden_biases,
            "output_weights": mlp.output_weights,
            "output_biases": mlp.output_biases,
            "activation": mlp.activation,
            "use_biases": mlp.use_biases,
            "input_encoding_version": encoding.version,
            "encoding": encoding.dict(),
        },
    )


def read_model(path: str) -> Tuple[Mlp, PhaseEncoding]:

    data = read_json(path)
    version = data.get("input_encoding_version", None)
    if version != INPUT_ENCODING_VERSION:
        raise DataIntegrityError(
            msg=f"Model file '{path}' uses input encoding version {version}, this version supports {INPUT_ENCODING_VERSION}."
        )
    try:
        mlp = Mlp(
            layer_sizes=data["layer_sizes"],
            hidden_weights=data["hidden_weights"],
            hidden_biases=data["hidden_biases"],
            output_weights=data["output_weights"],
            output_biases=data["output_biases"],
            activation=data.get("activation", "tansig"),
            use_biases=data.get("use_biases", True),
        )
        encoding = PhaseEncoding(**data.get("encoding", {}))
    except (KeyError, TypeError, ValueError) as e:
        raise DataIntegrityError(msg=f"Invalid model file '{path}': {e}")
    return mlp, encoding


def write_trace(path: str, trace: TrainingTrace):

    import pandas as pd

    frame = pd.DataFrame(
        {"epoch": trace.epochs, "train_mse": trace.train_mse, "val_mse": trace.val_mse},
        columns=["epoch", "train_mse", "val_mse"],
    )
    write_frame(path, frame)


def write_run_config(path: str, config: Mapping[str, Any]):

    from ruamel.yaml import YAML

    yaml = YAML(typ="safe")
    yaml.default_flow_style = False
    _ensure_parent(path)
    with open(path, "w") as f:
        yaml.dump({k: config[k] for k in sorted(config)}, f)


def read_run_config(path: str) -> Mapping[str, Any]:

    from ruamel.yaml import YAML, YAMLError

    yaml = YAML(typ="safe")
    try:
        with open(path, "r") as f:
            data = yaml.load(f)
    except YAMLError as e:
        raise ConfigurationError(msg=f"Can't parse config file '{path}': {e}")
    if data is None:
        return {}
    if not isinstance(data, Mapping):
        raise ConfigurationError(
            msg=f"Config file '{path}' must contain a flat mapping of option names to values."
        )
    return dict(data)
