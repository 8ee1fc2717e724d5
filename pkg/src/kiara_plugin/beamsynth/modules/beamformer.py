# -*- coding: utf-8 -*-
from typing import Any, Dict

from pydantic import Field

from kiara.models.module import KiaraModuleConfig
from kiara.models.values.value import ValueMap
from kiara.modules import ValueMapSchema
from kiara_plugin.beamsynth.defaults import (
    DEFAULT_ETA,
    DEFAULT_MAX_EPOCHS,
    DEFAULT_SEED,
    DEFAULT_STEER_DEG,
    DEFAULT_TARGET_MODE,
    DEFAULT_TARGET_MSE,
    DEFAULT_TRAINING_DIRECTIONS,
    TARGET_MODES,
)
from kiara_plugin.beamsynth.modules import BeamsynthModule, geometry_inputs, model_data


def _dataset_inputs() -> Dict[str, Dict[str, Any]]:

    return {
        "directions": {
            "type": "list",
            "doc": "Steering directions in degrees (defaults to 40 to 140 in 1 degree steps).",
            "optional": True,
        },
        "seed": {
            "type": "integer",
            "doc": "Seed for the train/validation/test split (and the initial weights, when training).",
            "default": DEFAULT_SEED,
        },
        "target_mode": {
            "type": "string",
            "type_config": {"allowed_strings": list(TARGET_MODES)},
            "doc": "How element phases are normalized into network targets.",
            "default": DEFAULT_TARGET_MODE,
        },
    }


class BeamformerModule(BeamsynthModule):

    _module_type_name: str = None  # type: ignore

    def _dataset(self, inputs: ValueMap):

        from kiara_plugin.beamsynth.models import ArrayGeometry
        from kiara_plugin.beamsynth.models.dataset import DatasetConfig
        from kiara_plugin.beamsynth.utils.dataset import generate

        directions = inputs.get_value_data("directions")
        if directions is None:
            directions = DEFAULT_TRAINING_DIRECTIONS
        else:
            directions = [float(x) for x in directions.list_data]

        geometry = ArrayGeometry(
            n_elements=inputs.get_value_data("n_elements"),
            spacing_wl=inputs.get_value_data("spacing_wl"),
        )
        config = DatasetConfig(
            seed=inputs.get_value_data("seed"),
            target_mode=inputs.get_value_data("target_mode"),
        )
        return generate(geometry, directions, config)


class GenerateDatasetModule(BeamformerModule):
    """Build the input/target pairs a phase-synthesis network is trained on, with their train/validation/test split."""

    _module_type_name = "beamsynth.dataset.generate"

    def create_inputs_schema(
        self,
    ) -> ValueMapSchema:

        result = geometry_inputs()
        result.pop("grid_step")
        result.update(_dataset_inputs())
        return result

    def create_outputs_schema(
        self,
    ) -> ValueMapSchema:

        return {"dataset": {"type": "dict", "doc": "The generated dataset."}}

    def run(self, inputs: ValueMap, outputs: ValueMap):

        dataset = self._dataset(inputs)
        outputs.set_value("dataset", model_data(dataset))


class TrainBeamformerConfig(KiaraModuleConfig):

    hidden_units: int = Field(description="Number of hidden units.", default=30)
    use_biases: bool = Field(description="Whether to train biases.", default=True)


class TrainBeamformerModule(BeamformerModule):
    """Train the perceptron phase synthesizer with full-batch backpropagation.

    The returned network is the one with the lowest validation error seen during training.
    """

    _module_type_name = "beamsynth.beamformer.train"
    _config_cls = TrainBeamformerConfig

    def create_inputs_schema(
        self,
    ) -> ValueMapSchema:

        result = geometry_inputs()
        result.pop("grid_step")
        result.update(_dataset_inputs())
        result.update(
            {
                "eta": {
                    "type": "float",
                    "doc": "Learning rate.",
                    "default": DEFAULT_ETA,
                },
                "max_epochs": {
                    "type": "integer",
                    "doc": "Maximum number of full-batch updates.",
                    "default": DEFAULT_MAX_EPOCHS,
                },
                "target_mse": {
                    "type": "float",
                    "doc": "Stop once the training error drops below this.",
                    "default": DEFAULT_TARGET_MSE,
                },
            }
        )
        return result

    def create_outputs_schema(
        self,
    ) -> ValueMapSchema:

        return {
            "model": {
                "type": "dict",
                "doc": "The trained network ('mlp') and its input encoding ('encoding').",
            },
            "training_summary": {
                "type": "dict",
                "doc": "Final errors, stop reason and test-set regression of the training run.",
            },
        }

    def run(self, inputs: ValueMap, outputs: ValueMap):

        from kiara_plugin.beamsynth.models.neural import TrainingConfig
        from kiara_plugin.beamsynth.utils.neural import create_mlp, train

        dataset = self._dataset(inputs)
        config = TrainingConfig(
            eta=inputs.get_value_data("eta"),
            max_epochs=inputs.get_value_data("max_epochs"),
            target_mse=inputs.get_value_data("target_mse"),
            seed=inputs.get_value_data("seed"),
            hidden_units=self.get_config_value("hidden_units"),
            use_biases=self.get_config_value("use_biases"),
        )
        encoding = dataset.encoding
        mlp = create_mlp(
            (encoding.n_inputs, config.hidden_units, encoding.geometry.n_elements),
            seed=config.seed,
            use_biases=config.use_biases,
        )
        mlp, trace = train(mlp, dataset, config)

        summary = model_data(trace)
        for key in ("epochs", "train_mse", "val_mse"):
            summary.pop(key)
        summary["epochs_run"] = trace.epochs_run
        outputs.set_value(
            "model", {"mlp": model_data(mlp), "encoding": model_data(encoding)}
        )
        outputs.set_value("training_summary", summary)


class InferBeamformerModule(BeamformerModule):
    """Predict element phases for a steering direction with a trained network, and analyze the resulting pattern."""

    _module_type_name = "beamsynth.beamformer.infer"

    def create_inputs_schema(
        self,
    ) -> ValueMapSchema:

        return {
            "model": {
                "type": "dict",
                "doc": "A trained network, as returned by 'beamsynth.beamformer.train'.",
            },
            "steer_deg": {
                "type": "float",
                "doc": "The requested main-beam direction in degrees.",
                "default": DEFAULT_STEER_DEG,
            },
            "mirror_average": {
                "type": "boolean",
                "doc": "Average the prediction with the one for the mirrored direction.",
                "default": True,
            },
            "grid_step": geometry_inputs()["grid_step"],
        }

    def create_outputs_schema(
        self,
    ) -> ValueMapSchema:

        return {
            "excitation": {"type": "dict", "doc": "The predicted element weights."},
            "metrics": {
                "type": "dict",
                "doc": "Peak direction, sidelobe level and half-power beamwidth.",
            },
        }

    def run(self, inputs: ValueMap, outputs: ValueMap):

        from kiara_plugin.beamsynth.models import AngleGrid
        from kiara_plugin.beamsynth.models.neural import Mlp, PhaseEncoding
        from kiara_plugin.beamsynth.utils.array import array_factor, pattern_metrics
        from kiara_plugin.beamsynth.utils.neural import predict_phases

        model = inputs.get_value_data("model").dict_data
        mlp = Mlp(**model["mlp"])
        encoding = PhaseEncoding(**model["encoding"])
        steer_deg = inputs.get_value_data("steer_deg")

        excitation = predict_phases(
            mlp,
            steer_deg,
            encoding=encoding,
            mirror_average=inputs.get_value_data("mirror_average"),
        )
        grid = AngleGrid.create(step_deg=inputs.get_value_data("grid_step"))
        metrics = pattern_metrics(array_factor(encoding.geometry, excitation, grid))

        outputs.set_value("excitation", model_data(excitation))
        outputs.set_value("metrics", model_data(metrics))


class ValidateReferenceModule(BeamsynthModule):
    """Check a bundled reference table (checksum and symmetry) and analyze the patterns its excitations produce."""

    _module_type_name = "beamsynth.reference.validate"

    def create_inputs_schema(
        self,
    ) -> ValueMapSchema:

        from kiara_plugin.beamsynth.models.dataset import ReferenceKind

        allowed = [x.value for x in ReferenceKind]
        return {
            "kind": {
                "type": "string",
                "type_config": {"allowed_strings": allowed},
                "doc": "The reference table to validate. Allowed: {}".format(
                    ", ".join(allowed)
                ),
                "default": "wwl_nn_phases",
            },
            "grid_step": geometry_inputs()["grid_step"],
        }

    def create_outputs_schema(
        self,
    ) -> ValueMapSchema:

        return {
            "report": {
                "type": "dict",
                "doc": "One row per steering direction, under the 'rows' key.",
            }
        }

    def run(self, inputs: ValueMap, outputs: ValueMap):

        from kiara_plugin.beamsynth.models import AngleGrid, ArrayGeometry
        from kiara_plugin.beamsynth.utils.dataset import (
            load_reference,
            validate_reference_against_pipeline,
        )

        table = load_reference(inputs.get_value_data("kind"))
        grid = AngleGrid.create(step_deg=inputs.get_value_data("grid_step"))
        report = validate_reference_against_pipeline(
            table, ArrayGeometry(n_elements=table.n_elements), grid=grid
        )
        outputs.set_value("report", model_data(report))
