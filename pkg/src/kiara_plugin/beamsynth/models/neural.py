# -*- coding: utf-8 -*-

"""Models for the perceptron phase synthesizer: the network itself, how steering directions are encoded for it, and
how it is trained."""
import math
from enum import Enum
from typing import List, NamedTuple, Tuple, Union

import numpy as np
from pydantic import Field, root_validator, validator

from kiara.models import KiaraModel
from kiara_plugin.beamsynth.defaults import (
    DEFAULT_ETA,
    DEFAULT_LAYER_SIZES,
    DEFAULT_LOG_INTERVAL,
    DEFAULT_MAX_EPOCHS,
    DEFAULT_SEED,
    DEFAULT_SPLIT,
    DEFAULT_TARGET_MSE,
    INPUT_ENCODING_VERSION,
    STEER_RANGE_DEG,
    TARGET_SCALE,
)
from kiara_plugin.beamsynth.models import ArrayGeometry, DesiredPattern


class MlpParams(NamedTuple):
    """Network parameters as arrays: (inputs x hidden), (hidden,), (hidden x outputs), (outputs,)."""

    w_hidden: np.ndarray
    b_hidden: np.ndarray
    w_output: np.ndarray
    b_output: np.ndarray


class Mlp(KiaraModel):
    """A single-hidden-layer perceptron with tan-sigmoid activations on both layers."""

    _kiara_model_id: str = "beamsynth.neural.mlp"

    class Config:
        allow_mutation = False

    layer_sizes: List[int] = Field(
        description="Number of input, hidden and output units.",
        default_factory=lambda: list(DEFAULT_LAYER_SIZES),
    )
    hidden_weights: List[List[float]] = Field(
        description="Input-to-hidden weights, one row per input unit."
    )
    hidden_biases: List[float] = Field(description="Hidden unit biases.")
    output_weights: List[List[float]] = Field(
        description="Hidden-to-output weights, one row per hidden unit."
    )
    output_biases: List[float] = Field(description="Output unit biases.")
    activation: str = Field(description="Activation function name.", default="tansig")
    use_biases: bool = Field(
        description="Whether biases take part in training.", default=True
    )

    @validator("layer_sizes")
    def _check_layer_sizes(cls, v):

        if len(v) != 3 or min(v) < 1:
            raise ValueError(
                f"Layer sizes must be three positive integers (input, hidden, output): {v}"
            )
        return v

    @validator("activation")
    def _check_activation(cls, v):

        if v != "tansig":
            raise ValueError(f"Unsupported activation '{v}', only 'tansig' is available.")
        return v

    @root_validator(skip_on_failure=True)
    def _check_shapes(cls, values):

        n_in, n_hidden, n_out = values["layer_sizes"]
        expected = {
            "hidden_weights": (n_in, n_hidden),
            "hidden_biases": (n_hidden,),
            "output_weights": (n_hidden, n_out),
            "output_biases": (n_out,),
        }
        for key, shape in expected.items():
            arr = np.asarray(values[key], dtype=float)
            if arr.shape != shape:
                raise ValueError(
                    f"Field '{key}' has shape {arr.shape}, expected {shape} for layer sizes {values['layer_sizes']}."
                )
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"Field '{key}' contains non-finite values.")
        return values

    @classmethod
    def from_params(cls, params: MlpParams, use_biases: bool = True) -> "Mlp":

        n_in, n_hidden = params.w_hidden.shape
        n_out = params.w_output.shape[1]
        return cls(
            layer_sizes=[n_in, n_hidden, n_out],
            hidden_weights=params.w_hidden.tolist(),
            hidden_biases=params.b_hidden.tolist(),
            output_weights=params.w_output.tolist(),
            output_biases=params.b_output.tolist(),
            use_biases=use_biases,
        )

    @property
    def params(self) -> MlpParams:
        return MlpParams(
            w_hidden=np.asarray(self.hidden_weights, dtype=float),
            b_hidden=np.asarray(self.hidden_biases, dtype=float),
            w_output=np.asarray(self.output_weights, dtype=float),
            b_output=np.asarray(self.output_biases, dtype=float),
        )

    @property
    def n_inputs(self) -> int:
        return self.layer_sizes[0]

    @property
    def n_outputs(self) -> int:
        return self.layer_sizes[2]


class TargetMode(str, Enum):

    element_span = "element-span"
    wrapped = "wrapped"


class PhaseEncoding(KiaraModel):
    """How steering directions map to network inputs, and element phases to network targets.

    Inputs are the desired beam magnitude, sampled at ``n_inputs`` angles spanning ``steer_range_deg`` and mapped to
    [-1, 1]. Targets are the element phases relative to the array midpoint, scaled into [-target_scale, target_scale]:
    either per element by that element's full phase span ('element-span'), or wrapped to (-180, 180] and divided by
    180 ('wrapped').
    """

    _kiara_model_id: str = "beamsynth.neural.encoding"

    class Config:
        allow_mutation = False

    version: int = Field(
        description="Input encoding version.", default=INPUT_ENCODING_VERSION
    )
    geometry: ArrayGeometry = Field(
        description="The array the phases are for.", default_factory=ArrayGeometry
    )
    desired: DesiredPattern = Field(
        description="Desired-beam template, its steering angle is replaced per direction.",
        default_factory=DesiredPattern,
    )
    n_inputs: int = Field(
        description="Number of input sample angles.",
        default=DEFAULT_LAYER_SIZES[0],
        ge=2,
    )
    steer_range_deg: Tuple[float, float] = Field(
        description="Steering range covered by the encoding (and the training data).",
        default=STEER_RANGE_DEG,
    )
    target_mode: TargetMode = Field(
        description="How phases are normalized into targets.",
        default=TargetMode.element_span,
    )
    target_scale: float = Field(
        description="Largest target magnitude.", default=TARGET_SCALE, gt=0.0, lt=1.0
    )

    @validator("steer_range_deg")
    def _check_range(cls, v):

        low, high = v
        if not 0.0 < low < high < 180.0:
            raise ValueError(f"Invalid steering range: {v}")
        return v

    def input_angles(self) -> np.ndarray:
        low, high = self.steer_range_deg
        return np.linspace(low, high, self.n_inputs)

    def in_range(self, steer_deg: float) -> bool:
        low, high = self.steer_range_deg
        return low - 1e-9 <= steer_deg <= high + 1e-9

    @property
    def is_mirror_symmetric(self) -> bool:
        """Whether the input angles are symmetric about broadside."""

        low, high = self.steer_range_deg
        return math.isclose(low + high, 180.0, abs_tol=1e-9)


class SplitLabel(str, Enum):

    train = "train"
    validation = "validation"
    test = "test"


def validate_split_fractions(v):

    if len(v) != 3 or min(v) <= 0.0 or not math.isclose(sum(v), 1.0, abs_tol=1e-9):
        raise ValueError(
            f"Split fractions must be three positive numbers summing to 1: {v}"
        )
    return v


class TrainingConfig(KiaraModel):

    _kiara_model_id: str = "beamsynth.neural.training_config"

    class Config:
        allow_mutation = False

    eta: float = Field(description="Learning rate.", default=DEFAULT_ETA, gt=0.0)
    max_epochs: int = Field(
        description="Maximum number of full-batch updates.",
        default=DEFAULT_MAX_EPOCHS,
        ge=0,
    )
    target_mse: float = Field(
        description="Stop once the training error drops below this.",
        default=DEFAULT_TARGET_MSE,
    )
    seed: int = Field(description="Seed for weight initialization.", default=DEFAULT_SEED)
    split: Tuple[float, float, float] = Field(
        description="Train, validation and test fractions.", default=DEFAULT_SPLIT
    )
    hidden_units: int = Field(
        description="Number of hidden units.", default=DEFAULT_LAYER_SIZES[1], ge=1
    )
    use_biases: bool = Field(description="Train biases.", default=True)
    log_interval: int = Field(
        description="Epochs between progress log events.",
        default=DEFAULT_LOG_INTERVAL,
        ge=1,
    )

    _check_split = validator("split", allow_reuse=True)(validate_split_fractions)


class TrainingTrace(KiaraModel):
    """Per-epoch errors of a training run, plus the test-set diagnostics of the returned network."""

    _kiara_model_id: str = "beamsynth.neural.training_trace"

    class Config:
        allow_mutation = False

    epochs: List[int] = Field(description="Epoch numbers (1-based).", default_factory=list)
    train_mse: List[float] = Field(
        description="Training error after each epoch.", default_factory=list
    )
    val_mse: List[float] = Field(
        description="Validation error after each epoch.", default_factory=list
    )
    initial_train_mse: float = Field(description="Training error before the first update.")
    initial_val_mse: float = Field(description="Validation error before the first update.")
    final_train_mse: float = Field(description="Training error of the returned network.")
    final_val_mse: float = Field(description="Validation error of the returned network.")
    final_test_mse: float = Field(description="Test error of the returned network.")
    best_epoch: int = Field(
        description="Epoch of the returned (best validation) network, 0 for the initial weights."
    )
    stop_reason: str = Field(description="'target_mse' or 'max_epochs'.")
    regression_slope: float = Field(
        description="Slope of test outputs against test targets."
    )
    regression_intercept: float = Field(description="Intercept of the same fit.")
    regression_r: float = Field(description="Correlation coefficient of the same fit.")

    @property
    def epochs_run(self) -> int:
        return len(self.epochs)

    def first_epoch_below(self, threshold: float) -> Union[None, int]:

        for epoch, value in zip(self.epochs, self.train_mse):
            if value < threshold:
                return epoch
        return None
