# -*- coding: utf-8 -*-

"""Forward pass, error, gradients and training for the perceptron phase synthesizer.

Networks are immutable [Mlp][kiara_plugin.beamsynth.models.neural.Mlp] models. The training loop works on the plain
array form ([MlpParams][kiara_plugin.beamsynth.models.neural.MlpParams]) and only converts back at the end.
"""
import math
from typing import Sequence, Tuple, Union

import numpy as np
import structlog

from kiara_plugin.beamsynth.defaults import (
    DEFAULT_LAYER_SIZES,
    DEFAULT_SEED,
    INIT_WEIGHT_RANGE,
)
from kiara_plugin.beamsynth.exceptions import (
    ConfigurationError,
    DimensionError,
    InvalidArgumentError,
    NumericalError,
    OutOfDomainError,
)
from kiara_plugin.beamsynth.models import Excitation
from kiara_plugin.beamsynth.models.dataset import SynthesisDataset
from kiara_plugin.beamsynth.models.neural import (
    Mlp,
    MlpParams,
    PhaseEncoding,
    SplitLabel,
    TrainingConfig,
    TrainingTrace,
)

logger = structlog.getLogger()


def create_mlp(
    layer_sizes: Sequence[int] = DEFAULT_LAYER_SIZES,
    seed: int = DEFAULT_SEED,
    use_biases: bool = True,
) -> Mlp:
    """A network with weights (and biases, if used) drawn uniformly from [-0.5, 0.5]."""

    n_in, n_hidden, n_out = (int(x) for x in layer_sizes)
    rng = np.random.default_rng(seed)
    low, high = -INIT_WEIGHT_RANGE, INIT_WEIGHT_RANGE

    w_hidden = rng.uniform(low, high, size=(n_in, n_hidden))
    b_hidden = rng.uniform(low, high, size=n_hidden)
    w_output = rng.uniform(low, high, size=(n_hidden, n_out))
    b_output = rng.uniform(low, high, size=n_out)
    if not use_biases:
        b_hidden = np.zeros(n_hidden)
        b_output = np.zeros(n_out)

    return Mlp.from_params(
        MlpParams(w_hidden, b_hidden, w_output, b_output), use_biases=use_biases
    )


def _as_batch(values, width: int, what: str) -> np.ndarray:

    arr = np.asarray(values, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2 or arr.shape[1] != width:
        raise DimensionError(
            msg=f"Network {what} must have {width} entries per pattern, got shape {np.shape(values)}."
        )
    return arr


def _forward(params: MlpParams, inputs: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:

    hidden = np.tanh(inputs @ params.w_hidden + params.b_hidden)
    outputs = np.tanh(hidden @ params.w_output + params.b_output)
    return hidden, outputs


def forward(mlp: Mlp, inputs) -> np.ndarray:
    """Network outputs for one input vector, or for a batch (one row per pattern)."""

    batch = _as_batch(inputs, mlp.n_inputs, "input")
    _, outputs = _forward(mlp.params, batch)
    if np.ndim(inputs) == 1:
        return outputs[0]
    return outputs


def _loss(params: MlpParams, inputs: np.ndarray, targets: np.ndarray) -> float:

    _, outputs = _forward(params, inputs)
    return float(0.5 * np.sum((outputs - targets) ** 2) / inputs.shape[0])


def _check_batch(mlp_or_params: Union[Mlp, MlpParams], inputs, targets):

    if np.size(inputs) == 0 or np.size(targets) == 0:
        raise InvalidArgumentError(msg="Pattern set is empty.")

    params = mlp_or_params.params if isinstance(mlp_or_params, Mlp) else mlp_or_params
    n_in = params.w_hidden.shape[0]
    n_out = params.w_output.shape[1]
    x = _as_batch(inputs, n_in, "input")
    t = _as_batch(targets, n_out, "target")
    if x.shape[0] != t.shape[0]:
        raise DimensionError(
            msg=f"Got {x.shape[0]} input patterns but {t.shape[0]} target patterns."
        )
    return params, x, t


def mse(mlp: Mlp, inputs, targets) -> float:
    """Half the summed squared output error, averaged over patterns."""

    params, x, t = _check_batch(mlp, inputs, targets)
    return _loss(params, x, t)


def loss_and_gradients(
    params: MlpParams, inputs: np.ndarray, targets: np.ndarray, use_biases: bool = True
) -> Tuple[float, MlpParams]:

    n_patterns = inputs.shape[0]
    hidden, outputs = _forward(params, inputs)
    error = outputs - targets
    loss = float(0.5 * np.sum(error**2) / n_patterns)

    delta_out = (error / n_patterns) * (1.0 - outputs**2)
    delta_hidden = (delta_out @ params.w_output.T) * (1.0 - hidden**2)

    grads = MlpParams(
        w_hidden=inputs.T @ delta_hidden,
        b_hidden=delta_hidden.sum(axis=0) if use_biases else np.zeros_like(params.b_hidden),
        w_output=hidden.T @ delta_out,
        b_output=delta_out.sum(axis=0) if use_biases else np.zeros_like(params.b_output),
    )
    return loss, grads


def _descend(params: MlpParams, grads: MlpParams, eta: float) -> MlpParams:
    return MlpParams(*(p - eta * g for p, g in zip(params, grads)))


def backprop_step(mlp: Mlp, inputs, targets, eta: float) -> Mlp:
    """One gradient-descent update over the whole batch; returns a new network."""

    if eta < 0.0:
        raise InvalidArgumentError(msg=f"Learning rate must not be negative: {eta}")
    params, x, t = _check_batch(mlp, inputs, targets)
    _, grads = loss_and_gradients(params, x, t, use_biases=mlp.use_biases)
    return Mlp.from_params(_descend(params, grads, eta), use_biases=mlp.use_biases)


def regression_fit(outputs: np.ndarray, targets: np.ndarray) -> Tuple[float, float, float]:
    """Least-squares line of outputs against targets: (slope, intercept, r)."""

    from scipy.stats import linregress

    result = linregress(np.ravel(targets), np.ravel(outputs))
    return float(result.slope), float(result.intercept), float(result.rvalue)


def train(
    mlp: Mlp, dataset: SynthesisDataset, config: TrainingConfig
) -> Tuple[Mlp, TrainingTrace]:
    """Full-batch gradient descent until the training error drops below the target or the epoch budget is spent.

    The network with the lowest validation error seen (the initial one included) is returned.
    """

    partitions = {}
    for label in SplitLabel:
        x, t = dataset.partition(label)
        if x.shape[0] == 0:
            raise ConfigurationError(
                msg=f"Can't train network: the '{label.value}' partition of the dataset is empty."
            )
        partitions[label] = (x, t)

    x_train, t_train = partitions[SplitLabel.train]
    x_val, t_val = partitions[SplitLabel.validation]
    x_test, t_test = partitions[SplitLabel.test]
    _check_batch(mlp, x_train, t_train)

    use_biases = mlp.use_biases
    params = mlp.params
    loss, grads = loss_and_gradients(params, x_train, t_train, use_biases=use_biases)
    val_loss = _loss(params, x_val, t_val)
    initial_loss, initial_val = loss, val_loss
    best_params, best_val, best_epoch = params, val_loss, 0

    logger.info(
        "train.start",
        patterns=x_train.shape[0],
        eta=config.eta,
        max_epochs=config.max_epochs,
        target_mse=config.target_mse,
        initial_mse=loss,
    )

    epochs, train_trace, val_trace = [], [], []
    epoch = 0
    while loss >= config.target_mse and epoch < config.max_epochs:
        params = _descend(params, grads, config.eta)
        epoch += 1
        loss, grads = loss_and_gradients(params, x_train, t_train, use_biases=use_biases)
        if not math.isfinite(loss):
            raise NumericalError(
                msg=f"Training diverged at epoch {epoch}: training error is {loss}. Try a smaller learning rate."
            )
        val_loss = _loss(params, x_val, t_val)
        epochs.append(epoch)
        train_trace.append(loss)
        val_trace.append(val_loss)
        if val_loss < best_val:
            best_params, best_val, best_epoch = params, val_loss, epoch
        if epoch % config.log_interval == 0:
            logger.info("train.progress", epoch=epoch, train_mse=loss, val_mse=val_loss)

    stop_reason = "target_mse" if loss < config.target_mse else "max_epochs"

    _, test_outputs = _forward(best_params, x_test)
    slope, intercept, r = regression_fit(test_outputs, t_test)
    trace = TrainingTrace(
        epochs=epochs,
        train_mse=train_trace,
        val_mse=val_trace,
        initial_train_mse=initial_loss,
        initial_val_mse=initial_val,
        final_train_mse=_loss(best_params, x_train, t_train),
        final_val_mse=best_val,
        final_test_mse=_loss(best_params, x_test, t_test),
        best_epoch=best_epoch,
        stop_reason=stop_reason,
        regression_slope=slope,
        regression_intercept=intercept,
        regression_r=r,
    )
    logger.info(
        "train.stop",
        reason=stop_reason,
        epochs=epoch,
        best_epoch=best_epoch,
        train_mse=trace.final_train_mse,
        test_mse=trace.final_test_mse,
    )
    return Mlp.from_params(best_params, use_biases=use_biases), trace


def predict_phase_vector(
    mlp: Mlp,
    steer_deg: float,
    encoding: Union[None, PhaseEncoding] = None,
    mirror_average: bool = True,
) -> np.ndarray:
    """Element phases in degrees, wrapped to (-180, 180], predicted for a steering direction.

    With ``mirror_average``, the network is also evaluated for the mirrored direction (180 - steer, which is the
    reversed input vector) and only the part of the output that flips sign under mirroring is kept.
    """

    from kiara_plugin.beamsynth.utils.dataset import decode_targets, encode_input

    if encoding is None:
        encoding = PhaseEncoding()
    if not encoding.in_range(steer_deg):
        low, high = encoding.steer_range_deg
        raise OutOfDomainError(
            msg=f"Steering direction {steer_deg} deg is outside the trained range [{low}, {high}]."
        )
    if mlp.n_inputs != encoding.n_inputs or mlp.n_outputs != encoding.geometry.n_elements:
        raise DimensionError(
            msg=f"Network with layer sizes {mlp.layer_sizes} doesn't fit the encoding ({encoding.n_inputs} inputs, {encoding.geometry.n_elements} elements)."
        )

    x = encode_input(steer_deg, encoding)
    y = forward(mlp, x)
    if mirror_average and encoding.is_mirror_symmetric:
        y = 0.5 * (y - forward(mlp, x[::-1]))

    return decode_targets(y, encoding)


def predict_phases(
    mlp: Mlp,
    steer_deg: float,
    encoding: Union[None, PhaseEncoding] = None,
    mirror_average: bool = True,
) -> Excitation:
    """Excitation with network-predicted phases and the Fourier taper of the desired beam as amplitudes."""

    from kiara_plugin.beamsynth.utils.synthesis import fourier_taper

    if encoding is None:
        encoding = PhaseEncoding()
    phases = predict_phase_vector(
        mlp, steer_deg, encoding=encoding, mirror_average=mirror_average
    )
    taper = fourier_taper(encoding.geometry, encoding.desired.steered_to(steer_deg))
    return Excitation.from_weights(taper * np.exp(1j * np.radians(phases)))
