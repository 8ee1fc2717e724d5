# -*- coding: utf-8 -*-
"""
Command-line interface for beamsynth.

Usage:
    beamsynth synth chebyshev --sll -30          # Dolph-Chebyshev weights, broadside
    beamsynth synth fourier --steer 60 -o out    # Fourier synthesis, files into 'out'
    beamsynth scan --method woodward-lawson      # 17 directions from 40 to 140 degrees
    beamsynth compare --steer 90                 # all classical methods side by side
    beamsynth dataset -o data                    # training data for the phase network
    beamsynth train -o model                     # train the phase network
    beamsynth infer --model model/model.json --steer 70
    beamsynth analyze --excitation out/excitation.json --steer 60
    beamsynth validate-ref                       # check the bundled reference tables

Every command prints its resolved configuration as the first line of its output (``# config {...}``), and writes it
to ``run_config.yaml`` when an output folder is given. Passing that file back in with ``--config`` reproduces the run.

Exit codes: 0 on success, 2 for invalid arguments or configurations, 1 for numeric or data failures.
"""
import logging
import os
import sys
from typing import Any, Callable, Dict, Iterable, List, Mapping, Union

import click
import structlog

from kiara_plugin.beamsynth import get_version
from kiara_plugin.beamsynth.defaults import (
    CONVERGENCE_MSE,
    DEFAULT_ETA,
    DEFAULT_FREQUENCY_HZ,
    DEFAULT_GRID_STEP_DEG,
    DEFAULT_MAX_EPOCHS,
    DEFAULT_N_BAR,
    DEFAULT_N_ELEMENTS,
    DEFAULT_ROLLOFF,
    DEFAULT_SEED,
    DEFAULT_SLL_DB,
    DEFAULT_SPACING_WL,
    DEFAULT_SPLIT,
    DEFAULT_STEER_DEG,
    DEFAULT_TARGET_MODE,
    DEFAULT_TARGET_MSE,
    DEFAULT_WIDTH_U,
    DIRECTION_PRESETS,
    RUN_CONFIG_FILE_NAME,
    SEED_ENV_VAR,
    SLL_GATE_DB,
    STEER_TOLERANCE_DEG,
    TARGET_MODES,
)
from kiara_plugin.beamsynth.exceptions import BeamsynthException

__all__ = [
    "cli",
]

SYNTHESIS_METHOD_NAMES = (
    "fourier",
    "woodward-lawson",
    "schelkunoff",
    "chebyshev",
    "taylor",
)
REFERENCE_KINDS = ("wwl_nn_phases", "fourier_amplitudes")


class RuntimeFailure(click.ClickException):

    exit_code = 1


class BeamsynthCommand(click.Command):
    """Maps package and validation errors to exit codes: 2 for usage problems, 1 for runtime failures."""

    def invoke(self, ctx: click.Context):

        from pydantic import ValidationError

        try:
            return super().invoke(ctx)
        except ValidationError as e:
            raise click.UsageError(str(e), ctx=ctx)
        except BeamsynthException as e:
            if e.exit_code == 2:
                raise click.UsageError(str(e), ctx=ctx)
            raise RuntimeFailure(str(e))


class BeamsynthGroup(click.Group):

    command_class = BeamsynthCommand


def configure_logging(verbosity: int):

    level = {0: logging.WARNING, 1: logging.INFO}.get(verbosity, logging.DEBUG)
    structlog.configure(
        processors=[
            structlog.processors.add_log_level,
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.dev.ConsoleRenderer(colors=False),
        ],
        wrapper_class=structlog.make_filtering_bound_logger(level),
        logger_factory=structlog.PrintLoggerFactory(file=sys.stderr),
        cache_logger_on_first_use=False,
    )


def _plain(value: Any) -> Any:

    if isinstance(value, (tuple, list)):
        return [_plain(x) for x in value]
    return value


def emit_config(ctx: click.Context) -> Mapping[str, Any]:
    """Print the resolved configuration line, and write ``run_config.yaml`` if the command has an output folder."""

    from kiara_plugin.beamsynth.utils.files import dumps_compact, write_run_config

    config = {k: _plain(v) for k, v in ctx.params.items()}
    click.echo(f"# config {dumps_compact({'command': ctx.info_name, **config})}")

    out = config.get("out", None)
    if out:
        os.makedirs(out, exist_ok=True)
        write_run_config(
            os.path.join(out, RUN_CONFIG_FILE_NAME), {"command": ctx.info_name, **config}
        )
    return config


def geometry_options(func: Callable) -> Callable:

    options = [
        click.option(
            "--n",
            "n_elements",
            type=int,
            default=DEFAULT_N_ELEMENTS,
            show_default=True,
            help="Number of array elements.",
        ),
        click.option(
            "--spacing",
            "spacing_wl",
            type=float,
            default=DEFAULT_SPACING_WL,
            show_default=True,
            help="Element spacing in wavelengths.",
        ),
        click.option(
            "--frequency",
            "frequency_hz",
            type=float,
            default=DEFAULT_FREQUENCY_HZ,
            show_default=True,
            help="Carrier frequency in Hz (only used for physical lengths).",
        ),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def grid_option(func: Callable) -> Callable:
    return click.option(
        "--grid-step",
        type=float,
        default=DEFAULT_GRID_STEP_DEG,
        show_default=True,
        help="Angle step (degrees) of the analysis grid.",
    )(func)


def out_option(func: Callable) -> Callable:
    return click.option(
        "--out",
        "-o",
        type=click.Path(file_okay=False),
        default=None,
        help="Output folder (no files are written if omitted).",
    )(func)


def beam_options(func: Callable) -> Callable:

    options = [
        click.option(
            "--width-u",
            type=float,
            default=DEFAULT_WIDTH_U,
            show_default=True,
            help="Desired sector width in u = cos(theta), at half magnitude.",
        ),
        click.option(
            "--shape",
            type=click.Choice(["raised-cosine", "sector"]),
            default="raised-cosine",
            show_default=True,
            help="Desired beam shape.",
        ),
        click.option(
            "--rolloff",
            type=float,
            default=DEFAULT_ROLLOFF,
            show_default=True,
            help="Raised-cosine edge width, as a fraction of the half-width.",
        ),
        click.option(
            "--constant-beamwidth/--fixed-width",
            default=True,
            show_default=True,
            help="Scale the sector width with sin(steer) to keep the angular width.",
        ),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def design_options(func: Callable) -> Callable:

    options = [
        click.option(
            "--sll",
            "sll_db",
            type=float,
            default=DEFAULT_SLL_DB,
            show_default=True,
            help="Design sidelobe level in dB (schelkunoff, chebyshev, taylor).",
        ),
        click.option(
            "--n-bar",
            type=int,
            default=DEFAULT_N_BAR,
            show_default=True,
            help="Near-in sidelobes held at the design level (taylor).",
        ),
        click.option(
            "--null",
            "nulls",
            type=float,
            multiple=True,
            help="Null direction in degrees (schelkunoff, repeatable).",
        ),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def seed_option(func: Callable) -> Callable:
    return click.option(
        "--seed",
        type=int,
        default=DEFAULT_SEED,
        show_default=True,
        envvar=SEED_ENV_VAR,
        help=f"Random seed (also read from ${SEED_ENV_VAR}).",
    )(func)


def dataset_options(func: Callable) -> Callable:

    options = [
        click.option(
            "--split",
            type=(float, float, float),
            default=DEFAULT_SPLIT,
            show_default=True,
            help="Train, validation and test fractions.",
        ),
        click.option(
            "--target-mode",
            type=click.Choice(list(TARGET_MODES)),
            default=DEFAULT_TARGET_MODE,
            show_default=True,
            help="How element phases are normalized into network targets.",
        ),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _geometry(params: Mapping[str, Any]):

    from kiara_plugin.beamsynth.models import ArrayGeometry

    return ArrayGeometry(
        n_elements=params["n_elements"],
        spacing_wl=params["spacing_wl"],
        frequency_hz=params["frequency_hz"],
    )


def _desired(params: Mapping[str, Any], **kwargs):

    from kiara_plugin.beamsynth.models import DesiredPattern

    return DesiredPattern(
        width_u=params["width_u"],
        shape=params["shape"],
        rolloff=params["rolloff"],
        constant_beamwidth=params["constant_beamwidth"],
        **kwargs,
    )


def _method_options(params: Mapping[str, Any]) -> Mapping[str, Any]:

    return {
        "steer_deg": params.get("steer_deg", None),
        "width_u": params["width_u"],
        "shape": params["shape"],
        "rolloff": params["rolloff"],
        "constant_beamwidth": params["constant_beamwidth"],
        "sll_db": params["sll_db"],
        "n_bar": params["n_bar"],
        "null_angles_deg": list(params["nulls"]) or None,
    }


def _directions(
    start: float, stop: float, step: float, preset: Union[None, str]
) -> List[float]:

    from kiara_plugin.beamsynth.utils import direction_range

    if preset:
        return list(DIRECTION_PRESETS[preset])
    if not 0.0 < start < 180.0 or not 0.0 < stop < 180.0:
        raise click.BadParameter(
            f"Directions must lie strictly between 0 and 180 degrees: {start} .. {stop}"
        )
    return direction_range(start, stop, step)


def direction_options(default_from: float, default_to: float, default_step: float):
    def decorator(func: Callable) -> Callable:

        options = [
            click.option(
                "--from",
                "steer_from",
                type=float,
                default=default_from,
                show_default=True,
                help="First steering direction in degrees.",
            ),
            click.option(
                "--to",
                "steer_to",
                type=float,
                default=default_to,
                show_default=True,
                help="Last steering direction in degrees.",
            ),
            click.option(
                "--step",
                "steer_step",
                type=float,
                default=default_step,
                show_default=True,
                help="Direction step in degrees.",
            ),
            click.option(
                "--preset",
                type=click.Choice(sorted(DIRECTION_PRESETS.keys())),
                default=None,
                help="Use a predefined direction set instead of --from/--to/--step.",
            ),
        ]
        for option in reversed(options):
            func = option(func)
        return func

    return decorator


def _out_path(out: Union[None, str], file_name: str) -> Union[None, str]:
    if not out:
        return None
    return os.path.join(out, file_name)


def scoped_default_map(
    values: Mapping[str, Any], commands: Iterable[str]
) -> Dict[str, Dict[str, Any]]:
    """Option defaults per subcommand; a recorded 'command' key limits them to the command that wrote the file."""

    values = dict(values)
    command = values.pop("command", None)
    if command is None:
        return {name: values for name in commands}
    if command not in commands:
        raise click.BadParameter(
            f"Config file was written by unknown command '{command}'.",
            param_hint="--config",
        )
    return {command: values}


@click.group(cls=BeamsynthGroup)
@click.version_option(version=get_version(), prog_name="beamsynth")
@click.option(
    "--config",
    "config_file",
    type=click.Path(exists=True, dir_okay=False),
    default=None,
    help="YAML file with option values (e.g. a 'run_config.yaml' written by an earlier run).",
)
@click.option(
    "--verbose", "-v", count=True, help="Log to stderr (-v: info, -vv: debug)."
)
@click.pass_context
def cli(ctx: click.Context, config_file: Union[None, str], verbose: int):
    """
    Phased-array pattern synthesis: classical methods and a trained phase network.

    Examples:

        beamsynth synth chebyshev --n 16 --sll -30

        beamsynth scan --method fourier --preset scan17 -o scan

        beamsynth train -o model && beamsynth infer --model model/model.json --steer 65
    """

    configure_logging(verbose)
    if config_file:
        from kiara_plugin.beamsynth.utils.files import read_run_config

        try:
            values = read_run_config(config_file)
        except BeamsynthException as e:
            raise click.BadParameter(str(e), param_hint="--config")
        ctx.default_map = scoped_default_map(values, ctx.command.commands)  # type: ignore


@cli.command()
@click.argument("method", type=click.Choice(SYNTHESIS_METHOD_NAMES))
@geometry_options
@click.option(
    "--steer",
    "steer_deg",
    type=float,
    default=DEFAULT_STEER_DEG,
    show_default=True,
    help="Main-beam direction in degrees.",
)
@beam_options
@design_options
@grid_option
@out_option
@click.pass_context
def synth(ctx: click.Context, method: str, **kwargs):
    """
    Synthesize element weights with a classical method, and analyze the pattern.

    Writes 'excitation.json' and 'pattern.csv' (plus 'samples.csv' for
    woodward-lawson) into the output folder.
    """

    from kiara_plugin.beamsynth.models import AngleGrid
    from kiara_plugin.beamsynth.utils.array import array_factor, pattern_metrics
    from kiara_plugin.beamsynth.utils.files import (
        write_excitation,
        write_pattern,
        write_samples,
    )
    from kiara_plugin.beamsynth.utils.synthesis import (
        create_synthesis_method,
        woodward_lawson,
    )

    params = emit_config(ctx)
    geometry = _geometry(params)
    grid = AngleGrid.create(step_deg=params["grid_step"])

    synthesis = create_synthesis_method(method, _method_options(params))
    sample_set = None
    if method == "woodward-lawson":
        excitation, sample_set = woodward_lawson(geometry, synthesis.desired)  # type: ignore
    else:
        excitation = synthesis.synthesize(geometry)
    pattern = array_factor(geometry, excitation, grid)
    metrics = pattern_metrics(pattern)

    out = params["out"]
    if out:
        write_excitation(_out_path(out, "excitation.json"), geometry, excitation)  # type: ignore
        write_pattern(_out_path(out, "pattern.csv"), pattern)  # type: ignore
        if sample_set is not None:
            write_samples(_out_path(out, "samples.csv"), sample_set)  # type: ignore

    click.echo(metrics.format_line(method))


@cli.command()
@click.option(
    "--method",
    type=click.Choice(SYNTHESIS_METHOD_NAMES),
    default="fourier",
    show_default=True,
    help="Synthesis method.",
)
@direction_options(40.0, 140.0, 6.25)
@geometry_options
@beam_options
@design_options
@grid_option
@out_option
@click.pass_context
def scan(ctx: click.Context, **kwargs):
    """
    Synthesize and analyze one pattern per steering direction.

    Writes 'scan.csv' (steer_deg, peak_deg, sll_db, hpbw_deg) and one
    'patterns/pattern_<steer>.csv' per direction into the output folder.
    """

    import pandas as pd

    from kiara_plugin.beamsynth.models import AngleGrid
    from kiara_plugin.beamsynth.utils.files import write_frame, write_pattern
    from kiara_plugin.beamsynth.utils.synthesis import scan_directions

    params = emit_config(ctx)
    directions = _directions(
        params["steer_from"], params["steer_to"], params["steer_step"], params["preset"]
    )
    geometry = _geometry(params)
    grid = AngleGrid.create(step_deg=params["grid_step"])

    results = scan_directions(
        params["method"], geometry, directions, options=_method_options(params), grid=grid
    )

    rows = []
    for steer, _, pattern, metrics in results:
        rows.append({"steer_deg": steer, **metrics.as_row()})
        click.echo(f"steer={steer:.3f} {metrics.format_line(params['method'])}")
        if params["out"]:
            write_pattern(
                os.path.join(params["out"], "patterns", f"pattern_{steer:g}.csv"), pattern
            )

    if params["out"]:
        frame = pd.DataFrame(rows, columns=["steer_deg", "peak_deg", "sll_db", "hpbw_deg"])
        write_frame(os.path.join(params["out"], "scan.csv"), frame)


@cli.command()
@geometry_options
@click.option(
    "--steer",
    "steer_deg",
    type=float,
    default=DEFAULT_STEER_DEG,
    show_default=True,
    help="Main-beam direction in degrees.",
)
@beam_options
@design_options
@grid_option
@out_option
@click.pass_context
def compare(ctx: click.Context, **kwargs):
    """
    Run all classical methods for the same array and direction.

    Writes 'comparison.csv' (method, peak_deg, sll_db, hpbw_deg) into the
    output folder.
    """

    from kiara_plugin.beamsynth.models import AngleGrid, ChebyshevSpec, TaylorSpec
    from kiara_plugin.beamsynth.utils.files import write_frame
    from kiara_plugin.beamsynth.utils.synthesis import compare_methods

    params = emit_config(ctx)
    geometry = _geometry(params)
    desired = _desired(params, steer_deg=params["steer_deg"])
    table = compare_methods(
        geometry,
        desired,
        chebyshev=ChebyshevSpec(sll_db=params["sll_db"]),
        taylor=TaylorSpec(sll_db=params["sll_db"], n_bar=params["n_bar"]),
        grid=AngleGrid.create(step_deg=params["grid_step"]),
    )
    for row in table.rows:
        click.echo(row.metrics.format_line(row.method))

    if params["out"]:
        write_frame(os.path.join(params["out"], "comparison.csv"), table.to_frame())


def _build_dataset(params: Mapping[str, Any]):

    from kiara_plugin.beamsynth.models.dataset import DatasetConfig
    from kiara_plugin.beamsynth.utils.dataset import generate

    directions = _directions(
        params["steer_from"], params["steer_to"], params["steer_step"], params["preset"]
    )
    config = DatasetConfig(
        seed=params["seed"], split=params["split"], target_mode=params["target_mode"]
    )
    return generate(_geometry(params), directions, config, desired=_desired(params))


@cli.command()
@direction_options(40.0, 140.0, 1.0)
@geometry_options
@beam_options
@seed_option
@dataset_options
@out_option
@click.pass_context
def dataset(ctx: click.Context, **kwargs):
    """
    Generate the training data for the phase network.

    Writes 'dataset.csv' (steer_deg, split, in_1.., tgt_1..) into the output
    folder.
    """

    from kiara_plugin.beamsynth.utils.files import write_dataset

    params = emit_config(ctx)
    data = _build_dataset(params)
    counts = data.label_counts()
    click.echo(
        f"pairs={data.size} train={counts['train']} validation={counts['validation']} test={counts['test']}"
    )
    if params["out"]:
        write_dataset(os.path.join(params["out"], "dataset.csv"), data)


@cli.command()
@click.option(
    "--dataset",
    "dataset_file",
    type=click.Path(exists=True, dir_okay=False),
    default=None,
    help="A dataset file written by 'beamsynth dataset' (generated on the fly if omitted).",
)
@direction_options(40.0, 140.0, 1.0)
@geometry_options
@beam_options
@seed_option
@dataset_options
@click.option("--eta", type=float, default=DEFAULT_ETA, show_default=True, help="Learning rate.")
@click.option(
    "--epochs",
    "max_epochs",
    type=int,
    default=DEFAULT_MAX_EPOCHS,
    show_default=True,
    help="Maximum number of full-batch updates.",
)
@click.option(
    "--target-mse",
    type=float,
    default=DEFAULT_TARGET_MSE,
    show_default=True,
    help="Stop once the training error drops below this.",
)
@click.option("--hidden", "hidden_units", type=int, default=30, show_default=True, help="Hidden units.")
@click.option("--biases/--no-biases", "use_biases", default=True, show_default=True, help="Train biases.")
@click.option(
    "--out-model",
    type=click.Path(dir_okay=False),
    default=None,
    help="Model file path (defaults to 'model.json' in the output folder).",
)
@out_option
@click.pass_context
def train(ctx: click.Context, **kwargs):
    """
    Train the phase network with full-batch backpropagation.

    Writes 'model.json' and 'trace.csv' (epoch, train_mse, val_mse) into the
    output folder.
    """

    from kiara_plugin.beamsynth.models.neural import PhaseEncoding, TrainingConfig
    from kiara_plugin.beamsynth.utils.files import read_dataset, write_model, write_trace
    from kiara_plugin.beamsynth.utils.neural import create_mlp
    from kiara_plugin.beamsynth.utils.neural import train as train_mlp

    params = emit_config(ctx)
    if params["dataset_file"]:
        encoding = PhaseEncoding(
            geometry=_geometry(params),
            desired=_desired(params),
            target_mode=params["target_mode"],
        )
        data = read_dataset(params["dataset_file"], encoding)
    else:
        data = _build_dataset(params)

    config = TrainingConfig(
        eta=params["eta"],
        max_epochs=params["max_epochs"],
        target_mse=params["target_mse"],
        seed=params["seed"],
        split=params["split"],
        hidden_units=params["hidden_units"],
        use_biases=params["use_biases"],
    )
    encoding = data.encoding
    mlp = create_mlp(
        (encoding.n_inputs, config.hidden_units, encoding.geometry.n_elements),
        seed=config.seed,
        use_biases=config.use_biases,
    )
    mlp, trace = train_mlp(mlp, data, config)
    converged = trace.first_epoch_below(CONVERGENCE_MSE)

    click.echo(
        f"epochs={trace.epochs_run} best_epoch={trace.best_epoch} stop={trace.stop_reason} "
        f"train_mse={trace.final_train_mse:.6g} val_mse={trace.final_val_mse:.6g} test_mse={trace.final_test_mse:.6g} "
        f"slope={trace.regression_slope:.4f} intercept={trace.regression_intercept:.4f} r={trace.regression_r:.4f} "
        f"converged_epoch={'none' if converged is None else converged}"
    )

    model_path = params["out_model"] or _out_path(params["out"], "model.json")
    if model_path:
        write_model(model_path, mlp, encoding)
    if params["out"]:
        write_trace(os.path.join(params["out"], "trace.csv"), trace)


@cli.command()
@click.option(
    "--model",
    "model_file",
    type=click.Path(exists=True, dir_okay=False),
    required=True,
    help="A model file written by 'beamsynth train'.",
)
@click.option(
    "--steer",
    "steer_deg",
    type=float,
    default=DEFAULT_STEER_DEG,
    show_default=True,
    help="Requested main-beam direction in degrees.",
)
@click.option(
    "--mirror-average/--no-mirror-average",
    default=True,
    show_default=True,
    help="Average with the prediction for the mirrored direction.",
)
@click.option(
    "--gate/--no-gate",
    default=True,
    show_default=True,
    help=f"Fail unless the peak is within {STEER_TOLERANCE_DEG} deg of the request and the sidelobe level is below {SLL_GATE_DB} dB.",
)
@grid_option
@out_option
@click.pass_context
def infer(ctx: click.Context, **kwargs):
    """
    Predict element phases for a steering direction with a trained network.

    Writes 'excitation.json' and 'pattern.csv' into the output folder.
    """

    from kiara_plugin.beamsynth.models import AngleGrid
    from kiara_plugin.beamsynth.utils.array import array_factor, pattern_metrics
    from kiara_plugin.beamsynth.utils.files import (
        read_model,
        write_excitation,
        write_pattern,
    )
    from kiara_plugin.beamsynth.utils.neural import predict_phases

    params = emit_config(ctx)
    mlp, encoding = read_model(params["model_file"])
    steer = params["steer_deg"]
    excitation = predict_phases(
        mlp, steer, encoding=encoding, mirror_average=params["mirror_average"]
    )
    pattern = array_factor(
        encoding.geometry, excitation, AngleGrid.create(step_deg=params["grid_step"])
    )
    metrics = pattern_metrics(pattern)

    if params["out"]:
        write_excitation(
            os.path.join(params["out"], "excitation.json"), encoding.geometry, excitation
        )
        write_pattern(os.path.join(params["out"], "pattern.csv"), pattern)

    click.echo(metrics.format_line("nn"))

    if params["gate"]:
        if abs(metrics.peak_deg - steer) > STEER_TOLERANCE_DEG:
            raise RuntimeFailure(
                f"Peak at {metrics.peak_deg:.3f} deg is more than {STEER_TOLERANCE_DEG} deg away from the requested {steer} deg."
            )
        if metrics.sll_db is not None and metrics.sll_db > SLL_GATE_DB:
            raise RuntimeFailure(
                f"Sidelobe level {metrics.sll_db:.3f} dB is above {SLL_GATE_DB} dB."
            )


@cli.command()
@click.option(
    "--excitation",
    "excitation_file",
    type=click.Path(exists=True, dir_okay=False),
    required=True,
    help="An excitation file written by 'beamsynth synth' or 'beamsynth infer'.",
)
@click.option(
    "--steer",
    "steer_deg",
    type=float,
    default=None,
    help="Add a progressive phase that moves a broadside beam to this direction (degrees).",
)
@grid_option
@out_option
@click.pass_context
def analyze(ctx: click.Context, **kwargs):
    """
    Compute the pattern of a stored excitation, optionally steered.

    Writes 'pattern.csv' (and the steered 'excitation.json' if --steer is
    given) into the output folder.
    """

    from kiara_plugin.beamsynth.models import AngleGrid
    from kiara_plugin.beamsynth.utils.array import (
        apply_steering,
        array_factor,
        pattern_metrics,
    )
    from kiara_plugin.beamsynth.utils.files import (
        read_excitation,
        write_excitation,
        write_pattern,
    )

    params = emit_config(ctx)
    geometry, excitation = read_excitation(params["excitation_file"])
    if params["steer_deg"] is not None:
        excitation = apply_steering(geometry, excitation, params["steer_deg"])

    pattern = array_factor(
        geometry, excitation, AngleGrid.create(step_deg=params["grid_step"])
    )
    metrics = pattern_metrics(pattern)

    out = params["out"]
    if out:
        write_pattern(os.path.join(out, "pattern.csv"), pattern)
        if params["steer_deg"] is not None:
            write_excitation(os.path.join(out, "excitation.json"), geometry, excitation)

    click.echo(metrics.format_line("file"))


@cli.command("validate-ref")
@click.option(
    "--kind",
    type=click.Choice([*REFERENCE_KINDS, "all"]),
    default="all",
    show_default=True,
    help="Which reference table to check.",
)
@grid_option
@out_option
@click.pass_context
def validate_ref(ctx: click.Context, **kwargs):
    """
    Verify the bundled reference tables and analyze the patterns they produce.

    Writes 'reference_report.csv' into the output folder.
    """

    import pandas as pd

    from kiara_plugin.beamsynth.models import AngleGrid, ArrayGeometry
    from kiara_plugin.beamsynth.utils.dataset import (
        load_reference,
        validate_reference_against_pipeline,
    )
    from kiara_plugin.beamsynth.utils.files import write_frame

    params = emit_config(ctx)
    kinds = REFERENCE_KINDS if params["kind"] == "all" else (params["kind"],)
    grid = AngleGrid.create(step_deg=params["grid_step"])

    frames = []
    for kind in kinds:
        table = load_reference(kind)
        for steer, total in table.column_sums():
            if table.kind.value == "fourier_amplitudes":
                click.echo(f"table={kind} steer={steer:g} column_sum={total:.4f}")
        report = validate_reference_against_pipeline(
            table, ArrayGeometry(n_elements=table.n_elements), grid=grid
        )
        for row in report.rows:
            if row.status != "ok":
                click.echo(f"table={kind} steer={row.steer_deg:g} status={row.status}")
                continue
            sll = "none" if row.sll_db is None else f"{row.sll_db:.3f}"
            click.echo(
                f"table={kind} steer={row.steer_deg:g} status=ok peak={row.peak_deg:.3f} sll={sll} hpbw={row.hpbw_deg:.3f}"
            )
        frame = report.to_frame()
        frame.insert(0, "table", kind)
        frames.append(frame)

    if params["out"]:
        write_frame(
            os.path.join(params["out"], "reference_report.csv"),
            pd.concat(frames, ignore_index=True),
        )


if __name__ == "__main__":
    cli()
