# -*- coding: utf-8 -*-
import hashlib
import math
import os
from typing import Dict, Iterable, List, Tuple, Union

import numpy as np
import structlog

from kiara_plugin.beamsynth.defaults import (
    NN_SELECTED_DIRECTIONS,
    REFERENCE_TABLES_FOLDER,
)
from kiara_plugin.beamsynth.exceptions import (
    BeamsynthException,
    ConfigurationError,
    DataIntegrityError,
    InvalidArgumentError,
)
from kiara_plugin.beamsynth.models import (
    AngleGrid,
    ArrayGeometry,
    DesiredPattern,
    Excitation,
)
from kiara_plugin.beamsynth.models.dataset import (
    DatasetConfig,
    ReferenceKind,
    ReferenceReport,
    ReferenceReportRow,
    ReferenceTable,
    SynthesisDataset,
)
from kiara_plugin.beamsynth.models.neural import PhaseEncoding, SplitLabel, TargetMode
from kiara_plugin.beamsynth.utils import wrap_phase_deg

logger = structlog.getLogger()

MIRROR_PHASE_TOLERANCE_DEG = 6.0


def encode_input(steer_deg: float, encoding: Union[None, PhaseEncoding] = None) -> np.ndarray:
    """Desired-beam magnitude at the encoding's sample angles, mapped from [0, 1] to [-1, 1]."""

    if encoding is None:
        encoding = PhaseEncoding()
    if not encoding.in_range(steer_deg):
        low, high = encoding.steer_range_deg
        raise InvalidArgumentError(
            msg=f"Can't encode steering direction {steer_deg} deg: outside [{low}, {high}]."
        )

    desired = encoding.desired.steered_to(steer_deg)
    return 2.0 * desired.at_angles(encoding.input_angles()) - 1.0


def pipeline_phases(geometry: ArrayGeometry, steer_deg: float) -> np.ndarray:
    """Unwrapped progressive phases in degrees, relative to the array midpoint."""

    kd_deg = math.degrees(geometry.kd)
    return -geometry.centered_indices() * kd_deg * math.cos(math.radians(steer_deg))


def _phase_spans(encoding: PhaseEncoding) -> np.ndarray:
    return np.abs(encoding.geometry.centered_indices()) * math.degrees(
        encoding.geometry.kd
    )


def encode_targets(phases_deg: np.ndarray, encoding: PhaseEncoding) -> np.ndarray:

    phases = np.asarray(phases_deg, dtype=float)
    scale = encoding.target_scale
    if encoding.target_mode == TargetMode.wrapped:
        return scale * wrap_phase_deg(phases) / 180.0

    spans = _phase_spans(encoding)
    safe = np.where(spans > 0.0, spans, 1.0)
    return np.where(spans > 0.0, scale * phases / safe, 0.0)


def decode_targets(targets: np.ndarray, encoding: PhaseEncoding) -> np.ndarray:
    """Phases in degrees, wrapped to (-180, 180], for network outputs or targets."""

    values = np.asarray(targets, dtype=float) / encoding.target_scale
    if encoding.target_mode == TargetMode.wrapped:
        return wrap_phase_deg(values * 180.0)
    return wrap_phase_deg(values * _phase_spans(encoding))


def split_labels(
    directions: List[float], fractions: Tuple[float, float, float], seed: int
) -> List[SplitLabel]:
    """Assign train/validation/test labels.

    Validation and test get floor(fraction * n) pairs each, training the rest. The smallest and largest direction and
    broadside (if present) always go to training; the others are shuffled with the seed before assignment.
    """

    n = len(directions)
    n_val = int(math.floor(fractions[1] * n + 1e-9))
    n_test = int(math.floor(fractions[2] * n + 1e-9))

    pinned = {int(np.argmin(directions)), int(np.argmax(directions))}
    pinned.update(i for i, d in enumerate(directions) if abs(d - 90.0) < 1e-9)
    free = [i for i in range(n) if i not in pinned]
    if n_val + n_test > len(free):
        raise ConfigurationError(
            msg=f"Can't split {n} directions into {n_val} validation and {n_test} test pairs: only {len(free)} directions are not reserved for training."
        )

    rng = np.random.default_rng(seed)
    order = [free[i] for i in rng.permutation(len(free))]
    labels = [SplitLabel.train] * n
    for i in order[:n_val]:
        labels[i] = SplitLabel.validation
    for i in order[n_val : n_val + n_test]:
        labels[i] = SplitLabel.test
    return labels


def generate(
    geometry: ArrayGeometry,
    directions: Iterable[float],
    config: Union[None, DatasetConfig] = None,
    desired: Union[None, DesiredPattern] = None,
) -> SynthesisDataset:
    """Input/target pairs for the given steering directions, in ascending order."""

    if config is None:
        config = DatasetConfig()
    if desired is None:
        desired = DesiredPattern()

    steer = sorted({float(d) for d in directions})
    if not steer:
        raise InvalidArgumentError(msg="Can't generate dataset: no steering directions given.")

    encoding = PhaseEncoding(
        geometry=geometry, desired=desired, target_mode=config.target_mode
    )
    for direction in steer:
        if not encoding.in_range(direction):
            low, high = encoding.steer_range_deg
            raise InvalidArgumentError(
                msg=f"Steering direction {direction} deg is outside the dataset range [{low}, {high}]."
            )

    inputs, targets, phases = [], [], []
    for direction in steer:
        raw = pipeline_phases(geometry, direction)
        inputs.append(encode_input(direction, encoding).tolist())
        targets.append(encode_targets(raw, encoding).tolist())
        phases.append(wrap_phase_deg(raw).tolist())

    labels = split_labels(steer, config.split, config.seed)
    logger.debug("dataset.generated", pairs=len(steer), seed=config.seed)
    return SynthesisDataset(
        encoding=encoding,
        steer_deg=steer,
        inputs=inputs,
        targets=targets,
        phases_deg=phases,
        split=labels,
    )


def _read_manifest(folder: str) -> Dict[str, Dict[str, str]]:

    import orjson

    path = os.path.join(folder, "manifest.json")
    if not os.path.isfile(path):
        raise DataIntegrityError(msg=f"Reference manifest missing: {path}")
    with open(path, "rb") as f:
        return orjson.loads(f.read())


def _parse_labels(labels: List[str], n_elements: int) -> List[List[int]]:

    rows = []
    for label in labels:
        try:
            rows.append([int(x) for x in str(label).split("&")])
        except ValueError:
            raise DataIntegrityError(msg=f"Invalid element label in reference table: '{label}'")

    covered = sorted(e for row in rows for e in row)
    if covered != list(range(1, n_elements + 1)):
        raise DataIntegrityError(
            msg=f"Reference table rows don't cover elements 1..{n_elements} exactly once."
        )
    return rows


def _check_mirror_invariants(table: ReferenceTable):

    values = table.as_array()
    columns = table.columns_deg
    for idx, steer in enumerate(columns):
        if not table.has_column(180.0 - steer):
            continue
        mirror = table.column(180.0 - steer)
        if table.kind == ReferenceKind.fourier_amplitudes:
            if not np.array_equal(values[:, idx], mirror):
                raise DataIntegrityError(
                    msg=f"Reference amplitudes for {steer} deg and {180.0 - steer} deg differ."
                )
            if not np.array_equal(values[:, idx], values[::-1, idx]):
                raise DataIntegrityError(
                    msg=f"Reference amplitudes for {steer} deg are not symmetric about the array center."
                )
        else:
            deviation = np.abs(wrap_phase_deg(values[:, idx] + mirror))
            if np.any(deviation > MIRROR_PHASE_TOLERANCE_DEG):
                element = int(np.argmax(deviation)) + 1
                raise DataIntegrityError(
                    msg=f"Reference phases for {steer} deg and {180.0 - steer} deg are not mirror-antisymmetric (element {element} deviates by {deviation.max():.3f} deg)."
                )


def load_reference(
    kind: Union[str, ReferenceKind],
    n_elements: int = 16,
    reference_folder: Union[None, str] = None,
) -> ReferenceTable:
    """Load a bundled reference table, verifying its checksum and its symmetry invariants."""

    import pandas as pd

    kind = ReferenceKind(kind)
    if reference_folder is None:
        reference_folder = REFERENCE_TABLES_FOLDER

    manifest = _read_manifest(reference_folder)
    if kind.value not in manifest:
        raise DataIntegrityError(msg=f"Reference manifest has no entry for '{kind.value}'.")
    entry = manifest[kind.value]
    path = os.path.join(reference_folder, entry["file"])
    if not os.path.isfile(path):
        raise DataIntegrityError(msg=f"Reference table missing: {path}")

    with open(path, "rb") as f:
        digest = hashlib.sha256(f.read()).hexdigest()
    if digest != entry["sha256"]:
        raise DataIntegrityError(
            msg=f"Checksum mismatch for reference table '{kind.value}': {digest} != {entry['sha256']}"
        )

    df = pd.read_csv(path, dtype={"element": str})
    columns = [float(c) for c in df.columns[1:]]
    rows = _parse_labels(df["element"].tolist(), n_elements)

    values = np.zeros((n_elements, len(columns)))
    data = df.iloc[:, 1:].to_numpy(dtype=float)
    for elements, row in zip(rows, data):
        for element in elements:
            values[element - 1] = row

    table = ReferenceTable(kind=kind, columns_deg=columns, values=values.tolist())
    _check_mirror_invariants(table)
    return table


def validate_reference_against_pipeline(
    table: ReferenceTable,
    geometry: ArrayGeometry,
    desired: Union[None, DesiredPattern] = None,
    directions: Union[None, Iterable[float]] = None,
    grid: Union[None, AngleGrid] = None,
) -> ReferenceReport:
    """Pattern peak, sidelobe level and beamwidth for the table's excitations, per direction.

    Phase tables are paired with the Fourier taper of the desired beam; amplitude tables with the midpoint-referenced
    progressive phase. Directions the table has no column for are reported as 'skipped'. The report is informational:
    analysis failures are recorded in the row status instead of raised.
    """

    from kiara_plugin.beamsynth.utils.array import array_factor, pattern_metrics
    from kiara_plugin.beamsynth.utils.synthesis import fourier_taper

    if desired is None:
        desired = DesiredPattern()
    if grid is None:
        grid = AngleGrid.create()
    if directions is None:
        directions = sorted(set(NN_SELECTED_DIRECTIONS) | {90.0} | set(table.columns_deg))

    rows = []
    for steer in directions:
        if not table.has_column(steer):
            rows.append(ReferenceReportRow(steer_deg=steer, status="skipped"))
            continue

        column = table.column(steer)
        try:
            if table.kind == ReferenceKind.wwl_nn_phases:
                taper = fourier_taper(geometry, desired.steered_to(steer))
                weights = taper * np.exp(1j * np.radians(column))
            else:
                weights = column * np.exp(1j * np.radians(pipeline_phases(geometry, steer)))
            excitation = Excitation.from_weights(weights)
            metrics = pattern_metrics(array_factor(geometry, excitation, grid))
        except BeamsynthException as e:
            rows.append(ReferenceReportRow(steer_deg=steer, status=f"error: {e}"))
            continue

        rows.append(
            ReferenceReportRow(
                steer_deg=steer,
                status="ok",
                peak_deg=metrics.peak_deg,
                sll_db=metrics.sll_db,
                hpbw_deg=metrics.hpbw_deg,
            )
        )

    return ReferenceReport(kind=table.kind, rows=rows)
