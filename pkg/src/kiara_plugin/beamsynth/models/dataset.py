# -*- coding: utf-8 -*-

"""Models for the generated training data and for the bundled reference tables."""
from enum import Enum
from typing import List, Tuple, Union

import numpy as np
from pydantic import Field, root_validator, validator

from kiara.models import KiaraModel
from kiara_plugin.beamsynth.defaults import DEFAULT_SEED, DEFAULT_SPLIT
from kiara_plugin.beamsynth.models.neural import (
    PhaseEncoding,
    SplitLabel,
    TargetMode,
    validate_split_fractions,
)


class DatasetConfig(KiaraModel):

    _kiara_model_id: str = "beamsynth.dataset.config"

    class Config:
        allow_mutation = False

    seed: int = Field(description="Seed for the split shuffle.", default=DEFAULT_SEED)
    split: Tuple[float, float, float] = Field(
        description="Train, validation and test fractions.", default=DEFAULT_SPLIT
    )
    target_mode: TargetMode = Field(
        description="How phases are normalized into targets.",
        default=TargetMode.element_span,
    )

    _check_split = validator("split", allow_reuse=True)(validate_split_fractions)


class SynthesisDataset(KiaraModel):
    """Input/target pairs, one per steering direction, in ascending direction order."""

    _kiara_model_id: str = "beamsynth.dataset"

    class Config:
        allow_mutation = False

    encoding: PhaseEncoding = Field(description="The encoding the pairs were built with.")
    steer_deg: List[float] = Field(description="Steering direction of each pair.")
    inputs: List[List[float]] = Field(description="Network inputs, in [-1, 1].")
    targets: List[List[float]] = Field(description="Network targets.")
    phases_deg: List[List[float]] = Field(
        description="Element phases the targets encode, wrapped to (-180, 180]."
    )
    split: List[SplitLabel] = Field(description="Partition of each pair.")

    @root_validator(skip_on_failure=True)
    def _check_pairs(cls, values):

        n = len(values["steer_deg"])
        for key in ("inputs", "targets", "phases_deg", "split"):
            if len(values[key]) != n:
                raise ValueError(
                    f"Dataset field '{key}' has {len(values[key])} entries, expected {n}."
                )
        if n == 0:
            return values

        encoding: PhaseEncoding = values["encoding"]
        inputs = np.asarray(values["inputs"], dtype=float)
        targets = np.asarray(values["targets"], dtype=float)
        if inputs.shape != (n, encoding.n_inputs):
            raise ValueError(f"Inputs have shape {inputs.shape}, expected ({n}, {encoding.n_inputs}).")
        if targets.shape != (n, encoding.geometry.n_elements):
            raise ValueError(
                f"Targets have shape {targets.shape}, expected ({n}, {encoding.geometry.n_elements})."
            )
        if np.any(np.abs(inputs) > 1.0 + 1e-12):
            raise ValueError("Dataset inputs must lie within [-1, 1].")
        if np.any(np.abs(targets) > encoding.target_scale + 1e-12):
            raise ValueError(
                f"Dataset targets must lie within [-{encoding.target_scale}, {encoding.target_scale}]."
            )
        for steer in values["steer_deg"]:
            if not encoding.in_range(steer):
                raise ValueError(
                    f"Steering direction {steer} is outside the encoding range {encoding.steer_range_deg}."
                )
        return values

    @property
    def size(self) -> int:
        return len(self.steer_deg)

    def partition(self, label: Union[str, SplitLabel]) -> Tuple[np.ndarray, np.ndarray]:

        label = SplitLabel(label)
        idx = [i for i, x in enumerate(self.split) if x == label]
        n_in = self.encoding.n_inputs
        n_out = self.encoding.geometry.n_elements
        inputs = np.asarray([self.inputs[i] for i in idx], dtype=float).reshape(-1, n_in)
        targets = np.asarray([self.targets[i] for i in idx], dtype=float).reshape(-1, n_out)
        return inputs, targets

    def directions(self, label: Union[str, SplitLabel]) -> List[float]:

        label = SplitLabel(label)
        return [s for s, x in zip(self.steer_deg, self.split) if x == label]

    def label_counts(self) -> dict:
        return {label.value: self.split.count(label) for label in SplitLabel}


class ReferenceKind(str, Enum):

    fourier_amplitudes = "fourier_amplitudes"
    wwl_nn_phases = "wwl_nn_phases"


class ReferenceTable(KiaraModel):
    """A bundled reference table: one row per element (1-based), one column per steering direction."""

    _kiara_model_id: str = "beamsynth.reference.table"

    class Config:
        allow_mutation = False

    kind: ReferenceKind = Field(description="Which table this is.")
    columns_deg: List[float] = Field(description="Steering directions, ascending.")
    values: List[List[float]] = Field(
        description="Table values, one row per element (amplitudes, or phases in degrees)."
    )

    @property
    def n_elements(self) -> int:
        return len(self.values)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)

    def has_column(self, steer_deg: float) -> bool:
        return any(abs(c - steer_deg) < 1e-9 for c in self.columns_deg)

    def column(self, steer_deg: float) -> np.ndarray:

        for idx, c in enumerate(self.columns_deg):
            if abs(c - steer_deg) < 1e-9:
                return self.as_array()[:, idx]
        raise KeyError(steer_deg)

    def value(self, element: int, steer_deg: float) -> float:
        """Value for a 1-based element label."""
        return float(self.column(steer_deg)[element - 1])

    def column_sums(self) -> List[Tuple[float, float]]:

        sums = self.as_array().sum(axis=0)
        return [(c, float(s)) for c, s in zip(self.columns_deg, sums)]


class ReferenceReportRow(KiaraModel):

    _kiara_model_id: str = "beamsynth.reference.report_row"

    class Config:
        allow_mutation = False

    steer_deg: float = Field(description="Steering direction of the column.")
    status: str = Field(description="'ok', or 'skipped' if the table has no such column.")
    peak_deg: Union[None, float] = Field(description="Pattern peak direction.", default=None)
    sll_db: Union[None, float] = Field(description="Pattern sidelobe level.", default=None)
    hpbw_deg: Union[None, float] = Field(description="Half-power beamwidth.", default=None)


class ReferenceReport(KiaraModel):

    _kiara_model_id: str = "beamsynth.reference.report"

    class Config:
        allow_mutation = False

    kind: ReferenceKind = Field(description="The table that was checked.")
    rows: List[ReferenceReportRow] = Field(description="One row per checked direction.")

    def to_frame(self):

        import pandas as pd

        return pd.DataFrame(
            [row.dict() for row in self.rows],
            columns=["steer_deg", "status", "peak_deg", "sll_db", "hpbw_deg"],
        )
