# -*- coding: utf-8 -*-

"""This module contains the array, pattern and synthesis-input models used in the ``kiara_plugin.beamsynth`` package.

All models are immutable *kiara* models (pydantic under the hood). Numeric work never happens on the list fields
directly: each model exposes numpy views (``weights``, ``theta``, ``af_complex``, ...) that the functions in
``kiara_plugin.beamsynth.utils`` operate on.
"""
import math
from enum import Enum
from typing import Any, Iterable, List, Mapping, Tuple, Union

import numpy as np
from pydantic import Field, root_validator, validator

from kiara.models import KiaraModel
from kiara_plugin.beamsynth.defaults import (
    DEFAULT_FREQUENCY_HZ,
    DEFAULT_GRID_START_DEG,
    DEFAULT_GRID_STEP_DEG,
    DEFAULT_GRID_STOP_DEG,
    DEFAULT_N_BAR,
    DEFAULT_N_ELEMENTS,
    DEFAULT_ROLLOFF,
    DEFAULT_SLL_DB,
    DEFAULT_SPACING_WL,
    DEFAULT_STEER_DEG,
    DEFAULT_WIDTH_U,
    MAX_DESIGN_SLL_DB,
    SPEED_OF_LIGHT,
)
from kiara_plugin.beamsynth.exceptions import DimensionError, InvalidArgumentError


class ArrayGeometry(KiaraModel):
    """A uniform linear array of isotropic elements, placed along the z axis."""

    _kiara_model_id: str = "beamsynth.array.geometry"

    class Config:
        allow_mutation = False

    n_elements: int = Field(
        description="The number of array elements.", default=DEFAULT_N_ELEMENTS, ge=2
    )
    spacing_wl: float = Field(
        description="The element spacing, in wavelengths.",
        default=DEFAULT_SPACING_WL,
        gt=0.0,
    )
    frequency_hz: float = Field(
        description="The carrier frequency, only used to derive physical lengths.",
        default=DEFAULT_FREQUENCY_HZ,
        gt=0.0,
    )

    @property
    def kd(self) -> float:
        return 2.0 * math.pi * self.spacing_wl

    @property
    def wavelength_m(self) -> float:
        return SPEED_OF_LIGHT / self.frequency_hz

    @property
    def spacing_m(self) -> float:
        return self.spacing_wl * self.wavelength_m

    @property
    def wavenumber(self) -> float:
        return 2.0 * math.pi / self.wavelength_m

    @property
    def aperture_wl(self) -> float:
        return self.n_elements * self.spacing_wl

    @property
    def is_half_wave(self) -> bool:
        return math.isclose(self.spacing_wl, 0.5, rel_tol=0.0, abs_tol=1e-12)

    def element_indices(self) -> np.ndarray:
        return np.arange(self.n_elements, dtype=float)

    def centered_indices(self) -> np.ndarray:
        """Element indices relative to the array midpoint, e.g. -7.5 .. 7.5 for 16 elements."""
        return self.element_indices() - (self.n_elements - 1) / 2.0


class Excitation(KiaraModel):
    """Complex weights, one per array element (element 0 first)."""

    _kiara_model_id: str = "beamsynth.array.excitation"

    class Config:
        allow_mutation = False

    weights_re: List[float] = Field(description="Real parts of the element weights.")
    weights_im: List[float] = Field(
        description="Imaginary parts of the element weights."
    )

    @root_validator(skip_on_failure=True)
    def _check_weights(cls, values):

        re = values["weights_re"]
        im = values["weights_im"]
        if len(re) != len(im):
            raise ValueError(
                f"Real and imaginary parts differ in length: {len(re)} != {len(im)}."
            )
        if not re:
            raise ValueError("An excitation needs at least one element weight.")
        if not (np.all(np.isfinite(re)) and np.all(np.isfinite(im))):
            raise ValueError("Element weights must be finite.")
        return values

    @classmethod
    def from_weights(cls, weights: Iterable[complex]) -> "Excitation":

        w = np.asarray(weights, dtype=complex).ravel()
        return cls(weights_re=w.real.tolist(), weights_im=w.imag.tolist())

    @classmethod
    def from_polar(
        cls, amplitudes: Iterable[float], phases_deg: Iterable[float]
    ) -> "Excitation":

        amps = np.asarray(list(amplitudes), dtype=float)
        phases = np.asarray(list(phases_deg), dtype=float)
        if amps.shape != phases.shape:
            raise DimensionError(
                msg=f"Can't create excitation: {amps.size} amplitudes but {phases.size} phases."
            )
        return cls.from_weights(amps * np.exp(1j * np.radians(phases)))

    @classmethod
    def uniform(cls, n_elements: int) -> "Excitation":
        return cls.from_weights(np.ones(n_elements, dtype=complex))

    @property
    def weights(self) -> np.ndarray:
        return np.asarray(self.weights_re, dtype=float) + 1j * np.asarray(
            self.weights_im, dtype=float
        )

    @property
    def n_elements(self) -> int:
        return len(self.weights_re)

    @property
    def amplitudes(self) -> np.ndarray:
        return np.abs(self.weights)

    @property
    def phases_deg(self) -> np.ndarray:
        return np.degrees(np.angle(self.weights))

    def scaled(self, factor: complex) -> "Excitation":
        return Excitation.from_weights(self.weights * factor)

    def check_geometry(self, geometry: ArrayGeometry):

        if self.n_elements != geometry.n_elements:
            raise DimensionError(
                msg=f"Excitation has {self.n_elements} weights, but the array has {geometry.n_elements} elements."
            )


class AngleGrid(KiaraModel):
    """Polar angles (degrees from the array axis, broadside is 90) a pattern is sampled at."""

    _kiara_model_id: str = "beamsynth.array.angle_grid"

    class Config:
        allow_mutation = False

    theta_deg: List[float] = Field(
        description="Strictly increasing polar angles in degrees, within [0, 180]."
    )

    @validator("theta_deg")
    def _check_angles(cls, v):

        arr = np.asarray(v, dtype=float)
        if arr.size == 0:
            return v
        if arr.min() < 0.0 or arr.max() > 180.0:
            raise ValueError("Grid angles must lie within [0, 180] degrees.")
        if arr.size > 1 and np.any(np.diff(arr) <= 0.0):
            raise ValueError("Grid angles must be strictly increasing.")
        return v

    @classmethod
    def create(
        cls,
        start_deg: float = DEFAULT_GRID_START_DEG,
        stop_deg: float = DEFAULT_GRID_STOP_DEG,
        step_deg: float = DEFAULT_GRID_STEP_DEG,
    ) -> "AngleGrid":

        if step_deg <= 0.0:
            raise InvalidArgumentError(msg=f"Grid step must be positive: {step_deg}")
        span = stop_deg - start_deg
        n_steps = int(math.floor(span / step_deg + 1e-9))
        if math.isclose(n_steps * step_deg, span, rel_tol=0.0, abs_tol=1e-9):
            theta = np.linspace(start_deg, stop_deg, n_steps + 1)
        else:
            theta = start_deg + step_deg * np.arange(n_steps + 1)
        return cls(theta_deg=theta.tolist())

    @property
    def theta(self) -> np.ndarray:
        return np.asarray(self.theta_deg, dtype=float)

    @property
    def u(self) -> np.ndarray:
        return np.cos(np.radians(self.theta))

    @property
    def size(self) -> int:
        return len(self.theta_deg)


class Pattern(KiaraModel):
    """Array-factor samples over an angle grid, with the magnitude normalized to a 0 dB peak."""

    _kiara_model_id: str = "beamsynth.array.pattern"

    class Config:
        allow_mutation = False

    grid: AngleGrid = Field(description="The angles the pattern was sampled at.")
    af_re: List[float] = Field(description="Real part of the array factor.")
    af_im: List[float] = Field(description="Imaginary part of the array factor.")
    af_db: List[float] = Field(
        description="Normalized magnitude in dB (peak is 0, -inf for exact zeros)."
    )

    @root_validator(skip_on_failure=True)
    def _check_lengths(cls, values):

        n = values["grid"].size
        for key in ("af_re", "af_im", "af_db"):
            if len(values[key]) != n:
                raise ValueError(
                    f"Pattern field '{key}' has {len(values[key])} entries, grid has {n}."
                )
        return values

    @classmethod
    def from_complex(cls, grid: AngleGrid, af: np.ndarray) -> "Pattern":

        af = np.asarray(af, dtype=complex)
        magnitude = np.abs(af)
        peak = magnitude.max() if magnitude.size else 0.0
        if peak > 0.0:
            with np.errstate(divide="ignore"):
                af_db = 20.0 * np.log10(magnitude / peak)
        else:
            af_db = np.full(magnitude.shape, -np.inf)

        return cls(
            grid=grid,
            af_re=af.real.tolist(),
            af_im=af.imag.tolist(),
            af_db=af_db.tolist(),
        )

    @property
    def af_complex(self) -> np.ndarray:
        return np.asarray(self.af_re, dtype=float) + 1j * np.asarray(
            self.af_im, dtype=float
        )

    @property
    def magnitude(self) -> np.ndarray:
        return np.abs(self.af_complex)

    @property
    def db(self) -> np.ndarray:
        return np.asarray(self.af_db, dtype=float)

    @property
    def theta(self) -> np.ndarray:
        return self.grid.theta


class PatternMetrics(KiaraModel):

    _kiara_model_id: str = "beamsynth.array.pattern_metrics"

    class Config:
        allow_mutation = False

    peak_deg: float = Field(description="Angle of the global maximum.")
    sll_db: Union[None, float] = Field(
        description="Highest sidelobe relative to the peak, 'None' if the pattern has no sidelobe.",
        default=None,
    )
    hpbw_deg: float = Field(description="Half-power (-3 dB) beamwidth.", gt=0.0)
    null_depths_db: List[Tuple[float, float]] = Field(
        description="(angle, level) for every local minimum.", default_factory=list
    )
    sidelobe_peaks: List[Tuple[float, float]] = Field(
        description="(angle, level) for every local maximum outside the main lobe.",
        default_factory=list,
    )

    def format_line(self, method: str) -> str:

        sll = "none" if self.sll_db is None else f"{self.sll_db:.3f}"
        return f"method={method} peak={self.peak_deg:.3f} sll={sll} hpbw={self.hpbw_deg:.3f}"

    def as_row(self) -> Mapping[str, Any]:
        return {
            "peak_deg": self.peak_deg,
            "sll_db": self.sll_db,
            "hpbw_deg": self.hpbw_deg,
        }


class BeamShape(str, Enum):

    sector = "sector"
    raised_cosine = "raised-cosine"


class DesiredPattern(KiaraModel):
    """A desired main beam: a sector in u = cos(theta) around the steering direction.

    ``width_u`` is the full width at half magnitude. With ``constant_beamwidth`` enabled (the default), the width is
    defined at broadside and shrinks by sin(steer) when scanning, so the beam keeps its angular width.
    """

    _kiara_model_id: str = "beamsynth.synthesis.desired_pattern"

    class Config:
        allow_mutation = False

    steer_deg: float = Field(
        description="Main-beam direction in degrees.",
        default=DEFAULT_STEER_DEG,
        gt=0.0,
        lt=180.0,
    )
    width_u: float = Field(
        description="Full sector width in u-space, at half magnitude.",
        default=DEFAULT_WIDTH_U,
        gt=0.0,
        le=2.0,
    )
    shape: BeamShape = Field(
        description="Flat sector, or a sector with raised-cosine edges.",
        default=BeamShape.raised_cosine,
    )
    rolloff: float = Field(
        description="Fraction of the half-width used by each raised-cosine edge.",
        default=DEFAULT_ROLLOFF,
        ge=0.0,
        le=1.0,
    )
    constant_beamwidth: bool = Field(
        description="Scale the sector width with sin(steer).", default=True
    )

    @property
    def u0(self) -> float:
        return math.cos(math.radians(self.steer_deg))

    @property
    def effective_width_u(self) -> float:
        if self.constant_beamwidth:
            return self.width_u * math.sin(math.radians(self.steer_deg))
        return self.width_u

    def profile(self, offset_u) -> np.ndarray:
        """Magnitude as a function of the distance from the beam center, in u."""

        x = np.abs(np.asarray(offset_u, dtype=float))
        half = self.effective_width_u / 2.0
        if self.shape == BeamShape.sector or self.rolloff == 0.0:
            return np.where(x <= half * (1.0 + 1e-12), 1.0, 0.0)

        inner = half * (1.0 - self.rolloff)
        outer = half * (1.0 + self.rolloff)
        edge = 0.5 * (1.0 + np.cos(np.pi * (x - inner) / (outer - inner)))
        return np.where(x <= inner, 1.0, np.where(x < outer, edge, 0.0))

    def magnitude(self, u) -> np.ndarray:
        return self.profile(np.asarray(u, dtype=float) - self.u0)

    def at_angles(self, theta_deg) -> np.ndarray:
        return self.magnitude(np.cos(np.radians(np.asarray(theta_deg, dtype=float))))

    def steered_to(self, steer_deg: float) -> "DesiredPattern":
        return self.copy(update={"steer_deg": steer_deg})


class SampleParity(str, Enum):

    odd = "odd"
    even = "even"


class WlSample(KiaraModel):

    _kiara_model_id: str = "beamsynth.synthesis.wl_sample"

    class Config:
        allow_mutation = False

    m: int = Field(description="Sample index (zero only for odd parity).")
    theta_deg: float = Field(description="Sample direction.")
    u: float = Field(description="cos(theta) of the sample direction.")
    b: float = Field(description="Desired magnitude at the sample direction.")


class WlSampleSet(KiaraModel):
    """The orthogonal sample directions a Woodward-Lawson synthesis is built from."""

    _kiara_model_id: str = "beamsynth.synthesis.wl_sample_set"

    class Config:
        allow_mutation = False

    samples: List[WlSample] = Field(description="The samples, in construction order.")
    parity: SampleParity = Field(
        description="'odd': u = m * lambda / L (includes m = 0); 'even': half-integer multiples."
    )
    m_range: int = Field(description="Largest |m| in the set.", ge=0)

    @property
    def theta(self) -> np.ndarray:
        return np.asarray([s.theta_deg for s in self.samples], dtype=float)

    @property
    def u(self) -> np.ndarray:
        return np.asarray([s.u for s in self.samples], dtype=float)

    @property
    def b(self) -> np.ndarray:
        return np.asarray([s.b for s in self.samples], dtype=float)

    def with_values(self, b: Iterable[float]) -> "WlSampleSet":
        """Same directions, different sample values."""

        values = list(b)
        if len(values) != len(self.samples):
            raise DimensionError(
                msg=f"Expected {len(self.samples)} sample values, got {len(values)}."
            )
        samples = [s.copy(update={"b": float(v)}) for s, v in zip(self.samples, values)]
        return self.copy(update={"samples": samples})


class ChebyshevSpec(KiaraModel):

    _kiara_model_id: str = "beamsynth.synthesis.chebyshev_spec"

    class Config:
        allow_mutation = False

    sll_db: float = Field(
        description="Design sidelobe level (dB, negative).",
        default=DEFAULT_SLL_DB,
        le=MAX_DESIGN_SLL_DB,
    )


class TaylorSpec(KiaraModel):

    _kiara_model_id: str = "beamsynth.synthesis.taylor_spec"

    class Config:
        allow_mutation = False

    sll_db: float = Field(
        description="Design level of the near-in sidelobes (dB, negative).",
        default=DEFAULT_SLL_DB,
        le=MAX_DESIGN_SLL_DB,
    )
    n_bar: int = Field(
        description="Number of near-in sidelobes held at the design level.",
        default=DEFAULT_N_BAR,
        ge=2,
    )


class MethodMetrics(KiaraModel):

    _kiara_model_id: str = "beamsynth.synthesis.method_metrics"

    class Config:
        allow_mutation = False

    method: str = Field(description="The synthesis method name.")
    metrics: PatternMetrics = Field(description="Metrics of the synthesized pattern.")


class ComparisonTable(KiaraModel):

    _kiara_model_id: str = "beamsynth.synthesis.comparison"

    class Config:
        allow_mutation = False

    rows: List[MethodMetrics] = Field(description="One row per synthesis method.")

    def to_frame(self):

        import pandas as pd

        return pd.DataFrame(
            [{"method": row.method, **row.metrics.as_row()} for row in self.rows],
            columns=["method", "peak_deg", "sll_db", "hpbw_deg"],
        )
