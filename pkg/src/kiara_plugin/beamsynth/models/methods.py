# -*- coding: utf-8 -*-

"""Classical synthesis methods, as *kiara* models.

Each method is registered with *kiara*'s model registry under the id ``beamsynth.method.<name>``, its fields are the
method's configuration. Modules and the command-line interface look methods up by name (see
[get_synthesis_method_cls][kiara_plugin.beamsynth.utils.synthesis.get_synthesis_method_cls]) and build them from a flat
option mapping with ``from_options``.
"""
from abc import abstractmethod
from typing import Any, Dict, List, Mapping, Union

from pydantic import Field

from kiara.models import KiaraModel
from kiara_plugin.beamsynth.defaults import (
    DEFAULT_SLL_DB,
    DEFAULT_STEER_DEG,
    FOURIER_QUADRATURE_NODES,
)
from kiara_plugin.beamsynth.models import (
    ArrayGeometry,
    ChebyshevSpec,
    DesiredPattern,
    Excitation,
    TaylorSpec,
)

DESIRED_PATTERN_OPTIONS = (
    "steer_deg",
    "width_u",
    "shape",
    "rolloff",
    "constant_beamwidth",
)


def _pick(options: Mapping[str, Any], keys) -> Dict[str, Any]:
    return {k: options[k] for k in keys if options.get(k, None) is not None}


class SynthesisMethod(KiaraModel):

    _kiara_model_id: str = None  # type: ignore

    class Config:
        allow_mutation = False

    @classmethod
    @abstractmethod
    def from_options(cls, options: Mapping[str, Any]) -> "SynthesisMethod":
        pass

    @abstractmethod
    def synthesize(self, geometry: ArrayGeometry) -> Excitation:
        pass


class FourierMethod(SynthesisMethod):
    """Fourier-series weights of the desired pattern (half-wave spacing only)."""

    _kiara_model_id: str = "beamsynth.method.fourier"

    desired: DesiredPattern = Field(
        description="The desired beam.", default_factory=DesiredPattern
    )
    quadrature_nodes: int = Field(
        description="Number of trapezoid intervals over one period.",
        default=FOURIER_QUADRATURE_NODES,
        ge=16,
    )

    @classmethod
    def from_options(cls, options: Mapping[str, Any]) -> "FourierMethod":
        return cls(desired=DesiredPattern(**_pick(options, DESIRED_PATTERN_OPTIONS)))

    def synthesize(self, geometry: ArrayGeometry) -> Excitation:
        from kiara_plugin.beamsynth.utils.synthesis import fourier_weights

        return fourier_weights(
            geometry, self.desired, quadrature_nodes=self.quadrature_nodes
        )


class WoodwardLawsonMethod(SynthesisMethod):
    """Sum of sin(N x)/(N sin x) composing beams, sampled from the desired pattern."""

    _kiara_model_id: str = "beamsynth.method.woodward-lawson"

    desired: DesiredPattern = Field(
        description="The desired beam.", default_factory=DesiredPattern
    )

    @classmethod
    def from_options(cls, options: Mapping[str, Any]) -> "WoodwardLawsonMethod":
        return cls(desired=DesiredPattern(**_pick(options, DESIRED_PATTERN_OPTIONS)))

    def synthesize(self, geometry: ArrayGeometry) -> Excitation:
        from kiara_plugin.beamsynth.utils.synthesis import woodward_lawson

        excitation, _ = woodward_lawson(geometry, self.desired)
        return excitation


class SchelkunoffMethod(SynthesisMethod):
    """Polynomial weights with prescribed nulls.

    Explicit null angles fully determine the pattern, ``steer_deg`` is ignored for them. Without explicit null angles, the nulls of an equal-ripple design at ``sll_db`` are used, rotated to ``steer_deg``.
    """

    _kiara_model_id: str = "beamsynth.method.schelkunoff"

    steer_deg: float = Field(
        description="Main-beam direction.", default=DEFAULT_STEER_DEG, gt=0.0, lt=180.0
    )
    null_angles_deg: Union[None, List[float]] = Field(
        description="Explicit null directions (n_elements - 1 of them).", default=None
    )
    sll_db: float = Field(
        description="Sidelobe level used to place the default nulls.",
        default=DEFAULT_SLL_DB,
    )

    @classmethod
    def from_options(cls, options: Mapping[str, Any]) -> "SchelkunoffMethod":
        return cls(**_pick(options, ("steer_deg", "null_angles_deg", "sll_db")))

    def synthesize(self, geometry: ArrayGeometry) -> Excitation:
        from kiara_plugin.beamsynth.utils.synthesis import (
            equal_ripple_nulls,
            schelkunoff_weights,
        )

        if self.null_angles_deg:
            return schelkunoff_weights(geometry, self.null_angles_deg)

        nulls = equal_ripple_nulls(
            geometry, sll_db=self.sll_db, steer_deg=self.steer_deg
        )
        return schelkunoff_weights(geometry, nulls)


class ChebyshevMethod(SynthesisMethod):

    _kiara_model_id: str = "beamsynth.method.chebyshev"

    spec: ChebyshevSpec = Field(
        description="The sidelobe design.", default_factory=ChebyshevSpec
    )
    steer_deg: float = Field(
        description="Main-beam direction.", default=DEFAULT_STEER_DEG, gt=0.0, lt=180.0
    )

    @classmethod
    def from_options(cls, options: Mapping[str, Any]) -> "ChebyshevMethod":
        return cls(
            spec=ChebyshevSpec(**_pick(options, ("sll_db",))),
            **_pick(options, ("steer_deg",)),
        )

    def synthesize(self, geometry: ArrayGeometry) -> Excitation:
        from kiara_plugin.beamsynth.utils.array import apply_steering
        from kiara_plugin.beamsynth.utils.synthesis import chebyshev_weights

        return apply_steering(
            geometry, chebyshev_weights(geometry, self.spec), self.steer_deg
        )


class TaylorMethod(SynthesisMethod):

    _kiara_model_id: str = "beamsynth.method.taylor"

    spec: TaylorSpec = Field(description="The sidelobe design.", default_factory=TaylorSpec)
    steer_deg: float = Field(
        description="Main-beam direction.", default=DEFAULT_STEER_DEG, gt=0.0, lt=180.0
    )

    @classmethod
    def from_options(cls, options: Mapping[str, Any]) -> "TaylorMethod":
        return cls(
            spec=TaylorSpec(**_pick(options, ("sll_db", "n_bar"))),
            **_pick(options, ("steer_deg",)),
        )

    def synthesize(self, geometry: ArrayGeometry) -> Excitation:
        from kiara_plugin.beamsynth.utils.array import apply_steering
        from kiara_plugin.beamsynth.utils.synthesis import taylor_weights

        return apply_steering(
            geometry, taylor_weights(geometry, self.spec), self.steer_deg
        )
