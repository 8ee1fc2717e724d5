# -*- coding: utf-8 -*-
from abc import abstractmethod
from typing import Any, Dict, Mapping, Union

import orjson
from pydantic import Field

from kiara.exceptions import KiaraProcessingException
from kiara.models import KiaraModel
from kiara.models.module import KiaraModuleConfig
from kiara.models.values.value import ValueMap
from kiara.modules import KiaraModule, ValueMapSchema
from kiara_plugin.beamsynth.defaults import (
    DEFAULT_GRID_STEP_DEG,
    DEFAULT_N_BAR,
    DEFAULT_N_ELEMENTS,
    DEFAULT_SLL_DB,
    DEFAULT_SPACING_WL,
    DEFAULT_STEER_DEG,
    DEFAULT_WIDTH_U,
    SCAN_DIRECTIONS_17,
)
from kiara_plugin.beamsynth.exceptions import BeamsynthException


def model_data(model: KiaraModel) -> Dict[str, Any]:
    """Plain (json-compatible) data of a model, for 'dict' outputs; non-finite floats become None."""
    return orjson.loads(orjson.dumps(model.dict()))


def geometry_inputs() -> Dict[str, Dict[str, Any]]:

    return {
        "n_elements": {
            "type": "integer",
            "doc": "The number of array elements.",
            "default": DEFAULT_N_ELEMENTS,
        },
        "spacing_wl": {
            "type": "float",
            "doc": "The element spacing, in wavelengths.",
            "default": DEFAULT_SPACING_WL,
        },
        "grid_step": {
            "type": "float",
            "doc": "Angle step (degrees) of the grid the patterns are analyzed on.",
            "default": DEFAULT_GRID_STEP_DEG,
        },
    }


def method_options(inputs: ValueMap) -> Mapping[str, Any]:

    options = inputs.get_value_data("options")
    if options is None:
        return {}
    return dict(options.dict_data)


class BeamsynthModule(KiaraModule):
    """Base class for modules in this package: maps package errors to processing errors."""

    _module_type_name: str = None  # type: ignore

    def _geometry_and_grid(self, inputs: ValueMap):

        from kiara_plugin.beamsynth.models import AngleGrid, ArrayGeometry

        geometry = ArrayGeometry(
            n_elements=inputs.get_value_data("n_elements"),
            spacing_wl=inputs.get_value_data("spacing_wl"),
        )
        grid = AngleGrid.create(step_deg=inputs.get_value_data("grid_step"))
        return geometry, grid

    def process(self, inputs: ValueMap, outputs: ValueMap):

        try:
            self.run(inputs, outputs)
        except BeamsynthException as e:
            raise KiaraProcessingException(str(e))

    @abstractmethod
    def run(self, inputs: ValueMap, outputs: ValueMap):
        pass


class SynthesizeConfig(KiaraModuleConfig):

    method: Union[None, str] = Field(
        description="The synthesis method, if not set it becomes a module input.",
        default=None,
    )


class SynthesizeModule(BeamsynthModule):
    """Compute element weights with one of the classical synthesis methods, and analyze the resulting pattern.

    Method options (steering direction, sector width, sidelobe level, nulls, ...) are passed in as a flat 'options'
    dict; their names are the fields of the respective ``beamsynth.method.<name>`` model.
    """

    _module_type_name = "beamsynth.synthesize"
    _config_cls = SynthesizeConfig

    def create_inputs_schema(
        self,
    ) -> ValueMapSchema:

        from kiara_plugin.beamsynth.utils.synthesis import available_synthesis_methods

        result: Dict[str, Dict[str, Any]] = geometry_inputs()
        result["options"] = {
            "type": "dict",
            "doc": "Method options, e.g. 'steer_deg', 'width_u', 'sll_db', 'n_bar', 'null_angles_deg'.",
            "optional": True,
        }
        if not self.get_config_value("method"):
            allowed = available_synthesis_methods()
            result["method"] = {
                "type": "string",
                "type_config": {"allowed_strings": allowed},
                "doc": "The synthesis method to use. Allowed: {}".format(
                    ", ".join(allowed)
                ),
            }
        return result

    def create_outputs_schema(
        self,
    ) -> ValueMapSchema:

        result = {
            "excitation": {"type": "dict", "doc": "The synthesized element weights."},
            "metrics": {
                "type": "dict",
                "doc": "Peak direction, sidelobe level and half-power beamwidth.",
            },
        }
        return result

    def run(self, inputs: ValueMap, outputs: ValueMap):

        from kiara_plugin.beamsynth.utils.array import array_factor, pattern_metrics
        from kiara_plugin.beamsynth.utils.synthesis import create_synthesis_method

        method = self.get_config_value("method")
        if not method:
            method = inputs.get_value_data("method")

        geometry, grid = self._geometry_and_grid(inputs)
        synthesis = create_synthesis_method(method, method_options(inputs))
        excitation = synthesis.synthesize(geometry)
        metrics = pattern_metrics(array_factor(geometry, excitation, grid))

        outputs.set_value("excitation", model_data(excitation))
        outputs.set_value("metrics", model_data(metrics))


class ScanModule(BeamsynthModule):
    """Synthesize one pattern per steering direction and collect the pattern metrics."""

    _module_type_name = "beamsynth.scan"
    _config_cls = SynthesizeConfig

    def create_inputs_schema(
        self,
    ) -> ValueMapSchema:

        from kiara_plugin.beamsynth.utils.synthesis import available_synthesis_methods

        result: Dict[str, Dict[str, Any]] = geometry_inputs()
        result["directions"] = {
            "type": "list",
            "doc": "Steering directions in degrees (defaults to 17 directions from 40 to 140).",
            "optional": True,
        }
        result["options"] = {
            "type": "dict",
            "doc": "Method options, the steering direction is set per scan step.",
            "optional": True,
        }
        if not self.get_config_value("method"):
            allowed = available_synthesis_methods()
            result["method"] = {
                "type": "string",
                "type_config": {"allowed_strings": allowed},
                "doc": "The synthesis method to use.",
            }
        return result

    def create_outputs_schema(
        self,
    ) -> ValueMapSchema:

        return {
            "scan": {
                "type": "dict",
                "doc": "One row (steer_deg, peak_deg, sll_db, hpbw_deg) per direction, under the 'rows' key.",
            }
        }

    def run(self, inputs: ValueMap, outputs: ValueMap):

        from kiara_plugin.beamsynth.utils.synthesis import scan_directions

        method = self.get_config_value("method")
        if not method:
            method = inputs.get_value_data("method")

        directions = inputs.get_value_data("directions")
        if directions is None:
            directions = SCAN_DIRECTIONS_17
        else:
            directions = [float(x) for x in directions.list_data]

        geometry, grid = self._geometry_and_grid(inputs)
        results = scan_directions(
            method, geometry, directions, options=method_options(inputs), grid=grid
        )
        rows = [
            {"steer_deg": steer, **metrics.as_row()}
            for steer, _, _, metrics in results
        ]
        outputs.set_value("scan", {"method": method, "rows": rows})


class CompareModule(BeamsynthModule):
    """Run every classical synthesis method for the same array and main-beam direction."""

    _module_type_name = "beamsynth.compare"

    def create_inputs_schema(
        self,
    ) -> ValueMapSchema:

        result: Dict[str, Dict[str, Any]] = geometry_inputs()
        result.update(
            {
                "steer_deg": {
                    "type": "float",
                    "doc": "Main-beam direction in degrees.",
                    "default": DEFAULT_STEER_DEG,
                },
                "width_u": {
                    "type": "float",
                    "doc": "Desired sector width in u-space (Fourier and Woodward-Lawson).",
                    "default": DEFAULT_WIDTH_U,
                },
                "sll_db": {
                    "type": "float",
                    "doc": "Design sidelobe level (Schelkunoff, Chebyshev and Taylor).",
                    "default": DEFAULT_SLL_DB,
                },
                "n_bar": {
                    "type": "integer",
                    "doc": "Number of near-in sidelobes of the Taylor design.",
                    "default": DEFAULT_N_BAR,
                },
            }
        )
        return result

    def create_outputs_schema(
        self,
    ) -> ValueMapSchema:

        return {
            "comparison": {
                "type": "dict",
                "doc": "Metrics per method, under the 'rows' key.",
            }
        }

    def run(self, inputs: ValueMap, outputs: ValueMap):

        from kiara_plugin.beamsynth.models import ChebyshevSpec, DesiredPattern, TaylorSpec
        from kiara_plugin.beamsynth.utils.synthesis import compare_methods

        geometry, grid = self._geometry_and_grid(inputs)
        desired = DesiredPattern(
            steer_deg=inputs.get_value_data("steer_deg"),
            width_u=inputs.get_value_data("width_u"),
        )
        sll_db = inputs.get_value_data("sll_db")
        table = compare_methods(
            geometry,
            desired,
            chebyshev=ChebyshevSpec(sll_db=sll_db),
            taylor=TaylorSpec(sll_db=sll_db, n_bar=inputs.get_value_data("n_bar")),
            grid=grid,
        )
        rows = [{"method": row.method, **row.metrics.as_row()} for row in table.rows]
        outputs.set_value("comparison", {"rows": rows})
