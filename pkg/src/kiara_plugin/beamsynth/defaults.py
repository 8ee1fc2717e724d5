# -*- coding: utf-8 -*-

"""Numeric defaults and constants used across the ``kiara_plugin.beamsynth`` package."""

import os
from typing import List, Tuple

import numpy as np

BEAMSYNTH_RESOURCES_FOLDER = os.path.join(os.path.dirname(__file__), "resources")
REFERENCE_TABLES_FOLDER = os.path.join(BEAMSYNTH_RESOURCES_FOLDER, "reference")
REFERENCE_MANIFEST_FILE = os.path.join(REFERENCE_TABLES_FOLDER, "manifest.json")

SEED_ENV_VAR = "BEAMSYNTH_SEED"
RUN_CONFIG_FILE_NAME = "run_config.yaml"

# array
DEFAULT_N_ELEMENTS = 16
DEFAULT_SPACING_WL = 0.5
DEFAULT_FREQUENCY_HZ = 2.45e9
SPEED_OF_LIGHT = 299_792_458.0

# analysis
DEFAULT_GRID_START_DEG = 0.0
DEFAULT_GRID_STOP_DEG = 180.0
DEFAULT_GRID_STEP_DEG = 0.05
HALF_POWER_DB = -3.0
NULL_FLOOR_DB = -60.0
PARSEVAL_NODES = 2**14
CSV_FLOAT_FORMAT = "%.9g"

# classical synthesis
DEFAULT_STEER_DEG = 90.0
DEFAULT_WIDTH_U = 0.42
DEFAULT_ROLLOFF = 1.0
FOURIER_QUADRATURE_NODES = 2**14
DEFAULT_SLL_DB = -30.0
DEFAULT_N_BAR = 5
MAX_DESIGN_SLL_DB = -10.0
SYNTHESIS_METHOD_ID_PREFIX = "beamsynth.method."

# neural beamformer
STEER_RANGE_DEG: Tuple[float, float] = (40.0, 140.0)
INPUT_ENCODING_VERSION = 1
DEFAULT_LAYER_SIZES: Tuple[int, int, int] = (18, 30, 16)
TARGET_SCALE = 0.9
INIT_WEIGHT_RANGE = 0.5
DEFAULT_ETA = 0.02
DEFAULT_MAX_EPOCHS = 200_000
DEFAULT_TARGET_MSE = 1e-4
# training error the convergence epoch is reported against
CONVERGENCE_MSE = 1e-3
DEFAULT_LOG_INTERVAL = 10_000
DEFAULT_SEED = 42
DEFAULT_SPLIT: Tuple[float, float, float] = (0.70, 0.15, 0.15)
TARGET_MODES = ("element-span", "wrapped")
DEFAULT_TARGET_MODE = "element-span"

# gates
STEER_TOLERANCE_DEG = 2.0
SLL_GATE_DB = -20.0

SCAN_DIRECTIONS_17: List[float] = [float(x) for x in np.arange(17) * 6.25 + 40.0]
NN_SELECTED_DIRECTIONS: List[float] = [
    40.0,
    50.0,
    60.0,
    70.0,
    80.0,
    100.0,
    110.0,
    120.0,
    130.0,
    140.0,
]
DEFAULT_TRAINING_DIRECTIONS: List[float] = [float(x) for x in range(40, 141)]

DIRECTION_PRESETS = {
    "scan17": SCAN_DIRECTIONS_17,
    "selected10": NN_SELECTED_DIRECTIONS,
    "training": DEFAULT_TRAINING_DIRECTIONS,
}
