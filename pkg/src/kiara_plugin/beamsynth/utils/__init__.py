# -*- coding: utf-8 -*-
import numpy as np


def wrap_phase_deg(phase_deg):
    """Wrap phases in degrees to (-180, 180]."""

    wrapped = 180.0 - np.mod(180.0 - np.asarray(phase_deg, dtype=float), 360.0)
    if np.ndim(wrapped) == 0:
        return float(wrapped)
    return wrapped


def direction_range(start_deg: float, stop_deg: float, step_deg: float):
    """Directions ``start + i * step`` up to and including ``stop`` (within rounding)."""

    from kiara_plugin.beamsynth.exceptions import InvalidArgumentError

    if step_deg <= 0.0:
        raise InvalidArgumentError(msg=f"Direction step must be positive: {step_deg}")
    if stop_deg < start_deg:
        raise InvalidArgumentError(
            msg=f"Invalid direction range: start ({start_deg}) is larger than stop ({stop_deg})."
        )
    n_steps = int(np.floor((stop_deg - start_deg) / step_deg + 1e-9))
    return [float(start_deg + step_deg * i) for i in range(n_steps + 1)]
