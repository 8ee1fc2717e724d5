# -*- coding: utf-8 -*-

"""Array-factor evaluation and pattern analysis for uniform linear arrays."""

import math
from typing import Callable, Tuple, Union

import numpy as np

from kiara_plugin.beamsynth.defaults import (
    HALF_POWER_DB,
    NULL_FLOOR_DB,
    PARSEVAL_NODES,
)
from kiara_plugin.beamsynth.exceptions import (
    InvalidArgumentError,
    NumericalError,
    ResolutionError,
    UnsupportedConfigurationError,
)
from kiara_plugin.beamsynth.models import (
    AngleGrid,
    ArrayGeometry,
    Excitation,
    Pattern,
    PatternMetrics,
)

ElementPattern = Callable[[np.ndarray], np.ndarray]


def array_factor(
    geometry: ArrayGeometry,
    excitation: Excitation,
    grid: AngleGrid,
    element_pattern: Union[None, ElementPattern] = None,
) -> Pattern:
    """Evaluate AF(theta) = sum_n w_n exp(j kd n cos(theta)) over the grid.

    If an element pattern is given, it is called with u = cos(theta) and the result multiplies the array factor.
    """

    excitation.check_geometry(geometry)
    if grid.size == 0:
        raise InvalidArgumentError(msg="Can't evaluate array factor: angle grid is empty.")

    u = grid.u
    phase = geometry.kd * np.outer(u, geometry.element_indices())
    af = np.exp(1j * phase) @ excitation.weights

    if element_pattern is not None:
        af = af * np.asarray(element_pattern(u), dtype=complex)

    return Pattern.from_complex(grid, af)


def steering_phases(geometry: ArrayGeometry, steer_deg: float) -> Excitation:
    """Unit-amplitude weights with progressive phase -n kd cos(steer), element 0 as reference."""

    if not 0.0 < steer_deg < 180.0:
        raise InvalidArgumentError(
            msg=f"Steering angle must lie strictly between 0 and 180 degrees: {steer_deg}"
        )

    beta = -geometry.element_indices() * geometry.kd * math.cos(math.radians(steer_deg))
    return Excitation.from_weights(np.exp(1j * beta))


def apply_steering(
    geometry: ArrayGeometry, excitation: Excitation, steer_deg: float
) -> Excitation:

    excitation.check_geometry(geometry)
    steering = steering_phases(geometry, steer_deg)
    return Excitation.from_weights(excitation.weights * steering.weights)


def _main_lobe_edge(db: np.ndarray, peak: int, step: int) -> int:

    last = db.size - 1
    idx = peak
    while 0 <= idx + step <= last and db[idx] > HALF_POWER_DB:
        idx += step
    while (
        0 <= idx + step <= last
        and db[idx + step] <= db[idx]
        and db[idx] > NULL_FLOOR_DB
    ):
        idx += step
    return idx


def _half_power_crossing(theta: np.ndarray, db: np.ndarray, peak: int, step: int) -> float:

    idx = peak
    while db[idx] > HALF_POWER_DB:
        nxt = idx + step
        if nxt < 0 or nxt >= db.size:
            raise ResolutionError(
                msg=f"Can't determine half-power beamwidth: the -3 dB point {'below' if step < 0 else 'above'} the peak at {theta[peak]:.3f} deg lies outside the grid."
            )
        idx = nxt

    inner = idx - step
    if not np.isfinite(db[idx]):
        return float(theta[idx])
    t = (HALF_POWER_DB - db[inner]) / (db[idx] - db[inner])
    return float(theta[inner] + t * (theta[idx] - theta[inner]))


def pattern_metrics(pattern: Pattern) -> PatternMetrics:
    """Peak direction, sidelobe level, half-power beamwidth and nulls of a sampled pattern.

    The main lobe extends from the peak past both -3 dB points down to the first local minimum on each side (a sample
    at or below -60 dB counts as a null). The sidelobe level is the highest local maximum outside of it, grid end
    points included, or ``None`` if there is none.
    """

    db = pattern.db
    theta = pattern.theta
    if db.size < 3:
        raise InvalidArgumentError(
            msg=f"Can't analyze pattern: need at least 3 samples, got {db.size}."
        )
    if not np.isfinite(db.max()):
        raise NumericalError(msg="Can't analyze pattern: array factor is zero everywhere.")

    peak = int(np.argmax(db))
    left = _main_lobe_edge(db, peak, -1)
    right = _main_lobe_edge(db, peak, 1)

    low = _half_power_crossing(theta, db, peak, -1)
    high = _half_power_crossing(theta, db, peak, 1)

    interior = np.arange(1, db.size - 1)
    is_min = (db[interior] < db[interior - 1]) & (db[interior] <= db[interior + 1])
    is_max = (db[interior] > db[interior - 1]) & (db[interior] >= db[interior + 1])
    minima = interior[is_min]
    maxima = interior[is_max].tolist()
    if db[0] > db[1]:
        maxima.insert(0, 0)
    if db[-1] > db[-2]:
        maxima.append(db.size - 1)

    sidelobes = [i for i in maxima if i < left or i > right]
    sidelobe_peaks = [(float(theta[i]), float(db[i])) for i in sidelobes]
    sll = max((level for _, level in sidelobe_peaks), default=None)

    return PatternMetrics(
        peak_deg=float(theta[peak]),
        sll_db=sll,
        hpbw_deg=high - low,
        null_depths_db=[(float(theta[i]), float(db[i])) for i in minima],
        sidelobe_peaks=sidelobe_peaks,
    )


def parseval_check(
    geometry: ArrayGeometry, excitation: Excitation, nodes: int = PARSEVAL_NODES
) -> Tuple[float, float]:
    """Compare sum |w_n|^2 with the mean of |AF(psi)|^2 over one period of psi."""

    if not geometry.is_half_wave:
        raise UnsupportedConfigurationError(
            msg=f"Parseval check needs half-wave spacing, got {geometry.spacing_wl} wavelengths."
        )
    excitation.check_geometry(geometry)

    w = excitation.weights
    psi = 2.0 * np.pi * np.arange(nodes) / nodes
    af = np.exp(1j * np.outer(psi, geometry.element_indices())) @ w

    lhs = float(np.sum(np.abs(w) ** 2))
    # trapezoid rule on a periodic integrand reduces to the node mean
    rhs = float(np.mean(np.abs(af) ** 2))
    return lhs, rhs
