# -*- coding: utf-8 -*-
import math
import warnings
from functools import lru_cache
from typing import Any, Iterable, List, Mapping, Tuple, Type, Union

import numpy as np
import structlog

from kiara_plugin.beamsynth.defaults import (
    FOURIER_QUADRATURE_NODES,
    SYNTHESIS_METHOD_ID_PREFIX,
)
from kiara_plugin.beamsynth.exceptions import (
    ConfigurationError,
    InvalidArgumentError,
    UnsupportedConfigurationError,
)
from kiara_plugin.beamsynth.models import (
    AngleGrid,
    ArrayGeometry,
    ChebyshevSpec,
    ComparisonTable,
    DesiredPattern,
    Excitation,
    MethodMetrics,
    Pattern,
    PatternMetrics,
    SampleParity,
    TaylorSpec,
    WlSample,
    WlSampleSet,
)
from kiara_plugin.beamsynth.models.methods import SynthesisMethod

logger = structlog.getLogger()

SYNTHESIS_METHODS = ("fourier", "woodward-lawson", "schelkunoff", "chebyshev", "taylor")


def available_synthesis_methods() -> List[str]:

    from kiara.registries.models import ModelRegistry

    available = (
        ModelRegistry.instance().get_models_of_type(SynthesisMethod).item_infos.keys()
    )
    idx = len(SYNTHESIS_METHOD_ID_PREFIX)
    return sorted(x[idx:] for x in available)


@lru_cache()
def get_synthesis_method_cls(method: str) -> Type[SynthesisMethod]:

    from kiara.registries.models import ModelRegistry

    available = available_synthesis_methods()
    if method not in available:
        raise ConfigurationError(
            msg=f"Unknown synthesis method '{method}'. Available: {', '.join(available)}"
        )

    model_registry = ModelRegistry.instance()
    model_cls = model_registry.get_model_cls(
        f"{SYNTHESIS_METHOD_ID_PREFIX}{method}", SynthesisMethod
    )
    return model_cls  # type: ignore


def create_synthesis_method(method: str, options: Mapping[str, Any]) -> SynthesisMethod:
    return get_synthesis_method_cls(method).from_options(options)


def _require_half_wave(geometry: ArrayGeometry, what: str):

    if not geometry.is_half_wave:
        raise UnsupportedConfigurationError(
            msg=f"{what} needs half-wave element spacing, got {geometry.spacing_wl} wavelengths."
        )


def fourier_taper(
    geometry: ArrayGeometry,
    desired: DesiredPattern,
    quadrature_nodes: int = FOURIER_QUADRATURE_NODES,
) -> np.ndarray:
    """Real, signed Fourier coefficients of the desired beam, centred element indices.

    The integration runs over one period of psi centred on the beam, so the coefficients don't depend on the
    steering direction other than through the beam width.
    """

    from scipy.integrate import trapezoid

    _require_half_wave(geometry, "Fourier synthesis")

    xi = np.linspace(-np.pi, np.pi, quadrature_nodes + 1)
    d_hat = desired.profile(xi / geometry.kd)
    kernel = np.cos(np.outer(geometry.centered_indices(), xi))
    return trapezoid(kernel * d_hat, xi, axis=1) / (2.0 * np.pi)


def fourier_weights(
    geometry: ArrayGeometry,
    desired: DesiredPattern,
    quadrature_nodes: int = FOURIER_QUADRATURE_NODES,
) -> Excitation:

    taper = fourier_taper(geometry, desired, quadrature_nodes=quadrature_nodes)
    psi0 = geometry.kd * desired.u0
    return Excitation.from_weights(
        taper * np.exp(-1j * geometry.centered_indices() * psi0)
    )


def _wl_parity(geometry: ArrayGeometry, u0: float) -> SampleParity:

    frac = u0 * geometry.aperture_wl
    to_integer = abs(frac - round(frac))
    to_half = abs(frac - (math.floor(frac) + 0.5))
    return SampleParity.odd if to_integer <= to_half else SampleParity.even


def wl_samples(geometry: ArrayGeometry, desired: DesiredPattern) -> WlSampleSet:
    """Sample directions u_m = m * lambda / L (or half-integer multiples) in the visible region.

    Samples whose psi differs by a multiple of 2 pi from an earlier one (in the order m = 0, 1, -1, 2, -2, ...) are
    dropped, they would add the same composing beam twice.
    """

    n = geometry.n_elements
    step = 1.0 / geometry.aperture_wl
    parity = _wl_parity(geometry, desired.u0)

    candidates = [0] if parity == SampleParity.odd else []
    max_m = int(math.ceil(1.0 / step)) + 1
    for m in range(1, max_m + 1):
        candidates.extend([m, -m])

    seen = set()
    samples: List[WlSample] = []
    for m in candidates:
        if parity == SampleParity.odd:
            u = m * step
        else:
            u = math.copysign(abs(m) - 0.5, m) * step
        if abs(u) > 1.0 + 1e-12:
            continue
        u = min(1.0, max(-1.0, u))
        key = int(round(geometry.kd * u / (math.pi / n))) % (2 * n)
        if key in seen:
            continue
        seen.add(key)
        samples.append(
            WlSample(
                m=m,
                theta_deg=math.degrees(math.acos(u)),
                u=u,
                b=0.0,
            )
        )

    m_range = max(abs(s.m) for s in samples)
    sample_set = WlSampleSet(samples=samples, parity=parity, m_range=m_range)
    return sample_set.with_values(desired.magnitude(sample_set.u))


def wl_excitation(geometry: ArrayGeometry, sample_set: WlSampleSet) -> Excitation:
    """w_n = (1/N) sum_m b_m exp(-j psi_m n), centred element indices n."""

    psi = geometry.kd * sample_set.u
    phases = np.exp(-1j * np.outer(geometry.centered_indices(), psi))
    return Excitation.from_weights(phases @ sample_set.b / geometry.n_elements)


def woodward_lawson(
    geometry: ArrayGeometry, desired: DesiredPattern
) -> Tuple[Excitation, WlSampleSet]:

    sample_set = wl_samples(geometry, desired)
    return wl_excitation(geometry, sample_set), sample_set


def _check_steer(steer_deg: float):

    if not 0.0 < steer_deg < 180.0:
        raise InvalidArgumentError(
            msg=f"Steering angle must lie strictly between 0 and 180 degrees: {steer_deg}"
        )


def schelkunoff_weights(
    geometry: ArrayGeometry, null_angles_deg: Iterable[float]
) -> Excitation:
    """Coefficients of prod_i (z - z_i), z_i = exp(j kd cos(null_i)), scaled to unit amplitude sum."""

    nulls = [float(x) for x in null_angles_deg]
    if len(nulls) != geometry.n_elements - 1:
        raise InvalidArgumentError(
            msg=f"A {geometry.n_elements}-element array needs exactly {geometry.n_elements - 1} nulls, got {len(nulls)}."
        )
    for angle in nulls:
        if not 0.0 < angle < 180.0:
            raise InvalidArgumentError(
                msg=f"Null angles must lie strictly between 0 and 180 degrees: {angle}"
            )

    roots = np.exp(1j * geometry.kd * np.cos(np.radians(nulls)))
    weights = np.poly(roots)[::-1]
    return Excitation.from_weights(weights / np.sum(np.abs(weights)))


def equal_ripple_nulls(
    geometry: ArrayGeometry, sll_db: float, steer_deg: float = 90.0
) -> List[float]:
    """Null directions of a Dolph-Chebyshev design, rotated in psi to the steering direction."""

    _check_steer(steer_deg)
    n = geometry.n_elements
    if n < 3:
        raise InvalidArgumentError(
            msg=f"Equal-ripple null placement needs at least 3 elements, got {n}."
        )

    ratio = 10.0 ** (-sll_db / 20.0)
    x0 = math.cosh(math.acosh(ratio) / (n - 1))
    p = np.arange(1, n)
    x_p = np.cos((2 * p - 1) * np.pi / (2 * (n - 1)))
    psi = 2.0 * np.arccos(x_p / x0)
    psi = psi + geometry.kd * math.cos(math.radians(steer_deg))
    psi = np.angle(np.exp(1j * psi))

    u = psi / geometry.kd
    if np.any(np.abs(u) > 1.0):
        raise UnsupportedConfigurationError(
            msg=f"Can't place equal-ripple nulls for steering at {steer_deg} deg: some nulls fall outside the visible region at {geometry.spacing_wl} wavelength spacing."
        )
    return sorted(float(x) for x in np.degrees(np.arccos(u)))


def chebyshev_weights(geometry: ArrayGeometry, spec: ChebyshevSpec) -> Excitation:
    """Dolph-Chebyshev broadside weights, scaled to unit amplitude sum."""

    from scipy.signal.windows import chebwin

    if geometry.n_elements < 3:
        raise InvalidArgumentError(
            msg=f"Dolph-Chebyshev synthesis needs at least 3 elements, got {geometry.n_elements}."
        )

    with warnings.catch_warnings():
        # scipy warns about poor performance for attenuations below 45 dB
        warnings.simplefilter("ignore", UserWarning)
        weights = chebwin(geometry.n_elements, at=-spec.sll_db)
    return Excitation.from_weights(weights / np.sum(weights))


def taylor_weights(geometry: ArrayGeometry, spec: TaylorSpec) -> Excitation:
    """Taylor n-bar broadside weights, scaled to unit amplitude sum."""

    from scipy.signal.windows import taylor

    n = geometry.n_elements
    if n < 3:
        raise InvalidArgumentError(
            msg=f"Taylor synthesis needs at least 3 elements, got {n}."
        )
    if not spec.n_bar < n / 2.0:
        raise InvalidArgumentError(
            msg=f"Taylor n_bar must be smaller than half the element count ({n / 2.0}), got {spec.n_bar}."
        )

    weights = taylor(n, nbar=spec.n_bar, sll=-spec.sll_db, norm=False)
    return Excitation.from_weights(weights / np.sum(weights))


def compare_methods(
    geometry: ArrayGeometry,
    desired: DesiredPattern,
    chebyshev: Union[None, ChebyshevSpec] = None,
    taylor: Union[None, TaylorSpec] = None,
    grid: Union[None, AngleGrid] = None,
) -> ComparisonTable:
    """Synthesize with every classical method for the same array and beam direction, and analyze the patterns."""

    from kiara_plugin.beamsynth.utils.array import array_factor, pattern_metrics

    if chebyshev is None:
        chebyshev = ChebyshevSpec()
    if taylor is None:
        taylor = TaylorSpec()
    if grid is None:
        grid = AngleGrid.create()

    options = {
        **desired.dict(),
        "sll_db": chebyshev.sll_db,
    }
    rows = []
    for method in SYNTHESIS_METHODS:
        method_options = dict(options)
        if method == "taylor":
            method_options.update(sll_db=taylor.sll_db, n_bar=taylor.n_bar)
        synthesis = create_synthesis_method(method, method_options)
        excitation = synthesis.synthesize(geometry)
        metrics = pattern_metrics(array_factor(geometry, excitation, grid))
        logger.debug(
            "compare.method",
            method=method,
            peak_deg=metrics.peak_deg,
            sll_db=metrics.sll_db,
            hpbw_deg=metrics.hpbw_deg,
        )
        rows.append(MethodMetrics(method=method, metrics=metrics))

    return ComparisonTable(rows=rows)


def scan_directions(
    method: str,
    geometry: ArrayGeometry,
    directions: Iterable[float],
    options: Union[None, Mapping[str, Any]] = None,
    grid: Union[None, AngleGrid] = None,
) -> List[Tuple[float, Excitation, Pattern, PatternMetrics]]:
    """Synthesize and analyze one pattern per steering direction, with otherwise identical options."""

    from kiara_plugin.beamsynth.utils.array import array_factor, pattern_metrics

    if grid is None:
        grid = AngleGrid.create()
    options = dict(options or {})

    results = []
    for steer in directions:
        synthesis = create_synthesis_method(method, {**options, "steer_deg": steer})
        excitation = synthesis.synthesize(geometry)
        pattern = array_factor(geometry, excitation, grid)
        metrics = pattern_metrics(pattern)
        logger.debug(
            "scan.direction", method=method, steer_deg=steer, peak_deg=metrics.peak_deg
        )
        results.append((steer, excitation, pattern, metrics))
    return results
