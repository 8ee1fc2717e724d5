# -*- coding: utf-8 -*-
import numpy as np
import pytest
from pydantic import ValidationError

from kiara_plugin.beamsynth.defaults import SCAN_DIRECTIONS_17
from kiara_plugin.beamsynth.exceptions import (
    DimensionError,
    InvalidArgumentError,
    UnsupportedConfigurationError,
)
from kiara_plugin.beamsynth.models import (
    AngleGrid,
    ArrayGeometry,
    BeamShape,
    ChebyshevSpec,
    DesiredPattern,
    Excitation,
    SampleParity,
    TaylorSpec,
)
from kiara_plugin.beamsynth.utils.array import array_factor, pattern_metrics
from kiara_plugin.beamsynth.utils.synthesis import (
    chebyshev_weights,
    compare_methods,
    create_synthesis_method,
    equal_ripple_nulls,
    fourier_weights,
    scan_directions,
    schelkunoff_weights,
    taylor_weights,
    wl_excitation,
    wl_samples,
    woodward_lawson,
)


@pytest.fixture
def geometry() -> ArrayGeometry:
    return ArrayGeometry()


@pytest.fixture(scope="module")
def grid() -> AngleGrid:
    return AngleGrid.create()


def analyze(geometry, excitation, grid):
    return pattern_metrics(array_factor(geometry, excitation, grid))


class TestDesiredPattern:
    def test_peak_at_steer(self):

        desired = DesiredPattern(steer_deg=70.0)
        assert desired.at_angles([70.0])[0] == 1.0

    def test_half_magnitude_at_half_width(self):

        desired = DesiredPattern(constant_beamwidth=False)
        assert desired.magnitude(0.21) == pytest.approx(0.5)
        assert desired.magnitude(0.42) == pytest.approx(0.0, abs=1e-12)

    def test_sector(self):

        desired = DesiredPattern(shape=BeamShape.sector, width_u=0.3, constant_beamwidth=False)
        assert desired.magnitude(0.149) == 1.0
        assert desired.magnitude(0.151) == 0.0

    def test_constant_beamwidth(self):

        desired = DesiredPattern(steer_deg=40.0)
        assert desired.effective_width_u == pytest.approx(0.42 * np.sin(np.radians(40.0)))

    @pytest.mark.parametrize("steer", [0.0, 180.0])
    def test_invalid_steer(self, steer):

        with pytest.raises(ValidationError):
            DesiredPattern(steer_deg=steer)


class TestFourier:
    def test_broadside_is_real_and_symmetric(self, geometry):

        excitation = fourier_weights(geometry, DesiredPattern(width_u=0.30))
        w = excitation.weights
        assert np.allclose(w.imag, 0.0, atol=1e-12)
        assert np.allclose(excitation.amplitudes, excitation.amplitudes[::-1])

    def test_broadside_beamwidth(self, geometry, grid):

        metrics = analyze(geometry, fourier_weights(geometry, DesiredPattern()), grid)
        assert metrics.peak_deg == pytest.approx(90.0, abs=0.05)
        assert metrics.hpbw_deg == pytest.approx(18.0, abs=4.0)

    @pytest.mark.parametrize("steer", SCAN_DIRECTIONS_17)
    def test_steered_sidelobes(self, geometry, grid, steer):

        excitation = fourier_weights(geometry, DesiredPattern(steer_deg=steer))
        metrics = analyze(geometry, excitation, grid)
        assert abs(metrics.peak_deg - steer) <= 1.0
        assert metrics.sll_db <= -20.0

    def test_unit_gain_at_steer(self, geometry):

        desired = DesiredPattern(steer_deg=65.0)
        excitation = fourier_weights(geometry, desired)
        pattern = array_factor(geometry, excitation, AngleGrid(theta_deg=[65.0]))
        assert pattern.magnitude[0] == pytest.approx(1.0, abs=0.05)

    def test_requires_half_wave(self):

        with pytest.raises(UnsupportedConfigurationError):
            fourier_weights(ArrayGeometry(spacing_wl=0.6), DesiredPattern())


class TestWoodwardLawson:
    @pytest.mark.parametrize("steer", [55.0, 70.0, 90.0, 123.0])
    def test_interpolates_samples(self, geometry, steer):

        excitation, samples = woodward_lawson(geometry, DesiredPattern(steer_deg=steer))
        order = np.argsort(samples.theta)
        grid = AngleGrid(theta_deg=samples.theta[order].tolist())
        pattern = array_factor(geometry, excitation, grid)

        expected = samples.b[order]
        assert np.allclose(pattern.magnitude, expected, rtol=1e-9, atol=1e-12)

    def test_sample_spacing(self, geometry):

        samples = wl_samples(geometry, DesiredPattern())
        assert samples.parity == SampleParity.odd
        u = np.sort(samples.u)
        assert np.allclose(np.diff(u), 1.0 / 8.0)
        # u = -1 and u = 1 alias onto each other
        assert len(samples.samples) == 16

    def test_even_parity(self, geometry):

        # u0 = 1/16 sits between the integer sample grid points
        steer = float(np.degrees(np.arccos(1.0 / 16.0)))
        samples = wl_samples(geometry, DesiredPattern(steer_deg=steer))
        assert samples.parity == SampleParity.even
        assert 0 not in [s.m for s in samples.samples]

    @pytest.mark.parametrize("steer", SCAN_DIRECTIONS_17)
    def test_scan_accuracy(self, geometry, grid, steer):

        excitation, _ = woodward_lawson(geometry, DesiredPattern(steer_deg=steer))
        metrics = analyze(geometry, excitation, grid)
        assert abs(metrics.peak_deg - steer) <= 1.0

    def test_with_values(self, geometry):

        samples = wl_samples(geometry, DesiredPattern())
        changed = samples.with_values(np.ones(len(samples.samples)))
        assert np.all(changed.b == 1.0)
        assert np.all(changed.u == samples.u)

        with pytest.raises(DimensionError):
            samples.with_values([1.0, 0.0])

    def test_samples_follow_desired_magnitude(self, geometry):

        desired = DesiredPattern(steer_deg=70.0)
        samples = wl_samples(geometry, desired)
        assert np.allclose(samples.b, desired.magnitude(samples.u))

    def test_broadside_delta(self, geometry):

        samples = wl_samples(geometry, DesiredPattern())
        # only the sample on the main-beam direction is non-zero
        delta = samples.with_values([1.0 if s.m == 0 else 0.0 for s in samples.samples])
        excitation = wl_excitation(geometry, delta)
        assert np.allclose(excitation.weights, 1.0 / 16.0, atol=1e-15)

    def test_zero_samples(self, geometry, grid):

        samples = wl_samples(geometry, DesiredPattern())
        excitation = wl_excitation(geometry, samples.with_values(np.zeros(len(samples.samples))))
        assert np.all(excitation.weights == 0.0)
        pattern = array_factor(geometry, excitation, grid)
        assert np.all(pattern.magnitude == 0.0)
        assert np.all(np.isneginf(pattern.db))


class TestSchelkunoff:
    def test_prescribed_nulls(self, geometry, grid):

        nulls = [20.0, 35.0, 50.0, 60.0, 70.0, 75.0, 80.0, 100.0, 105.0, 110.0, 120.0, 130.0, 145.0, 160.0, 170.0]
        excitation = schelkunoff_weights(geometry, nulls)
        peak = array_factor(geometry, excitation, grid).magnitude.max()
        at_nulls = array_factor(geometry, excitation, AngleGrid(theta_deg=nulls)).magnitude

        assert np.all(20.0 * np.log10(at_nulls / peak + 1e-300) <= -100.0)
        assert np.sum(excitation.amplitudes) == pytest.approx(1.0)

    def test_small_array(self):

        geometry = ArrayGeometry(n_elements=3)
        excitation = schelkunoff_weights(geometry, [60.0, 120.0])
        # (z - z1)(z - z2) with z1 z2 = 1 and z1 + z2 = 2 cos(pi / 2) = 0
        assert np.allclose(excitation.weights * 2.0, [1.0, 0.0, 1.0])

    def test_wrong_null_count(self, geometry):

        with pytest.raises(InvalidArgumentError):
            schelkunoff_weights(geometry, [60.0, 120.0])

    def test_equal_ripple_default(self, geometry, grid):

        nulls = equal_ripple_nulls(geometry, -30.0)
        assert len(nulls) == 15
        assert nulls == sorted(nulls)

        metrics = analyze(geometry, schelkunoff_weights(geometry, nulls), grid)
        assert metrics.peak_deg == pytest.approx(90.0, abs=0.05)
        assert metrics.sll_db == pytest.approx(-30.0, abs=0.5)

    def test_equal_ripple_steered(self, geometry, grid):

        method = create_synthesis_method("schelkunoff", {"steer_deg": 80.0})
        metrics = analyze(geometry, method.synthesize(geometry), grid)
        assert metrics.peak_deg == pytest.approx(80.0, abs=0.5)

    def test_invisible_nulls(self):

        # at 0.3 wavelengths only |psi| <= 0.6 pi is visible
        with pytest.raises(UnsupportedConfigurationError):
            equal_ripple_nulls(ArrayGeometry(spacing_wl=0.3), -30.0)


class TestChebyshev:
    def test_equal_ripple(self, geometry, grid):

        metrics = analyze(geometry, chebyshev_weights(geometry, ChebyshevSpec()), grid)

        assert metrics.sll_db == pytest.approx(-30.0, abs=0.5)
        assert metrics.hpbw_deg == pytest.approx(8.0, abs=2.0)
        levels = [level for _, level in metrics.sidelobe_peaks]
        assert np.allclose(levels, -30.0, atol=0.5)

    def test_normalized_and_symmetric(self, geometry):

        weights = chebyshev_weights(geometry, ChebyshevSpec(sll_db=-40.0)).weights.real
        assert weights.sum() == pytest.approx(1.0)
        assert np.allclose(weights, weights[::-1])

    def test_spec_bound(self):

        with pytest.raises(ValidationError):
            ChebyshevSpec(sll_db=-5.0)

    def test_steered(self, geometry, grid):

        method = create_synthesis_method("chebyshev", {"steer_deg": 60.0, "sll_db": -25.0})
        metrics = analyze(geometry, method.synthesize(geometry), grid)
        assert metrics.peak_deg == pytest.approx(60.0, abs=0.05)
        assert metrics.sll_db == pytest.approx(-25.0, abs=0.5)


class TestTaylor:
    def test_near_and_far_sidelobes(self, geometry, grid):

        metrics = analyze(geometry, taylor_weights(geometry, TaylorSpec()), grid)
        assert metrics.sll_db == pytest.approx(-30.0, abs=0.5)

        right = [level for angle, level in metrics.sidelobe_peaks if angle > 90.0]
        for inner, outer in zip(right, right[1:]):
            assert outer <= inner + 0.05
        assert right[-1] < right[0] - 1.0

    def test_n_bar_bound(self, geometry):

        with pytest.raises(InvalidArgumentError):
            taylor_weights(geometry, TaylorSpec(n_bar=8))

    def test_broader_than_chebyshev(self, geometry, grid):

        taylor = analyze(geometry, taylor_weights(geometry, TaylorSpec()), grid)
        cheb = analyze(geometry, chebyshev_weights(geometry, ChebyshevSpec()), grid)
        assert taylor.hpbw_deg > cheb.hpbw_deg


class TestCompare:
    def test_default_table(self, geometry, grid):

        table = compare_methods(geometry, DesiredPattern(), grid=grid)
        frame = table.to_frame()

        assert list(frame.columns) == ["method", "peak_deg", "sll_db", "hpbw_deg"]
        assert list(frame["method"]) == [
            "fourier",
            "woodward-lawson",
            "schelkunoff",
            "chebyshev",
            "taylor",
        ]
        uniform = analyze(geometry, Excitation.uniform(16), grid)
        metrics = {row.method: row.metrics for row in table.rows}
        assert metrics["fourier"].hpbw_deg > metrics["chebyshev"].hpbw_deg > uniform.hpbw_deg

    def test_designed_sidelobes(self, geometry, grid):

        table = compare_methods(geometry, DesiredPattern(), ChebyshevSpec(sll_db=-30.0), grid=grid)
        for row in table.rows:
            if row.method == "fourier":
                assert row.metrics.sll_db <= -20.0
            else:
                assert row.metrics.sll_db <= -29.5, row.method

    def test_deterministic(self, geometry, grid):

        first = compare_methods(geometry, DesiredPattern(steer_deg=70.0), grid=grid)
        second = compare_methods(geometry, DesiredPattern(steer_deg=70.0), grid=grid)
        assert first.dict() == second.dict()

    def test_scan(self, geometry, grid):

        results = scan_directions("fourier", geometry, [50.0, 90.0], grid=grid)
        assert [steer for steer, _, _, _ in results] == [50.0, 90.0]
        assert results[0][3].peak_deg == pytest.approx(50.0, abs=1.0)
