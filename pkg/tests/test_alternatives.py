"""Alternative samplers: identities, moments, envelopes, and presets."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import chi2

from rankdep import (
    EnvelopeViolation,
    InvalidDelta,
    LocalSchedule,
    UnknownPreset,
    gaussian_margin,
    preset,
    sample_generalized_rotation,
    sample_mixture,
    sample_rotation,
    uniform_margin,
)
from rankdep.alternatives import (
    _farlie_density,
    _folded_density,
    _step_map,
    _uniform_pair_sampler,
    _uniform_square_density,
    _w_map,
)

PRESET_DELTA0 = {"a": 2.0, "b": 10.0, "c": 20.0, "d": 3.0, "e": 60.0, "f": 12.0}


class TestLocalSchedule:
    @given(
        st.floats(min_value=0.01, max_value=100.0),
        st.integers(min_value=1, max_value=10**6),
    )
    @settings(max_examples=100, deadline=None)
    def test_delta_n_is_exactly_delta0_over_root_n(self, delta0, n):
        schedule = LocalSchedule(delta0).at(n)
        assert schedule.delta_n * np.sqrt(n) == pytest.approx(delta0, rel=1e-15)

    def test_the_documented_example(self):
        assert LocalSchedule(2.0).at(500).delta_n == pytest.approx(0.0894427, abs=1e-6)

    def test_delta0_must_be_positive(self):
        with pytest.raises(ValueError):
            LocalSchedule(0.0)
        with pytest.raises(ValueError):
            LocalSchedule(-1.0)

    def test_delta_n_needs_a_sample_size(self):
        with pytest.raises(ValueError):
            LocalSchedule(2.0).delta_n


class TestRotation:
    def test_delta_zero_is_the_identity(self):
        a = sample_rotation(gaussian_margin, gaussian_margin, 0.0, 50, seed=3)
        rng = np.random.default_rng(np.random.SeedSequence([3, 0xA171]))
        y1 = gaussian_margin(rng.random(50))
        y2 = gaussian_margin(rng.random(50))
        assert np.array_equal(a.x1, y1)
        assert np.array_equal(a.x2, y2)

    def test_pearson_correlation_matches_the_rotation_algebra(self):
        # corr = 2 delta / (1 + delta^2) = 0.8 at delta = 0.5
        sample = sample_rotation(gaussian_margin, gaussian_margin, 0.5, 10**5, seed=1)
        corr = np.corrcoef(sample.x1, sample.x2)[0, 1]
        assert corr == pytest.approx(0.8, abs=0.01)

    @pytest.mark.parametrize("delta", [1.0, -1.0, 1.5])
    def test_degenerate_rotations_are_rejected(self, delta):
        with pytest.raises(InvalidDelta):
            sample_rotation(gaussian_margin, gaussian_margin, delta, 10)


class TestMixture:
    def test_delta_zero_is_pure_independent_sampling(self):
        sample = sample_mixture(
            _uniform_pair_sampler, _farlie_density, _uniform_square_density,
            2.0, 0.0, 10**4, seed=2,
        )
        # margins stay uniform on [-1, 1]
        assert abs(sample.x1.mean()) < 0.03
        assert sample.x1.var() == pytest.approx(1.0 / 3.0, abs=0.01)
        assert abs(np.corrcoef(sample.x1, sample.x2)[0, 1]) < 0.03

    def test_delta_domain(self):
        for delta in (-0.1, 1.0001):
            with pytest.raises(InvalidDelta):
                sample_mixture(
                    _uniform_pair_sampler, _farlie_density, _uniform_square_density,
                    2.0, delta, 10,
                )

    def test_an_undersized_envelope_is_detected(self):
        with pytest.raises(EnvelopeViolation):
            sample_mixture(
                _uniform_pair_sampler, _farlie_density, _uniform_square_density,
                1.2, 1.0, 5000, seed=0,
            )

    @pytest.mark.parametrize(
        "density,mass",
        [
            (
                _farlie_density,
                # integral of (1 + x1 x2) / 4 over a rectangle
                lambda a1, b1, a2, b2: 0.25
                * ((b1 - a1) * (b2 - a2) + (b1**2 - a1**2) * (b2**2 - a2**2) / 4.0),
            ),
            (
                _folded_density,
                # integral of (1 - |x1| x2) / 4 over a rectangle
                lambda a1, b1, a2, b2: 0.25
                * (
                    (b1 - a1) * (b2 - a2)
                    - (b1 * abs(b1) - a1 * abs(a1)) / 2.0 * (b2**2 - a2**2) / 2.0
                ),
            ),
        ],
        ids=["farlie", "folded"],
    )
    def test_pure_dependent_component_fits_its_density(self, density, mass):
        draws = sample_mixture(
            _uniform_pair_sampler, density, _uniform_square_density,
            2.0, 1.0, 10**5, seed=7,
        )
        edges = np.linspace(-1.0, 1.0, 21)
        counts, _, _ = np.histogram2d(draws.x1, draws.x2, bins=(edges, edges))
        expected = np.empty((20, 20))
        for i in range(20):
            for j in range(20):
                expected[i, j] = mass(edges[i], edges[i + 1], edges[j], edges[j + 1])
        expected *= draws.n
        stat = float(((counts - expected) ** 2 / expected).sum())
        assert chi2.sf(stat, 399) > 0.01


class TestGeneralizedRotation:
    def test_delta_zero_gives_independent_margins(self):
        sample = sample_generalized_rotation(
            uniform_margin, gaussian_margin, _w_map, 0.0, 10**4, seed=4
        )
        assert abs(np.corrcoef(sample.x1, sample.x2)[0, 1]) < 0.03

    def test_the_perturbation_shifts_the_second_coordinate(self):
        base = sample_generalized_rotation(
            uniform_margin, gaussian_margin, _w_map, 0.0, 500, seed=9
        )
        moved = sample_generalized_rotation(
            uniform_margin, gaussian_margin, _w_map, 2.0, 500, seed=9
        )
        assert np.array_equal(base.x1, moved.x1)
        assert np.allclose(moved.x2 - base.x2, 2.0 * _w_map(base.x1))

    def test_non_finite_maps_are_rejected(self):
        with np.errstate(divide="ignore", invalid="ignore"):
            with pytest.raises(ValueError):
                sample_generalized_rotation(
                    uniform_margin, gaussian_margin, lambda t: t / 0.0, 1.0, 10
                )


class TestShapeMaps:
    def test_step_map_boundaries(self):
        t = np.array([-1.0, -0.75, -0.5, -0.25, 0.0, 0.25, 0.5, 1.0])
        assert _step_map(t).tolist() == [-3.0, -3.0, 2.0, 2.0, -4.0, -4.0, -3.0, -3.0]

    def test_w_map_shape(self):
        t = np.array([-1.0, -0.5, 0.0, 0.5, 1.0])
        assert _w_map(t).tolist() == [0.5, 0.0, 0.5, 0.0, 0.5]


class TestPresets:
    def test_schedules_carry_the_documented_constants(self):
        for name, delta0 in PRESET_DELTA0.items():
            model, schedule = preset(name)
            assert schedule.delta0 == delta0
            assert model.label

    def test_families(self):
        assert preset("a")[0].family == "rotation"
        assert preset("b")[0].family == "mixture"
        assert preset("c")[0].family == "mixture"
        for name in "def":
            assert preset(name)[0].family == "generalized_rotation"

    def test_lookup_is_case_insensitive(self):
        model, schedule = preset(" B ")
        assert schedule.delta0 == 10.0

    def test_unknown_presets_raise(self):
        with pytest.raises(UnknownPreset):
            preset("g")

    def test_sampling_is_seed_deterministic(self):
        model, schedule = preset("e")
        delta = schedule.at(500).delta_n
        a = model.sample(delta, 500, seed=11)
        b = model.sample(delta, 500, seed=11)
        c = model.sample(delta, 500, seed=12)
        assert np.array_equal(a.x1, b.x1) and np.array_equal(a.x2, b.x2)
        assert not np.array_equal(a.x2, c.x2)

    def test_uniform_first_margin_for_the_shape_presets(self):
        model, schedule = preset("d")
        sample = model.sample(schedule.at(1000).delta_n, 10**4, seed=0)
        assert sample.x1.min() >= -1.0 and sample.x1.max() <= 1.0
        assert sample.x1.var() == pytest.approx(1.0 / 3.0, abs=0.01)
