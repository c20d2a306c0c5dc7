"""Shape-vector validation, the similarity metric, and intersection
detection/repair, cross-checked against the naive oracles."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from foilmorph.errors import DimensionMismatch, InfeasibleShape
from foilmorph.geometry import (
    DEFAULT_F,
    as_selig_vector,
    detect_self_intersection,
    repair_self_intersection,
    similarity,
    station_x,
    stations,
    to_coordinates,
    write_coordinate_text,
)

from .conftest import four_digit_foil
from .oracles import segment_pair_oracle, trapezoid_similarity

F_SMALL = 20

shape_vectors = arrays(
    np.float64,
    F_SMALL + 1,
    elements=st.floats(-0.5, 0.5, allow_nan=False, width=64),
)


class TestValidation:
    def test_accepts_default_length(self):
        v = as_selig_vector(np.zeros(DEFAULT_F + 1))
        assert v.shape == (DEFAULT_F + 1,)
        assert v.dtype == np.float64

    def test_rejects_odd_station_count(self):
        with pytest.raises(ValueError, match="even"):
            as_selig_vector(np.zeros(DEFAULT_F))

    def test_rejects_nan(self):
        v = np.zeros(F_SMALL + 1)
        v[3] = np.nan
        with pytest.raises(ValueError, match="finite"):
            as_selig_vector(v)

    def test_rejects_wrong_explicit_f(self):
        with pytest.raises(DimensionMismatch):
            as_selig_vector(np.zeros(F_SMALL + 1), F=DEFAULT_F)

    def test_rejects_matrix(self):
        with pytest.raises(ValueError):
            as_selig_vector(np.zeros((3, 5)))


class TestStations:
    def test_stations_span(self):
        s = stations(DEFAULT_F)
        assert s[0] == 0.0
        assert s[-1] == 2.0
        assert s[DEFAULT_F // 2] == 1.0

    def test_station_x_symmetric_about_le(self):
        x = station_x(DEFAULT_F)
        assert x[DEFAULT_F // 2] == 0.0
        assert x[0] == x[-1] == 1.0
        np.testing.assert_allclose(x, x[::-1])


class TestSimilarity:
    @given(a=shape_vectors)
    def test_self_similarity_zero(self, a):
        assert similarity(a, a) == 0.0

    @given(a=shape_vectors, b=shape_vectors)
    def test_symmetry(self, a, b):
        assert similarity(a, b) == similarity(b, a)

    @given(a=shape_vectors, b=shape_vectors, c=shape_vectors)
    def test_triangle_inequality(self, a, b, c):
        assert similarity(a, c) <= similarity(a, b) + similarity(b, c) + 1e-12

    @given(a=shape_vectors, b=shape_vectors)
    def test_matches_trapezoid_oracle(self, a, b):
        assert similarity(a, b) == pytest.approx(
            trapezoid_similarity(a, b), abs=1e-12
        )

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            similarity(np.zeros(21), np.zeros(31))

    def test_known_value(self):
        # constant offset d over all stations: S' = (2/F)(F+1)d
        a = np.zeros(F_SMALL + 1)
        b = np.full(F_SMALL + 1, 0.25)
        expected = 2.0 / F_SMALL * (F_SMALL + 1) * 0.25
        assert similarity(a, b) == pytest.approx(expected, abs=1e-15)


def random_shape(rng, F=F_SMALL, scale=0.05):
    """Random shape with the leading edge anchored at zero."""
    y = rng.normal(0.0, scale, F + 1)
    y[F // 2] = 0.0
    return y


class TestDetector:
    def test_feasible_foil_passes(self):
        assert not detect_self_intersection(four_digit_foil(0.1, 0.01))

    def test_crossed_surfaces_detected(self):
        y = four_digit_foil(0.1, 0.0)
        half = DEFAULT_F // 2
        # swap a run of upper and lower values: guaranteed crossing
        k = half // 2
        y[k], y[DEFAULT_F - k] = y[DEFAULT_F - k], y[k]
        assert detect_self_intersection(y)

    def test_interior_touch_detected(self):
        y = four_digit_foil(0.1, 0.0)
        half = DEFAULT_F // 2
        k = half // 2
        y[k] = y[DEFAULT_F - k]  # zero thickness at one interior station
        assert detect_self_intersection(y)

    def test_sealed_trailing_edge_alone_not_flagged(self):
        y = four_digit_foil(0.1, 0.0)
        y[0] = y[-1] = 0.01
        assert not detect_self_intersection(y)

    def test_crossed_trailing_edge_flagged(self):
        y = four_digit_foil(0.1, 0.0)
        y[0], y[-1] = y[-1] - 0.01, y[0] + 0.01
        assert detect_self_intersection(y)

    def test_minimal_vector(self):
        # F=2: only the TE pair and the LE exist; nothing to check
        assert not detect_self_intersection(np.array([0.1, 0.0, -0.1]))

    @pytest.mark.parametrize("seed", range(30))
    def test_agrees_with_segment_oracle(self, seed):
        rng = np.random.default_rng(seed)
        y = random_shape(rng)
        thickness = y[F_SMALL // 2 - 1 :: -1] - y[F_SMALL // 2 + 1 :]
        if np.any(np.abs(thickness) < 1e-12):
            pytest.skip("degenerate draw")
        assert detect_self_intersection(y) == segment_pair_oracle(y)


class TestRepair:
    def test_identity_on_feasible(self):
        y = four_digit_foil(0.08, 0.02)
        out = repair_self_intersection(y)
        np.testing.assert_array_equal(out, y)

    def test_repairs_pinched_section(self):
        y = four_digit_foil(0.08, 0.0)
        half = DEFAULT_F // 2
        k = half // 3
        # pinch: cross the surfaces locally
        y[k : k + 3] -= 0.12
        assert detect_self_intersection(y)
        out = repair_self_intersection(y)
        assert not detect_self_intersection(out)

    def test_idempotent(self):
        y = four_digit_foil(0.08, 0.0)
        y[30:35] -= 0.12
        once = repair_self_intersection(y)
        twice = repair_self_intersection(once)
        np.testing.assert_array_equal(once, twice)

    def test_endpoints_preserved(self):
        y = four_digit_foil(0.08, 0.0)
        y[40:44] -= 0.12
        out = repair_self_intersection(y)
        assert out[0] == y[0]
        assert out[-1] == y[-1]
        assert out[DEFAULT_F // 2] == y[DEFAULT_F // 2]

    def test_crossed_te_unrepairable(self):
        y = four_digit_foil(0.08, 0.0)
        y[0], y[-1] = -0.05, 0.05
        with pytest.raises(InfeasibleShape):
            repair_self_intersection(y)

    @settings(max_examples=50, deadline=None)
    @given(seed=st.integers(0, 10_000))
    def test_repaired_thickness_at_least_epsilon(self, seed):
        rng = np.random.default_rng(seed)
        y = four_digit_foil(0.06, 0.0, F=F_SMALL)
        k = rng.integers(2, F_SMALL // 2 - 1)
        y[k] -= rng.uniform(0.0, 0.2)
        if not detect_self_intersection(y):
            return  # feasible input: repair is the identity by contract
        try:
            out = repair_self_intersection(y, epsilon=1e-3)
        except InfeasibleShape:
            return
        half = F_SMALL // 2
        thickness = out[half - 1 :: -1][:-1] - out[half + 1 :][:-1]
        assert np.all(thickness >= 1e-3 * (1.0 - 1e-9))


class TestSerialization:
    def test_coordinate_order(self):
        y = four_digit_foil(0.1, 0.0)
        coords = to_coordinates(y)
        assert coords.shape == (DEFAULT_F + 1, 2)
        assert coords[0, 0] == 1.0  # upper TE first
        assert coords[DEFAULT_F // 2, 0] == 0.0  # LE in the middle

    def test_write_then_parse_round_trip(self):
        from foilmorph.dataset import normalize_and_resample, parse_coordinate_file

        y = four_digit_foil(0.1, 0.015)
        text = write_coordinate_text("round trip", y)
        record = parse_coordinate_file(text)
        assert record.name == "round trip"
        back = normalize_and_resample(record, DEFAULT_F)
        assert similarity(back, y) == pytest.approx(0.0, abs=1e-12)
