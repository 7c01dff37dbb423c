import pytest

from timeline3d.colormap import (
    NEUTRAL_GRAY,
    QUALITATIVE,
    VIRIDIS_POINTS,
    ColorMap,
    categorical_color,
    viridis,
)

# Frozen reference anchors, regenerated from the matplotlib colormap with:
#   python3 -c "from matplotlib import cm; v = cm.get_cmap('viridis');
#               print([tuple(v(i/32))[:3] for i in (0, 8, 16, 24, 32)])"
REFERENCE_ANCHORS = {
    0: (0.267004, 0.004874, 0.329415),
    8: (0.229739, 0.322361, 0.545706),
    16: (0.127568, 0.566949, 0.550556),
    24: (0.369214, 0.788888, 0.382914),
    32: (0.993248, 0.906157, 0.143936),
}


class TestViridisTable:
    def test_has_33_control_points(self):
        assert len(VIRIDIS_POINTS) == 33

    def test_reference_anchors_frozen(self):
        for index, expected in REFERENCE_ANCHORS.items():
            assert VIRIDIS_POINTS[index] == pytest.approx(expected, abs=1e-12)

    def test_channels_in_unit_range(self):
        for point in VIRIDIS_POINTS:
            for channel in point:
                assert 0.0 <= channel <= 1.0


class TestColorMap:
    def test_lookup_at_anchors(self):
        cmap = viridis((0.0, 1.0))
        for index in (0, 16, 32):
            assert cmap.lookup(index / 32) == pytest.approx(VIRIDIS_POINTS[index], abs=1e-12)

    def test_lookup_interpolates_between_anchors(self):
        cmap = viridis((0.0, 1.0))
        t = (3 + 0.5) / 32
        expected = tuple(
            0.5 * (VIRIDIS_POINTS[3][c] + VIRIDIS_POINTS[4][c]) for c in range(3)
        )
        assert cmap.lookup(t) == pytest.approx(expected, abs=1e-12)

    def test_lookup_clamps(self):
        cmap = viridis((0.0, 1.0))
        assert cmap.lookup(-3.0) == cmap.lookup(0.0)
        assert cmap.lookup(7.0) == cmap.lookup(1.0)

    def test_color_for_normalizes_by_domain(self):
        cmap = viridis((10.0, 20.0))
        assert cmap.color_for(10.0) == pytest.approx(VIRIDIS_POINTS[0], abs=1e-12)
        assert cmap.color_for(20.0) == pytest.approx(VIRIDIS_POINTS[32], abs=1e-12)
        assert cmap.color_for(15.0) == pytest.approx(cmap.lookup(0.5), abs=1e-12)

    def test_degenerate_domain_maps_to_middle(self):
        cmap = viridis((5.0, 5.0))
        assert cmap.color_for(5.0) == pytest.approx(cmap.lookup(0.5), abs=1e-12)
        assert cmap.color_for(999.0) == pytest.approx(cmap.lookup(0.5), abs=1e-12)

    def test_control_points_must_cover_unit_interval(self):
        with pytest.raises(ValueError):
            ColorMap(
                name="bad",
                control_points=((0.2, (0.0, 0.0, 0.0)), (1.0, (1.0, 1.0, 1.0))),
                domain=(0.0, 1.0),
            )

    def test_control_points_must_be_sorted(self):
        with pytest.raises(ValueError):
            ColorMap(
                name="bad",
                control_points=(
                    (0.0, (0.0, 0.0, 0.0)),
                    (0.8, (0.5, 0.5, 0.5)),
                    (0.4, (0.2, 0.2, 0.2)),
                    (1.0, (1.0, 1.0, 1.0)),
                ),
                domain=(0.0, 1.0),
            )


class TestCategorical:
    def test_stable_assignment_by_sorted_order(self):
        ordering = ["alpha", "beta", "gamma"]
        assert categorical_color("alpha", ordering) == QUALITATIVE[0]
        assert categorical_color("beta", ordering) == QUALITATIVE[1]
        assert categorical_color("gamma", ordering) == QUALITATIVE[2]

    def test_palette_wraps_past_ten(self):
        ordering = [f"v{i:02d}" for i in range(12)]
        assert categorical_color("v10", ordering) == QUALITATIVE[0]
        assert categorical_color("v11", ordering) == QUALITATIVE[1]

    def test_unknown_value_raises(self):
        with pytest.raises(ValueError):
            categorical_color("nope", ["a", "b"])

    def test_neutral_gray(self):
        assert NEUTRAL_GRAY == (0.5, 0.5, 0.5)
