import math

import numpy as np
import pytest

from timeline3d.design import (
    ChronologicalLinear,
    ChronologicalLog,
    ConcentricCylinders,
    ConvexArc,
    Cubic,
    Faceted,
    FlatLine,
    Helicoid,
    HorizontalPlane,
    LayoutSpec,
    MultiplePlanes,
    Relative,
    Segmented,
    Sequential,
    Spherical,
    TimelineDesign,
    VerticalPlane,
    helicoid_step,
    preset,
)
from timeline3d.errors import (
    DegenerateOperator,
    InvalidDesign,
    MissingBaseline,
    NonMonotonicTimestamps,
    OutOfDomain,
    UnknownCentral,
)
from timeline3d.layout import (
    COLLAPSED,
    LOD_SKIPPED,
    VISIBLE,
    Branch,
    BranchSlot,
    CollapseRange,
    CutBox,
    CutPlane,
    LayoutContext,
    apply_cutaway,
    barycenter,
    billboard_quaternion,
    base_branch_id,
    quat_multiply,
    quat_normalize,
    quat_rotate,
    recentral,
    scale_map,
    solve_layout,
)
from timeline3d.model import Mesh, ObjectSnapshot, Sphere

from conftest import build_dataset, sphere_snap


def line_design(**overrides):
    base = dict(
        scale=Sequential(unit_length=1.0),
        layout=LayoutSpec(),
        representation=FlatLine(direction=(1.0, 0.0, 0.0)),
        support=VerticalPlane(),
    )
    base.update(overrides)
    return TimelineDesign(**base)


def chain_dataset(n, objects=1):
    cols = []
    for i in range(n):
        cols.append([sphere_snap(f"o{j}-{i}", center=(0.3 * j, 0.0, 0.0)) for j in range(objects)])
    return build_dataset(cols)


def single_branch(n, bid="timeline", obj=0):
    slots = tuple(BranchSlot(time_index=i, members=(f"o{obj}-{i}",)) for i in range(n))
    return Branch(id=bid, slots=slots)


def positions_by_index(result, branch_id):
    return {
        p.time_index: p.position for p in result.placements if p.branch_id == branch_id
    }


class TestScaleMap:
    def test_sequential_example(self):
        m = scale_map(Sequential(unit_length=0.3), [0.0, 5.0, 6.0, 20.0])
        assert m.offsets == pytest.approx((0.0, 0.3, 0.6, 0.9), abs=1e-15)
        assert m.baseline_offset == 0.0

    def test_linear_89s_example(self):
        m = scale_map(ChronologicalLinear(unit_length=1.0 / 89.0), [0.0, 89.0, 178.0])
        assert m.offsets == pytest.approx((0.0, 1.0, 2.0), abs=1e-12)

    def test_log_example(self):
        unit = 0.7
        m = scale_map(ChronologicalLog(unit_length=unit, epsilon=89.0), [0.0, 89.0, 267.0])
        expected = (0.0, unit * math.log(2.0), unit * math.log(4.0))
        assert m.offsets == pytest.approx(expected, abs=1e-12)

    def test_relative_shifts_to_zero_and_reports_baseline(self):
        m = scale_map(Relative(unit_length=2.0, baselines=0), [0.0, 10.0, 30.0],
                      branch_baseline=1)
        assert m.offsets == pytest.approx((0.0, 20.0, 60.0), abs=1e-12)
        # first slot sits 20 m before the baseline event
        assert m.baseline_offset == pytest.approx(-20.0, abs=1e-12)

    def test_relative_requires_baseline(self):
        with pytest.raises(MissingBaseline):
            scale_map(Relative(unit_length=1.0, baselines=0), [0.0, 1.0])
        with pytest.raises(MissingBaseline):
            scale_map(Relative(unit_length=1.0, baselines=0), [0.0, 1.0], branch_baseline=5)

    def test_non_monotonic_rejected(self):
        with pytest.raises(NonMonotonicTimestamps):
            scale_map(Sequential(unit_length=1.0), [0.0, 2.0, 2.0])

    def test_offsets_non_decreasing_property(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            stamps = np.cumsum(rng.uniform(0.1, 5.0, size=8)).tolist()
            for scale in (
                ChronologicalLinear(unit_length=0.4),
                ChronologicalLog(unit_length=0.4, epsilon=2.0),
                Sequential(unit_length=0.4),
            ):
                offsets = scale_map(scale, stamps).offsets
                assert offsets[0] == 0.0
                assert all(b >= a for a, b in zip(offsets, offsets[1:]))


class TestSolveBasics:
    def test_three_point_flat_line(self):
        ds = chain_dataset(3)
        result = solve_layout(ds, [single_branch(3)], line_design(), ("timeline", 0))
        pos = positions_by_index(result, "timeline")
        assert pos[0] == pytest.approx((0.0, 0.0, 0.0), abs=1e-15)
        assert pos[1] == pytest.approx((1.0, 0.0, 0.0), abs=1e-15)
        assert pos[2] == pytest.approx((2.0, 0.0, 0.0), abs=1e-15)
        assert all(p.visibility == VISIBLE for p in result.placements)
        assert result.central == ("timeline", 0)

    def test_central_reanchors_to_front(self):
        ds = chain_dataset(3)
        result = solve_layout(ds, [single_branch(3)], line_design(), ("timeline", 1))
        pos = positions_by_index(result, "timeline")
        assert pos[0] == pytest.approx((-1.0, 0.0, 0.0), abs=1e-15)
        assert pos[1] == pytest.approx((0.0, 0.0, 0.0), abs=1e-15)
        assert pos[2] == pytest.approx((1.0, 0.0, 0.0), abs=1e-15)

    def test_unknown_central(self):
        ds = chain_dataset(3)
        with pytest.raises(UnknownCentral):
            solve_layout(ds, [single_branch(3)], line_design(), ("ghost", 0))
        with pytest.raises(UnknownCentral):
            solve_layout(ds, [single_branch(3)], line_design(), ("timeline", 99))

    def test_invalid_design_rejected(self):
        ds = chain_dataset(3)
        design = line_design(
            layout=LayoutSpec(faceting=Faceted(branch_count=2)),
            representation=Helicoid(
                axis_point=(0.0, 0.0, 0.0), radius=1.2, points_per_loop=20, pitch=0.4
            ),
            support=VerticalPlane(),
        )
        with pytest.raises(InvalidDesign):
            solve_layout(ds, [single_branch(3)], design, ("timeline", 0))

    def test_bad_lod_stride(self):
        ds = chain_dataset(3)
        with pytest.raises(ValueError):
            solve_layout(ds, [single_branch(3)], line_design(), ("timeline", 0), lod_stride=0)

    def test_every_slot_appears_exactly_once(self):
        ds = chain_dataset(8, objects=2)
        branches = [single_branch(8, "a", 0), single_branch(8, "b", 1)]
        design = line_design(layout=LayoutSpec(faceting=Faceted(branch_count=2)))
        result = solve_layout(ds, branches, design, ("a", 3))
        keys = [(p.branch_id, p.time_index) for p in result.placements]
        assert len(keys) == len(set(keys)) == 16

    def test_quaternions_normalized(self):
        ds = chain_dataset(5)
        design = line_design(representation=ConvexArc(center=(0.0, 0.0, 0.0), radius=4.0))
        result = solve_layout(ds, [single_branch(5)], design, ("timeline", 2))
        for p in result.placements:
            w, x, y, z = p.orientation
            assert abs(math.sqrt(w * w + x * x + y * y + z * z) - 1.0) < 1e-9


class TestFacetedSupports:
    def make(self, support, rep=None, branch_count=2, gap=0.5):
        ds = chain_dataset(4, objects=branch_count)
        branches = [single_branch(4, f"b{j}", j) for j in range(branch_count)]
        design = line_design(
            layout=LayoutSpec(faceting=Faceted(branch_count=branch_count), branch_gap=gap),
            representation=rep or ConvexArc(center=(0.0, 0.0, 0.0), radius=4.0),
            support=support,
        )
        return solve_layout(ds, branches, design, ("b0", 0))

    def test_vertical_plane_exact_offset(self):
        result = self.make(VerticalPlane())
        p0 = positions_by_index(result, "b0")
        p1 = positions_by_index(result, "b1")
        for i in range(4):
            assert p1[i][0] == p0[i][0]
            assert p1[i][1] == p0[i][1] + 0.5
            assert p1[i][2] == p0[i][2]

    def test_horizontal_plane_offsets_depth(self):
        result = self.make(HorizontalPlane())
        p0 = positions_by_index(result, "b0")
        p1 = positions_by_index(result, "b1")
        for i in range(4):
            assert p1[i] == pytest.approx((p0[i][0], p0[i][1], p0[i][2] - 0.5), abs=1e-12)

    def test_cubic_row_major(self):
        result = self.make(Cubic(rows=2, cols=2), branch_count=4)
        base = positions_by_index(result, "b0")
        for j, (row, col) in enumerate([(0, 0), (0, 1), (1, 0), (1, 1)]):
            got = positions_by_index(result, f"b{j}")
            for i in range(4):
                expected = (base[i][0], base[i][1] + row * 0.5, base[i][2] - col * 0.5)
                assert got[i] == pytest.approx(expected, abs=1e-12)

    def test_multiple_planes_row_major(self):
        result = self.make(MultiplePlanes(count=2, plane_gap=1.5), branch_count=4)
        base = positions_by_index(result, "b0")
        # 4 branches over 2 planes: 2 per plane, rows within a plane
        expect = [(0, 0), (1, 0), (0, 1), (1, 1)]  # (row, plane)
        for j, (row, plane) in enumerate(expect):
            got = positions_by_index(result, f"b{j}")
            for i in range(4):
                expected = (base[i][0], base[i][1] + row * 0.5, base[i][2] - plane * 1.5)
                assert got[i] == pytest.approx(expected, abs=1e-12)

    def test_concentric_cylinders_grow_radius(self):
        rep = ConvexArc(center=(0.0, 0.0, 0.0), radius=4.0)
        result = self.make(ConcentricCylinders(radius_step=0.5), rep=rep)
        for p in result.placements:
            r = math.sqrt(p.position[0] ** 2 + p.position[1] ** 2 + p.position[2] ** 2)
            expected = 4.0 if p.branch_id == "b0" else 4.5
            assert r == pytest.approx(expected, abs=1e-9)

    def test_concentric_cylinders_flat_line_uses_depth(self):
        rep = FlatLine(direction=(1.0, 0.0, 0.0))
        result = self.make(ConcentricCylinders(radius_step=0.7), rep=rep)
        p0 = positions_by_index(result, "b0")
        p1 = positions_by_index(result, "b1")
        for i in range(4):
            assert p1[i] == pytest.approx((p0[i][0], p0[i][1], p0[i][2] - 0.7), abs=1e-12)

    def test_facet_rigidity_pairwise(self):
        result = self.make(VerticalPlane(), branch_count=3)
        p0 = positions_by_index(result, "b0")
        for j in (1, 2):
            pj = positions_by_index(result, f"b{j}")
            deltas = {
                i: tuple(pj[i][c] - p0[i][c] for c in range(3)) for i in range(4)
            }
            first = deltas[0]
            for d in deltas.values():
                assert d == pytest.approx(first, abs=1e-9)


class TestHelicoidLayout:
    def test_periodicity_80_points(self):
        ds = chain_dataset(80)
        design = preset("helicoid-unified")
        rep = design.representation
        branch = single_branch(80)
        result = solve_layout(ds, [branch], design, ("timeline", 0))
        pos = positions_by_index(result, "timeline")
        ax, az = rep.axis_point[0], rep.axis_point[2]
        for i in range(60):
            a, b = pos[i], pos[i + 20]
            az_a = math.atan2(a[0] - ax, -(a[2] - az))
            az_b = math.atan2(b[0] - ax, -(b[2] - az))
            delta = (az_b - az_a + math.pi) % (2 * math.pi) - math.pi
            assert abs(delta) < 1e-9
            assert b[1] - a[1] == pytest.approx(rep.pitch, abs=1e-9)

    def test_four_full_loops(self):
        ds = chain_dataset(80)
        design = preset("helicoid-unified")
        result = solve_layout(ds, [single_branch(80)], design, ("timeline", 0))
        pos = positions_by_index(result, "timeline")
        span = pos[79][1] - pos[0][1]
        assert span == pytest.approx(79 / 20 * design.representation.pitch, abs=1e-9)


class TestVisibility:
    def test_collapse_example_counts(self):
        ds = chain_dataset(40)
        result = solve_layout(
            ds,
            [single_branch(40)],
            line_design(),
            ("timeline", 0),
            collapses=[CollapseRange("timeline", 10, 19)],
        )
        visible = [p for p in result.placements if p.visibility == VISIBLE]
        collapsed = [p for p in result.placements if p.visibility == COLLAPSED]
        assert len(visible) == 30
        assert len(collapsed) == 10
        assert len(result.gap_indicators) == 1
        gap = result.gap_indicators[0]
        assert gap.collapsed_count == 10
        assert (gap.start_index, gap.end_index) == (10, 19)

    def test_gap_sits_between_span_ends(self):
        ds = chain_dataset(40)
        result = solve_layout(
            ds,
            [single_branch(40)],
            line_design(),
            ("timeline", 0),
            collapses=[CollapseRange("timeline", 10, 19)],
        )
        pos = positions_by_index(result, "timeline")
        gap = result.gap_indicators[0]
        assert pos[10][0] <= gap.position[0] <= pos[19][0]

    def test_disjoint_ranges_make_two_gaps(self):
        ds = chain_dataset(20)
        result = solve_layout(
            ds,
            [single_branch(20)],
            line_design(),
            ("timeline", 0),
            collapses=[CollapseRange("timeline", 5, 7), CollapseRange("timeline", 12, 13)],
        )
        assert len(result.gap_indicators) == 2
        counts = sorted(g.collapsed_count for g in result.gap_indicators)
        assert counts == [2, 3]

    def test_adjacent_ranges_merge(self):
        ds = chain_dataset(20)
        result = solve_layout(
            ds,
            [single_branch(20)],
            line_design(),
            ("timeline", 0),
            collapses=[CollapseRange("timeline", 5, 7), CollapseRange("timeline", 8, 10)],
        )
        assert len(result.gap_indicators) == 1
        assert result.gap_indicators[0].collapsed_count == 6

    def test_reversed_range_rejected(self):
        with pytest.raises(ValueError):
            CollapseRange("timeline", 7, 5)

    def test_lod_keeps_central_congruence(self):
        ds = chain_dataset(40)
        result = solve_layout(
            ds, [single_branch(40)], line_design(), ("timeline", 10), lod_stride=3
        )
        for p in result.placements:
            if p.visibility == VISIBLE:
                assert (p.time_index - 10) % 3 == 0
            else:
                assert p.visibility == LOD_SKIPPED
                assert (p.time_index - 10) % 3 != 0
        central = [p for p in result.placements if p.time_index == 10]
        assert central[0].visibility == VISIBLE

    def test_collapse_wins_over_lod(self):
        ds = chain_dataset(40)
        result = solve_layout(
            ds,
            [single_branch(40)],
            line_design(),
            ("timeline", 0),
            collapses=[CollapseRange("timeline", 6, 9)],
            lod_stride=2,
        )
        flags = {p.time_index: p.visibility for p in result.placements}
        for i in range(6, 10):
            assert flags[i] == COLLAPSED

    def test_central_only_design(self):
        ds = chain_dataset(10)
        design = preset("no-timeline")
        result = solve_layout(ds, [single_branch(10)], design, ("timeline", 4))
        visible = [p for p in result.placements if p.visibility == VISIBLE]
        assert len(visible) == 1
        assert visible[0].time_index == 4
        assert all(
            p.visibility == LOD_SKIPPED for p in result.placements if p.time_index != 4
        )

    def test_conservation_of_slots(self):
        ds = chain_dataset(40)
        rng = np.random.default_rng(3)
        for _ in range(20):
            start = int(rng.integers(0, 35))
            end = start + int(rng.integers(0, 5))
            stride = int(rng.integers(1, 5))
            result = solve_layout(
                ds,
                [single_branch(40)],
                line_design(),
                ("timeline", 0),
                collapses=[CollapseRange("timeline", start, end)],
                lod_stride=stride,
            )
            assert len(result.placements) == 40
            total = sum(
                1
                for p in result.placements
                if p.visibility in (VISIBLE, COLLAPSED, LOD_SKIPPED, "filtered-out")
            )
            assert total == 40


class TestSegmented:
    def design(self, period=4):
        return line_design(layout=LayoutSpec(segmentation=Segmented(period=period)))

    def test_pseudo_branch_split(self):
        ds = chain_dataset(12)
        result = solve_layout(ds, [single_branch(12)], self.design(), ("timeline", 0))
        ids = {p.branch_id for p in result.placements}
        assert ids == {"timeline/seg0", "timeline/seg1", "timeline/seg2"}
        for bid in ids:
            assert base_branch_id(bid) == "timeline"

    def test_segments_align_at_start(self):
        ds = chain_dataset(12)
        result = solve_layout(ds, [single_branch(12)], self.design(), ("timeline", 0))
        pos = {(p.branch_id, p.time_index): p.position for p in result.placements}
        # segment starts all sit at the anchor x, stacked by branch_gap
        for k in range(3):
            p = pos[(f"timeline/seg{k}", 4 * k)]
            assert p[0] == pytest.approx(0.0, abs=1e-12)
            assert p[1] == pytest.approx(0.5 * k, abs=1e-12)

    def test_in_segment_offsets(self):
        ds = chain_dataset(12)
        result = solve_layout(ds, [single_branch(12)], self.design(), ("timeline", 0))
        pos = {(p.branch_id, p.time_index): p.position for p in result.placements}
        assert pos[("timeline/seg1", 5)][0] == pytest.approx(1.0, abs=1e-12)
        assert pos[("timeline/seg2", 11)][0] == pytest.approx(3.0, abs=1e-12)

    def test_central_in_later_segment(self):
        ds = chain_dataset(12)
        result = solve_layout(ds, [single_branch(12)], self.design(), ("timeline", 5))
        assert result.central == ("timeline/seg1", 5)
        pos = {(p.branch_id, p.time_index): p.position for p in result.placements}
        # the central slot's segment is re-anchored so index 5 faces the viewer
        assert pos[("timeline/seg1", 5)][0] == pytest.approx(0.0, abs=1e-12)

    def test_collapse_addresses_base_branch(self):
        ds = chain_dataset(12)
        result = solve_layout(
            ds,
            [single_branch(12)],
            self.design(),
            ("timeline", 0),
            collapses=[CollapseRange("timeline", 5, 6)],
        )
        collapsed = [p for p in result.placements if p.visibility == COLLAPSED]
        assert {p.time_index for p in collapsed} == {5, 6}
        assert result.gap_indicators[0].branch_id == "timeline/seg1"

    def test_last_partial_segment(self):
        ds = chain_dataset(10)
        result = solve_layout(ds, [single_branch(10)], self.design(), ("timeline", 0))
        seg2 = [p for p in result.placements if p.branch_id == "timeline/seg2"]
        assert len(seg2) == 2


class TestSphericalLayout:
    def design(self, loops=3, radius=2.0, unit=0.25):
        return line_design(
            scale=Sequential(unit_length=unit),
            representation=Spherical(center=(0.0, 0.0, 0.0), radius=radius, loops=loops),
        )

    def test_equidistance(self):
        ds = chain_dataset(30)
        result = solve_layout(ds, [single_branch(30)], self.design(), ("timeline", 12))
        for p in result.placements:
            r = math.sqrt(sum(c * c for c in p.position))
            assert abs(r - 2.0) < 1e-9

    def test_anchored_at_pole_not_recentered(self):
        ds = chain_dataset(30)
        r1 = solve_layout(ds, [single_branch(30)], self.design(), ("timeline", 0))
        r2 = solve_layout(ds, [single_branch(30)], self.design(), ("timeline", 12))
        assert positions_by_index(r1, "timeline") == positions_by_index(r2, "timeline")
        assert r1.placements[0].position == pytest.approx((0.0, 2.0, 0.0), abs=1e-9)

    def test_overrun_raises_out_of_domain(self):
        ds = chain_dataset(40)
        with pytest.raises(OutOfDomain):
            solve_layout(
                ds, [single_branch(40)], self.design(unit=2.0), ("timeline", 0)
            )

    def test_inversion_spacing_integration_oracle(self):
        from scipy.integrate import quad

        from timeline3d.curves import SphereSpiralCurve

        design = self.design()
        curve = SphereSpiralCurve(design.representation)
        ds = chain_dataset(30)
        result = solve_layout(ds, [single_branch(30)], design, ("timeline", 0))
        arcs = sorted(
            (p.time_index, p.arc_length) for p in result.placements
        )
        for (i, s0), (_, s1) in zip(arcs, arcs[1:]):
            t0, t1 = curve.param_at(s0), curve.param_at(s1)
            measured, _ = quad(curve.speed, t0, t1, epsabs=1e-12, limit=200)
            assert measured == pytest.approx(s1 - s0, abs=1e-6)


class TestRecentral:
    def context(self, n=9, design=None):
        ds = chain_dataset(n)
        design = design or line_design()
        branches = (single_branch(n),)
        return LayoutContext(
            dataset=ds, branches=branches, design=design, collapses=(), lod_stride=1
        )

    def test_idempotent(self):
        ctx = self.context()
        first = solve_layout(ctx.dataset, ctx.branches, ctx.design, ("timeline", 3))
        again = recentral(ctx, ("timeline", 3))
        assert first == again

    def test_matches_direct_resolve(self):
        ctx = self.context()
        assert recentral(ctx, ("timeline", 5)) == solve_layout(
            ctx.dataset, ctx.branches, ctx.design, ("timeline", 5)
        )

    def test_flat_line_translates(self):
        ctx = self.context()
        a = solve_layout(ctx.dataset, ctx.branches, ctx.design, ("timeline", 2))
        b = recentral(ctx, ("timeline", 4))
        pa, pb = positions_by_index(a, "timeline"), positions_by_index(b, "timeline")
        for i in range(9):
            assert pb[i][0] == pytest.approx(pa[i][0] - 2.0, abs=1e-12)
            assert pb[i][1:] == pytest.approx(pa[i][1:], abs=1e-15)

    def test_arc_rotates_about_center(self):
        design = line_design(representation=ConvexArc(center=(0.0, 0.0, 0.0), radius=4.0))
        ctx = self.context(design=design)
        a = solve_layout(ctx.dataset, ctx.branches, ctx.design, ("timeline", 3))
        b = recentral(ctx, ("timeline", 4))
        theta = -1.0 / 4.0  # -(s_{i+1} - s_i) / R
        cos_t, sin_t = math.cos(theta), math.sin(theta)
        pa, pb = positions_by_index(a, "timeline"), positions_by_index(b, "timeline")
        for i in range(9):
            x, _, z = pa[i]
            rotated = (x * cos_t + (-z) * sin_t, 0.0, -(-x * sin_t + (-z) * cos_t))
            assert pb[i] == pytest.approx(rotated, abs=1e-9)

    def test_unknown_central(self):
        ctx = self.context()
        with pytest.raises(UnknownCentral):
            recentral(ctx, ("timeline", 99))


class TestBillboard:
    def test_faces_viewer_horizontally(self):
        for position in ((3.0, 1.0, -4.0), (-2.0, 0.0, -1.0), (5.0, -2.0, 2.0)):
            q = billboard_quaternion(position)
            facing = quat_rotate(q, (0.0, 0.0, 1.0))
            h = math.hypot(position[0], position[2])
            expected = (-position[0] / h, 0.0, -position[2] / h)
            assert facing == pytest.approx(expected, abs=1e-12)

    def test_directly_above_keeps_identity(self):
        assert billboard_quaternion((0.0, 5.0, 0.0)) == (1.0, 0.0, 0.0, 0.0)

    def test_quat_helpers_roundtrip(self):
        q = quat_normalize((0.9, 0.1, 0.3, -0.2))
        qinv = (q[0], -q[1], -q[2], -q[3])
        v = (0.3, -1.2, 2.0)
        back = quat_rotate(qinv, quat_rotate(q, v))
        assert back == pytest.approx(v, abs=1e-12)
        ident = quat_multiply(q, qinv)
        assert ident == pytest.approx((1.0, 0.0, 0.0, 0.0), abs=1e-12)


class TestCutaway:
    def snaps(self):
        return [
            ObjectSnapshot(id="w", shape=Sphere(center=(-1.0, 0.0, 0.0), radius=0.2)),
            ObjectSnapshot(id="e", shape=Sphere(center=(1.0, 0.0, 0.0), radius=0.2)),
            ObjectSnapshot(id="n", shape=Sphere(center=(0.0, 1.0, 0.0), radius=0.2)),
        ]

    def test_plane_beyond_scene_clips_nothing(self):
        snaps = self.snaps()
        bary = barycenter(snaps)
        out = apply_cutaway(snaps, CutPlane(normal=(1.0, 0.0, 0.0), offset=100.0), bary)
        assert not any(d.clipped for d in out.values())

    def test_plane_through_barycenter(self):
        snaps = self.snaps()
        bary = barycenter(snaps)
        out = apply_cutaway(snaps, CutPlane(normal=(1.0, 0.0, 0.0)), bary)
        assert out["w"].clipped
        assert not out["e"].clipped
        assert not out["n"].clipped

    def test_consistent_across_time_points(self):
        # same operator, every slot: objects west of the slot barycenter cut
        for shift in (0.0, 5.0, -3.0):
            snaps = [
                ObjectSnapshot(id="w", shape=Sphere(center=(shift - 1.0, 0.0, 0.0), radius=0.2)),
                ObjectSnapshot(id="e", shape=Sphere(center=(shift + 1.0, 0.0, 0.0), radius=0.2)),
            ]
            out = apply_cutaway(snaps, CutPlane(normal=(1.0, 0.0, 0.0)), barycenter(snaps))
            assert out["w"].clipped and not out["e"].clipped

    def test_box_clips_inside(self):
        snaps = self.snaps()
        bary = barycenter(snaps)
        op = CutBox(center_offset=(-1.0 - bary[0], -bary[1], -bary[2]),
                    half_extents=(0.5, 0.5, 0.5))
        out = apply_cutaway(snaps, op, bary)
        assert out["w"].clipped
        assert not out["e"].clipped

    def test_degenerate_operators(self):
        with pytest.raises(DegenerateOperator):
            apply_cutaway(self.snaps(), CutPlane(normal=(0.0, 0.0, 0.0)), (0.0, 0.0, 0.0))
        with pytest.raises(DegenerateOperator):
            apply_cutaway(
                self.snaps(),
                CutBox(center_offset=(0.0, 0.0, 0.0), half_extents=(1.0, 0.0, 1.0)),
                (0.0, 0.0, 0.0),
            )

    def test_mesh_partial_counts(self):
        verts = ((-1.0, 0.0, 0.0), (-0.5, 0.0, 0.0), (0.5, 0.0, 0.0), (1.0, 0.0, 0.0))
        mesh = ObjectSnapshot(id="m", shape=Mesh(vertices=verts, triangles=((0, 1, 2),)))
        out = apply_cutaway([mesh], CutPlane(normal=(1.0, 0.0, 0.0)), (0.0, 0.0, 0.0))
        assert not out["m"].clipped
        assert out["m"].clipped_vertices == 2
        assert out["m"].total_vertices == 4

    def test_mesh_fully_clipped_only_when_all_vertices_cut(self):
        verts = ((-1.0, 0.0, 0.0), (-0.5, 0.0, 0.0), (-0.7, 0.2, 0.0), (-0.9, -0.1, 0.0))
        mesh = ObjectSnapshot(id="m", shape=Mesh(vertices=verts, triangles=((0, 1, 2),)))
        out = apply_cutaway([mesh], CutPlane(normal=(1.0, 0.0, 0.0)), (0.0, 0.0, 0.0))
        assert out["m"].clipped
        assert out["m"].clipped_vertices == 4


class TestSequentialSpacing:
    def test_arc_lengths_evenly_spaced(self):
        ds = chain_dataset(16)
        for rep in (
            FlatLine(direction=(1.0, 0.0, 0.0)),
            ConvexArc(center=(0.0, 0.0, 0.0), radius=4.0),
        ):
            design = line_design(
                scale=Sequential(unit_length=0.25), representation=rep
            )
            result = solve_layout(ds, [single_branch(16)], design, ("timeline", 7))
            arcs = [p.arc_length for p in sorted(result.placements, key=lambda p: p.time_index)]
            for a, b in zip(arcs, arcs[1:]):
                assert b - a == pytest.approx(0.25, abs=1e-9)

    def test_flat_line_chords_equal(self):
        ds = chain_dataset(10)
        design = line_design(scale=Sequential(unit_length=0.4))
        result = solve_layout(ds, [single_branch(10)], design, ("timeline", 0))
        pos = positions_by_index(result, "timeline")
        for i in range(9):
            d = math.dist(pos[i], pos[i + 1])
            assert d == pytest.approx(0.4, abs=1e-9)
