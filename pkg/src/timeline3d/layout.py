"""Deterministic 3D placement of every (branch, time point) slot.

The solver walks four stages: map temporal distances to arc lengths along
the guiding curve (scale), split branches into pseudo-branches when the
layout is segmented, re-anchor so the central time point sits at the
curve's viewer-facing point, then evaluate the curve and offset each
branch according to the support.  Collapse ranges and level-of-detail
strides only change visibility flags; positions never move, so expanding
a range or changing the stride is always a pure re-flagging.

Everything here is a pure function of immutable inputs; layouts for
several designs may be solved concurrently without shared state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional, Sequence, Union

from . import curves
from .design import (
    ChronologicalLinear,
    ChronologicalLog,
    ConcentricCylinders,
    Cubic,
    FlatLine,
    HorizontalPlane,
    MultiplePlanes,
    Relative,
    Sequential,
    Spherical,
    TimelineDesign,
    VerticalPlane,
    validate_design,
)
from .errors import (
    DegenerateOperator,
    InvalidDesign,
    MissingBaseline,
    NonMonotonicTimestamps,
    UnknownCentral,
)
from .model import Mesh, ObjectSnapshot, S4DDataset, Sphere

Vec3 = tuple[float, float, float]
Quat = tuple[float, float, float, float]  # (w, x, y, z)

VISIBLE = "visible"
COLLAPSED = "collapsed"
FILTERED_OUT = "filtered-out"
LOD_SKIPPED = "lod-skipped"

IDENTITY_QUAT: Quat = (1.0, 0.0, 0.0, 0.0)


# --- scale mapping ---------------------------------------------------------

@dataclass(frozen=True)
class ScaleMap:
    """Arc-length offsets for one branch, anchored at the first slot.

    ``baseline_offset`` is the arc length of the first slot relative to the
    baseline event; zero for every scale kind except Relative.
    """

    offsets: tuple[float, ...]
    baseline_offset: float = 0.0


def scale_map(
    scale,
    timestamps: Sequence[float],
    branch_baseline: Optional[int] = None,
) -> ScaleMap:
    """Map a branch's timestamps to arc-length offsets along the curve.

    ``branch_baseline`` indexes into ``timestamps`` and is required for the
    Relative scale, which aligns branches on their baseline event.
    """
    for a, b in zip(timestamps, timestamps[1:]):
        if b <= a:
            raise NonMonotonicTimestamps(f"timestamps not strictly increasing at {a} -> {b}")
    if isinstance(scale, ChronologicalLinear):
        t0 = timestamps[0]
        return ScaleMap(tuple(scale.unit_length * (t - t0) for t in timestamps))
    if isinstance(scale, ChronologicalLog):
        t0 = timestamps[0]
        return ScaleMap(
            tuple(
                scale.unit_length * math.log1p((t - t0) / scale.epsilon)
                for t in timestamps
            )
        )
    if isinstance(scale, Relative):
        if branch_baseline is None:
            raise MissingBaseline("relative scale needs a baseline index")
        if not 0 <= branch_baseline < len(timestamps):
            raise MissingBaseline(
                f"baseline index {branch_baseline} outside 0..{len(timestamps) - 1}"
            )
        t_base = timestamps[branch_baseline]
        t0 = timestamps[0]
        offsets = tuple(scale.unit_length * (t - t0) for t in timestamps)
        return ScaleMap(offsets, baseline_offset=scale.unit_length * (t0 - t_base))
    if isinstance(scale, Sequential):
        return ScaleMap(tuple(scale.unit_length * i for i in range(len(timestamps))))
    raise TypeError(f"unknown scale {type(scale).__name__}")


# --- branches and results --------------------------------------------------

@dataclass(frozen=True)
class BranchSlot:
    time_index: int
    members: tuple[str, ...]


@dataclass(frozen=True)
class Branch:
    """Ordered content of one timeline branch (time indices increasing)."""

    id: str
    slots: tuple[BranchSlot, ...]

    def __post_init__(self) -> None:
        for a, b in zip(self.slots, self.slots[1:]):
            if b.time_index <= a.time_index:
                raise ValueError(f"branch {self.id} slots out of order")


@dataclass(frozen=True)
class CollapseRange:
    """Inclusive time-index range hidden behind a gap indicator."""

    branch_id: str
    start_index: int
    end_index: int

    def __post_init__(self) -> None:
        if self.start_index > self.end_index:
            raise ValueError(
                f"collapse range reversed: {self.start_index} > {self.end_index}"
            )


@dataclass(frozen=True)
class Placement:
    branch_id: str
    time_index: int
    members: tuple[str, ...]
    arc_length: float
    position: Vec3
    orientation: Quat
    uniform_scale: float
    visibility: str


@dataclass(frozen=True)
class GapIndicator:
    branch_id: str
    start_index: int
    end_index: int
    collapsed_count: int
    position: Vec3


@dataclass(frozen=True)
class LayoutResult:
    placements: tuple[Placement, ...]
    central: tuple[str, int]
    gap_indicators: tuple[GapIndicator, ...]
    uniform_scale: float


@dataclass(frozen=True)
class LayoutContext:
    """Everything solve_layout consumed, kept for later re-solves."""

    dataset: S4DDataset
    branches: tuple[Branch, ...]
    design: TimelineDesign
    collapses: tuple[CollapseRange, ...]
    lod_stride: int


def base_branch_id(branch_id: str) -> str:
    """Strip a segmentation suffix, returning the original branch id."""
    head, sep, tail = branch_id.rpartition("/seg")
    if sep and tail.isdigit():
        return head
    return branch_id


# --- support geometry ------------------------------------------------------

def _support_offsets(
    support, rep, count: int, gap: float
) -> tuple[list[Vec3], list[float]]:
    """Translation and radial growth per pseudo-branch position.

    Planar supports translate congruent copies of the curve; concentric
    cylinders instead grow the curve's radial parameter so each branch
    stays centered on the viewer, with a flat line pushed back in depth
    as the degenerate case.
    """
    translations: list[Vec3] = []
    radial: list[float] = []
    for k in range(count):
        if isinstance(support, VerticalPlane):
            translations.append((0.0, k * gap, 0.0))
            radial.append(0.0)
        elif isinstance(support, HorizontalPlane):
            translations.append((0.0, 0.0, -k * gap))
            radial.append(0.0)
        elif isinstance(support, MultiplePlanes):
            per_plane = max(1, math.ceil(count / support.count))
            plane, row = divmod(k, per_plane)
            translations.append((0.0, row * gap, -plane * support.plane_gap))
            radial.append(0.0)
        elif isinstance(support, Cubic):
            row, col = divmod(k, support.cols)
            translations.append((0.0, row * gap, -col * gap))
            radial.append(0.0)
        elif isinstance(support, ConcentricCylinders):
            if isinstance(rep, FlatLine):
                translations.append((0.0, 0.0, -k * support.radius_step))
                radial.append(0.0)
            else:
                translations.append((0.0, 0.0, 0.0))
                radial.append(k * support.radius_step)
        else:
            raise TypeError(f"unknown support {type(support).__name__}")
    return translations, radial


def billboard_quaternion(position: Vec3) -> Quat:
    """Yaw-only rotation turning the snapshot front (+z) toward the origin.

    Rotating about the vertical axis alone keeps a stable up axis; a slot
    straight above or below the viewer keeps the identity orientation.
    """
    dx, dz = -position[0], -position[2]
    if dx * dx + dz * dz < 1e-24:
        return IDENTITY_QUAT
    alpha = math.atan2(dx, dz)
    return (math.cos(alpha / 2.0), 0.0, math.sin(alpha / 2.0), 0.0)


# --- segmentation ----------------------------------------------------------

@dataclass(frozen=True)
class _PseudoBranch:
    id: str
    base_id: str
    slots: tuple[BranchSlot, ...]
    arc_lengths: tuple[float, ...]  # re-zeroed at the segment start


def _segment(branches: Sequence[Branch], design: TimelineDesign,
             scale_maps: dict[str, ScaleMap]) -> list[_PseudoBranch]:
    seg = design.layout.segmentation
    out: list[_PseudoBranch] = []
    for branch in branches:
        offsets = scale_maps[branch.id].offsets
        if seg is None:
            out.append(_PseudoBranch(branch.id, branch.id, branch.slots, offsets))
            continue
        period = seg.period
        for k in range(0, math.ceil(len(branch.slots) / period)):
            chunk = branch.slots[k * period:(k + 1) * period]
            base = offsets[k * period]
            arcs = tuple(offsets[k * period + i] - base for i in range(len(chunk)))
            out.append(_PseudoBranch(f"{branch.id}/seg{k}", branch.id, chunk, arcs))
    return out


# --- the solver ------------------------------------------------------------

def solve_layout(
    dataset: S4DDataset,
    branches: Sequence[Branch],
    design: TimelineDesign,
    central: tuple[str, int],
    collapses: Sequence[CollapseRange] = (),
    lod_stride: int = 1,
) -> LayoutResult:
    """Place every slot of every branch on the design's guiding curve.

    ``central`` names a (branch id, time index) slot; the whole layout
    slides along the curve so that slot sits at the viewer-facing anchor.
    A spherical representation is the exception: its spiral starts at the
    north pole and every point is equidistant from the viewer already, so
    the central slot is only flagged, not moved to.
    """
    report = validate_design(design)
    if not report.ok:
        detail = "; ".join(v.message for v in report.hard_errors)
        raise InvalidDesign(detail)
    if lod_stride < 1:
        raise ValueError(f"lod_stride must be >= 1, got {lod_stride}")
    branches = tuple(branches)

    scale_maps: dict[str, ScaleMap] = {}
    for branch in branches:
        stamps = [dataset.timestamps[s.time_index] for s in branch.slots]
        baseline = None
        if isinstance(design.scale, Relative):
            base_time = design.scale.baseline_for(branch.id)
            if base_time is None:
                raise MissingBaseline(f"no baseline for branch {branch.id!r}")
            positions = [i for i, s in enumerate(branch.slots) if s.time_index == base_time]
            if not positions:
                raise MissingBaseline(
                    f"baseline time index {base_time} absent from branch {branch.id!r}"
                )
            baseline = positions[0]
        scale_maps[branch.id] = scale_map(design.scale, stamps, baseline)

    pseudo = _segment(branches, design, scale_maps)

    central_branch = base_branch_id(central[0])
    central_index = central[1]
    central_pb: Optional[_PseudoBranch] = None
    central_arc = 0.0
    for pb in pseudo:
        if pb.base_id != central_branch:
            continue
        for slot, arc in zip(pb.slots, pb.arc_lengths):
            if slot.time_index == central_index:
                central_pb, central_arc = pb, arc
                break
        if central_pb is not None:
            break
    if central_pb is None:
        raise UnknownCentral(f"no slot ({central[0]!r}, {central_index}) in the layout")

    spherical = isinstance(design.representation, Spherical)
    shift = 0.0 if spherical else central_arc

    extent = dataset.extent()
    uniform = design.snapshot_scale / (2.0 * extent) if extent > 0 else 1.0

    translations, radial = _support_offsets(
        design.support, design.representation, len(pseudo), design.layout.branch_gap
    )

    merged = _merge_collapses(collapses)

    placements: list[Placement] = []
    gaps: list[GapIndicator] = []
    for k, pb in enumerate(pseudo):
        curve = curves.make_curve(design.representation, radius_offset=radial[k])
        tx, ty, tz = translations[k]
        branch_ranges = merged.get(pb.base_id, ())
        gap_runs: dict[tuple[int, int], list[tuple[float, int]]] = {}
        for slot, arc in zip(pb.slots, pb.arc_lengths):
            u = arc - shift
            point = curve.eval(u)
            position = (point.position[0] + tx, point.position[1] + ty, point.position[2] + tz)
            covering = _covering_range(branch_ranges, slot.time_index)
            if covering is not None:
                visibility = COLLAPSED
                gap_runs.setdefault(covering, []).append((u, slot.time_index))
            elif design.central_only and not (
                pb is central_pb and slot.time_index == central_index
            ):
                visibility = LOD_SKIPPED
            elif (slot.time_index - central_index) % lod_stride != 0:
                visibility = LOD_SKIPPED
            else:
                visibility = VISIBLE
            placements.append(
                Placement(
                    branch_id=pb.id,
                    time_index=slot.time_index,
                    members=slot.members,
                    arc_length=u,
                    position=position,
                    orientation=billboard_quaternion(position),
                    uniform_scale=uniform,
                    visibility=visibility,
                )
            )
        for (r_start, r_end), hits in sorted(gap_runs.items()):
            # one indicator per contiguous run of collapsed slots
            for run in _contiguous_runs(hits):
                mean_u = sum(u for u, _ in run) / len(run)
                point = curve.eval(mean_u)
                gaps.append(
                    GapIndicator(
                        branch_id=pb.id,
                        start_index=run[0][1],
                        end_index=run[-1][1],
                        collapsed_count=len(run),
                        position=(
                            point.position[0] + tx,
                            point.position[1] + ty,
                            point.position[2] + tz,
                        ),
                    )
                )

    return LayoutResult(
        placements=tuple(placements),
        central=(central_pb.id, central_index),
        gap_indicators=tuple(gaps),
        uniform_scale=uniform,
    )


def _merge_collapses(
    collapses: Sequence[CollapseRange],
) -> dict[str, tuple[tuple[int, int], ...]]:
    """Group ranges per base branch and merge overlaps into disjoint spans."""
    per_branch: dict[str, list[tuple[int, int]]] = {}
    for c in collapses:
        per_branch.setdefault(base_branch_id(c.branch_id), []).append(
            (c.start_index, c.end_index)
        )
    out: dict[str, tuple[tuple[int, int], ...]] = {}
    for bid, ranges in per_branch.items():
        ranges.sort()
        merged: list[tuple[int, int]] = []
        for start, end in ranges:
            if merged and start <= merged[-1][1] + 1:
                merged[-1] = (merged[-1][0], max(merged[-1][1], end))
            else:
                merged.append((start, end))
        out[bid] = tuple(merged)
    return out


def _covering_range(
    ranges: Sequence[tuple[int, int]], index: int
) -> Optional[tuple[int, int]]:
    for r in ranges:
        if r[0] <= index <= r[1]:
            return r
    return None


def _contiguous_runs(
    hits: Sequence[tuple[float, int]]
) -> list[list[tuple[float, int]]]:
    runs: list[list[tuple[float, int]]] = []
    for hit in hits:
        if runs and hit[1] == runs[-1][-1][1] + 1:
            runs[-1].append(hit)
        else:
            runs.append([hit])
    return runs


def recentral(context: LayoutContext, new_central: tuple[str, int]) -> LayoutResult:
    """Re-solve the stored layout inputs with a different central slot.

    Determinism of the solver makes this exactly equal to calling
    solve_layout directly; for flat and circular curves the effect is a
    rigid motion of every branch along the curve.
    """
    return solve_layout(
        context.dataset,
        context.branches,
        context.design,
        new_central,
        context.collapses,
        context.lod_stride,
    )


# --- cut-away --------------------------------------------------------------

@dataclass(frozen=True)
class CutPlane:
    """Half-space clip: drop what lies on the negative side of the plane.

    The plane is expressed in data coordinates relative to each slot's
    barycenter, with a world-aligned orientation; ``offset`` slides it
    along the normal, so offset 0 puts it through the barycenter.
    """

    normal: Vec3
    offset: float = 0.0


@dataclass(frozen=True)
class CutBox:
    """Box clip: drop what lies inside the box.

    ``center_offset`` displaces the box from the slot barycenter.
    """

    center_offset: Vec3
    half_extents: Vec3


CutOperator = Union[CutPlane, CutBox]


@dataclass(frozen=True)
class ClipDecision:
    clipped: bool
    clipped_vertices: int
    total_vertices: int


def check_cutaway_operator(operator: CutOperator) -> None:
    """Raise DegenerateOperator for an operator with no usable geometry."""
    if isinstance(operator, CutPlane):
        n = operator.normal
        if n[0] ** 2 + n[1] ** 2 + n[2] ** 2 < 1e-24:
            raise DegenerateOperator("cut plane has a zero normal")
    elif isinstance(operator, CutBox):
        if any(h <= 0 for h in operator.half_extents):
            raise DegenerateOperator("cut box has zero volume")
    else:
        raise TypeError(f"unknown cut operator {type(operator).__name__}")


def barycenter(snapshots: Sequence[ObjectSnapshot]) -> Vec3:
    """Unweighted mean of the member centroids; origin when empty."""
    if not snapshots:
        return (0.0, 0.0, 0.0)
    n = len(snapshots)
    sx = sum(s.shape.centroid[0] for s in snapshots)
    sy = sum(s.shape.centroid[1] for s in snapshots)
    sz = sum(s.shape.centroid[2] for s in snapshots)
    return (sx / n, sy / n, sz / n)


def apply_cutaway(
    snapshots: Sequence[ObjectSnapshot],
    operator: CutOperator,
    bary: Vec3,
) -> dict[str, ClipDecision]:
    """Clip decisions for one time point's snapshots.

    The operator is interpreted relative to ``bary`` with world-aligned
    axes, so carrying the same operator across time points cuts every
    snapshot the same way relative to its own barycenter.  Spheres are
    decided by their center; meshes report per-vertex counts and clip
    fully only when every vertex is cut.
    """
    check_cutaway_operator(operator)
    out: dict[str, ClipDecision] = {}
    if isinstance(operator, CutPlane):
        n = operator.normal
        norm = math.sqrt(n[0] ** 2 + n[1] ** 2 + n[2] ** 2)
        nx, ny, nz = n[0] / norm, n[1] / norm, n[2] / norm

        def cut(p: Vec3) -> bool:
            return (
                nx * (p[0] - bary[0])
                + ny * (p[1] - bary[1])
                + nz * (p[2] - bary[2])
                + operator.offset
            ) < 0.0

    else:
        cx = bary[0] + operator.center_offset[0]
        cy = bary[1] + operator.center_offset[1]
        cz = bary[2] + operator.center_offset[2]
        hx, hy, hz = operator.half_extents

        def cut(p: Vec3) -> bool:
            return (
                abs(p[0] - cx) <= hx and abs(p[1] - cy) <= hy and abs(p[2] - cz) <= hz
            )

    for snap in snapshots:
        if isinstance(snap.shape, Sphere):
            hit = cut(snap.shape.center)
            out[snap.id] = ClipDecision(hit, 1 if hit else 0, 1)
        else:
            assert isinstance(snap.shape, Mesh)
            hits = sum(1 for v in snap.shape.vertices if cut(v))
            total = len(snap.shape.vertices)
            out[snap.id] = ClipDecision(hits == total, hits, total)
    return out


# --- session-facing helpers ------------------------------------------------

def quat_multiply(a: Quat, b: Quat) -> Quat:
    """Hamilton product a*b in (w, x, y, z) order."""
    aw, ax, ay, az = a
    bw, bx, by, bz = b
    return (
        aw * bw - ax * bx - ay * by - az * bz,
        aw * bx + ax * bw + ay * bz - az * by,
        aw * by - ax * bz + ay * bw + az * bx,
        aw * bz + ax * by - ay * bx + az * bw,
    )


def quat_normalize(q: Quat) -> Quat:
    n = math.sqrt(q[0] ** 2 + q[1] ** 2 + q[2] ** 2 + q[3] ** 2)
    return (q[0] / n, q[1] / n, q[2] / n, q[3] / n)


def quat_rotate(q: Quat, v: Vec3) -> Vec3:
    """Rotate ``v`` by unit quaternion ``q``."""
    w, x, y, z = q
    # q * (0, v) * conj(q), expanded
    tx = 2.0 * (y * v[2] - z * v[1])
    ty = 2.0 * (z * v[0] - x * v[2])
    tz = 2.0 * (x * v[1] - y * v[0])
    return (
        v[0] + w * tx + (y * tz - z * ty),
        v[1] + w * ty + (z * tx - x * tz),
        v[2] + w * tz + (x * ty - y * tx),
    )
