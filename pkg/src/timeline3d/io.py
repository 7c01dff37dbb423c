"""File formats: canonical JSON for datasets, designs, scenes, and traces.

Serialization is hand-rolled rather than json.dumps on raw dicts so the
bytes are canonical: fixed field order, floats at 17 significant digits,
data-driven keys sorted, non-finite numbers rejected.  Identical inputs
therefore produce byte-identical files, which is what replay and
determinism checks compare.  Parsing is strict: unknown fields raise a
named error instead of being ignored.
"""

from __future__ import annotations

import json
import math
from typing import Any, Mapping, Optional, Sequence

from . import bench
from .design import (
    ChronologicalLinear,
    ChronologicalLog,
    ConcaveParabola,
    ConcentricCylinders,
    ConvexArc,
    ConvexParabola,
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
    Unified,
    VerticalPlane,
)
from .errors import FormatError
from .layout import CollapseRange, CutBox, CutOperator, CutPlane, quat_rotate
from .model import (
    DatasetMeta,
    Mesh,
    ObjectSnapshot,
    S4DDataset,
    Sphere,
    TimePoint,
    TrackEdge,
)
from .session import (
    Action,
    Collapse,
    Deselect,
    Extend,
    Jump,
    RenderResult,
    Rotate,
    Scale,
    Scroll,
    SelectObject,
    SessionState,
    SetColorField,
    SetCutaway,
    SetFilter,
    SetLod,
)

MESH_VERTEX_CAP = 1_000_000


# --- canonical emitter -----------------------------------------------------

def emit(value: Any) -> str:
    """Canonical JSON text: deterministic bytes for equal values."""
    parts: list[str] = []
    _emit(value, parts)
    return "".join(parts)


def _emit(value: Any, parts: list[str]) -> None:
    if value is None:
        parts.append("null")
    elif value is True:
        parts.append("true")
    elif value is False:
        parts.append("false")
    elif isinstance(value, int):
        parts.append(str(value))
    elif isinstance(value, float):
        if not math.isfinite(value):
            raise FormatError(f"non-finite number {value!r} cannot be serialized")
        if value == int(value) and abs(value) < 1e16:
            parts.append(str(int(value)))
        else:
            parts.append("%.17g" % value)
    elif isinstance(value, str):
        parts.append(json.dumps(value))
    elif isinstance(value, (list, tuple)):
        parts.append("[")
        for i, item in enumerate(value):
            if i:
                parts.append(",")
            _emit(item, parts)
        parts.append("]")
    elif isinstance(value, Mapping):
        parts.append("{")
        for i, (key, item) in enumerate(value.items()):
            if i:
                parts.append(",")
            parts.append(json.dumps(str(key)))
            parts.append(":")
            _emit(item, parts)
        parts.append("}")
    else:
        raise FormatError(f"cannot serialize {type(value).__name__}")


# --- strict field access ---------------------------------------------------

def _obj(value: Any, where: str) -> dict:
    if not isinstance(value, dict):
        raise FormatError(f"{where}: expected an object, got {type(value).__name__}")
    return value


def _take(obj: dict, where: str, required: Sequence[str], optional: Sequence[str] = ()) -> dict:
    for key in obj:
        if key not in required and key not in optional:
            raise FormatError(f"{where}: unknown field {key!r}")
    for key in required:
        if key not in obj:
            raise FormatError(f"{where}: missing field {key!r}")
    return obj


def _num(value: Any, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise FormatError(f"{where}: expected a number")
    if not math.isfinite(value):
        raise FormatError(f"{where}: non-finite number")
    return float(value)


def _int(value: Any, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise FormatError(f"{where}: expected an integer")
    return value


def _str(value: Any, where: str) -> str:
    if not isinstance(value, str):
        raise FormatError(f"{where}: expected a string")
    return value


def _vec3(value: Any, where: str) -> tuple[float, float, float]:
    if not isinstance(value, list) or len(value) != 3:
        raise FormatError(f"{where}: expected a 3-vector")
    return (_num(value[0], where), _num(value[1], where), _num(value[2], where))


def parse_json(text: str, where: str = "input") -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{where}: malformed JSON: {exc}") from None


# --- dataset ---------------------------------------------------------------

def dataset_to_json(dataset: S4DDataset) -> str:
    doc = {
        "meta": {
            "name": dataset.meta.name,
            "time_unit": dataset.meta.time_unit,
            "space_unit": dataset.meta.space_unit,
        },
        "timestamps": list(dataset.timestamps),
        "time_points": [
            [_snapshot_doc(s) for s in tp.snapshots] for tp in dataset.time_points
        ],
        "tracks": [
            {"from": e.from_id, "to": e.to_id, "kind": e.kind} for e in dataset.tracks
        ],
    }
    return emit(doc)


def _snapshot_doc(snap: ObjectSnapshot) -> dict:
    return {
        "id": snap.id,
        "shape": _shape_doc(snap.shape),
        "annotations": {k: snap.annotations[k] for k in sorted(snap.annotations)},
    }


def _shape_doc(shape) -> dict:
    if isinstance(shape, Sphere):
        return {"kind": "sphere", "center": list(shape.center), "radius": shape.radius}
    return {
        "kind": "mesh",
        "vertices": [list(v) for v in shape.vertices],
        "triangles": [list(t) for t in shape.triangles],
    }


def dataset_from_json(text: str) -> S4DDataset:
    doc = _take(
        _obj(parse_json(text, "dataset"), "dataset"),
        "dataset",
        ("meta", "timestamps", "time_points", "tracks"),
    )
    meta_doc = _take(_obj(doc["meta"], "meta"), "meta", ("name",), ("time_unit", "space_unit"))
    meta = DatasetMeta(
        name=_str(meta_doc["name"], "meta.name"),
        time_unit=_str(meta_doc.get("time_unit", "s"), "meta.time_unit"),
        space_unit=_str(meta_doc.get("space_unit", "m"), "meta.space_unit"),
    )
    if not isinstance(doc["timestamps"], list):
        raise FormatError("timestamps: expected an array")
    timestamps = tuple(_num(t, "timestamps") for t in doc["timestamps"])
    if not isinstance(doc["time_points"], list):
        raise FormatError("time_points: expected an array")
    time_points = []
    for index, entries in enumerate(doc["time_points"]):
        if not isinstance(entries, list):
            raise FormatError(f"time_points[{index}]: expected an array")
        snapshots = tuple(
            _parse_snapshot(e, f"time_points[{index}][{i}]") for i, e in enumerate(entries)
        )
        time_points.append(TimePoint(index=index, snapshots=snapshots))
    if not isinstance(doc["tracks"], list):
        raise FormatError("tracks: expected an array")
    tracks = []
    for i, e in enumerate(doc["tracks"]):
        where = f"tracks[{i}]"
        entry = _take(_obj(e, where), where, ("from", "to", "kind"))
        tracks.append(
            TrackEdge(
                _str(entry["from"], where),
                _str(entry["to"], where),
                _str(entry["kind"], where),
            )
        )
    return S4DDataset(
        time_points=tuple(time_points),
        timestamps=timestamps,
        tracks=tuple(tracks),
        meta=meta,
    )


def _parse_snapshot(value: Any, where: str) -> ObjectSnapshot:
    doc = _take(_obj(value, where), where, ("id", "shape"), ("annotations",))
    annotations = {}
    for key, item in _obj(doc.get("annotations", {}), f"{where}.annotations").items():
        if isinstance(item, str):
            annotations[key] = item
        elif isinstance(item, bool):
            raise FormatError(f"{where}.annotations[{key!r}]: booleans not allowed")
        elif isinstance(item, (int, float)):
            annotations[key] = _num(item, f"{where}.annotations[{key!r}]")
        else:
            raise FormatError(f"{where}.annotations[{key!r}]: expected number or string")
    return ObjectSnapshot(
        id=_str(doc["id"], where),
        shape=_parse_shape(doc["shape"], f"{where}.shape"),
        annotations=annotations,
    )


def _parse_shape(value: Any, where: str):
    doc = _obj(value, where)
    kind = doc.get("kind")
    if kind == "sphere":
        _take(doc, where, ("kind", "center", "radius"))
        return Sphere(center=_vec3(doc["center"], where), radius=_num(doc["radius"], where))
    if kind == "mesh":
        _take(doc, where, ("kind", "vertices", "triangles"))
        vertices = doc["vertices"]
        if not isinstance(vertices, list):
            raise FormatError(f"{where}.vertices: expected an array")
        if len(vertices) > MESH_VERTEX_CAP:
            raise FormatError(
                f"{where}: mesh exceeds the {MESH_VERTEX_CAP}-vertex cap"
            )
        triangles = doc["triangles"]
        if not isinstance(triangles, list):
            raise FormatError(f"{where}.triangles: expected an array")
        tri = []
        for i, t in enumerate(triangles):
            if not isinstance(t, list) or len(t) != 3:
                raise FormatError(f"{where}.triangles[{i}]: expected 3 indices")
            tri.append(tuple(_int(x, f"{where}.triangles[{i}]") for x in t))
        return Mesh(
            vertices=tuple(_vec3(v, f"{where}.vertices") for v in vertices),
            triangles=tuple(tri),
        )
    raise FormatError(f"{where}: unknown shape kind {kind!r}")


# --- design ----------------------------------------------------------------

def design_to_json(design: TimelineDesign) -> str:
    return emit(design_doc(design))


def design_doc(design: TimelineDesign) -> dict:
    return {
        "scale": _scale_doc(design.scale),
        "layout": {
            "faceting": (
                {"kind": "faceted", "branch_count": design.layout.faceting.branch_count}
                if isinstance(design.layout.faceting, Faceted)
                else {"kind": "unified"}
            ),
            "segmentation": (
                None
                if design.layout.segmentation is None
                else {"period": design.layout.segmentation.period}
            ),
            "branch_gap": design.layout.branch_gap,
        },
        "representation": _representation_doc(design.representation),
        "support": _support_doc(design.support),
        "snapshot_scale": design.snapshot_scale,
        "central_only": design.central_only,
    }


def _scale_doc(scale) -> dict:
    if isinstance(scale, ChronologicalLinear):
        return {"kind": "chronological-linear", "unit_length": scale.unit_length}
    if isinstance(scale, ChronologicalLog):
        return {
            "kind": "chronological-log",
            "unit_length": scale.unit_length,
            "epsilon": scale.epsilon,
        }
    if isinstance(scale, Relative):
        baselines = scale.baselines
        if not isinstance(baselines, int):
            baselines = {k: baselines[k] for k in sorted(baselines)}
        return {"kind": "relative", "unit_length": scale.unit_length, "baselines": baselines}
    return {"kind": "sequential", "unit_length": scale.unit_length}


def _representation_doc(rep) -> dict:
    if isinstance(rep, FlatLine):
        return {"kind": "flat-line", "direction": list(rep.direction)}
    if isinstance(rep, ConvexArc):
        return {"kind": "convex-arc", "center": list(rep.center), "radius": rep.radius}
    if isinstance(rep, ConvexParabola):
        return {
            "kind": "convex-parabola",
            "coefficient": rep.coefficient,
            "apex_distance": rep.apex_distance,
        }
    if isinstance(rep, ConcaveParabola):
        return {
            "kind": "concave-parabola",
            "coefficient": rep.coefficient,
            "apex_distance": rep.apex_distance,
        }
    if isinstance(rep, Helicoid):
        return {
            "kind": "helicoid",
            "axis_point": list(rep.axis_point),
            "radius": rep.radius,
            "points_per_loop": rep.points_per_loop,
            "pitch": rep.pitch,
        }
    return {
        "kind": "spherical",
        "center": list(rep.center),
        "radius": rep.radius,
        "loops": rep.loops,
    }


def _support_doc(support) -> dict:
    if isinstance(support, VerticalPlane):
        return {"kind": "vertical-plane"}
    if isinstance(support, HorizontalPlane):
        return {"kind": "horizontal-plane"}
    if isinstance(support, MultiplePlanes):
        return {"kind": "multiple-planes", "count": support.count, "plane_gap": support.plane_gap}
    if isinstance(support, Cubic):
        return {"kind": "cubic", "rows": support.rows, "cols": support.cols}
    return {"kind": "concentric-cylinders", "radius_step": support.radius_step}


def design_from_json(text: str) -> TimelineDesign:
    return design_from_doc(parse_json(text, "design"))


def design_from_doc(doc: Any) -> TimelineDesign:
    doc = _take(
        _obj(doc, "design"),
        "design",
        ("scale", "layout", "representation", "support"),
        ("snapshot_scale", "central_only"),
    )
    try:
        return TimelineDesign(
            scale=_parse_scale(doc["scale"]),
            layout=_parse_layout(doc["layout"]),
            representation=_parse_representation(doc["representation"]),
            support=_parse_support(doc["support"]),
            snapshot_scale=_num(doc.get("snapshot_scale", 0.3), "design.snapshot_scale"),
            central_only=bool(doc.get("central_only", False)),
        )
    except ValueError as exc:
        raise FormatError(f"design: {exc}") from exc


def _parse_scale(value: Any):
    doc = _obj(value, "design.scale")
    kind = doc.get("kind")
    where = "design.scale"
    if kind == "chronological-linear":
        _take(doc, where, ("kind", "unit_length"))
        return ChronologicalLinear(unit_length=_num(doc["unit_length"], where))
    if kind == "chronological-log":
        _take(doc, where, ("kind", "unit_length", "epsilon"))
        return ChronologicalLog(
            unit_length=_num(doc["unit_length"], where), epsilon=_num(doc["epsilon"], where)
        )
    if kind == "relative":
        _take(doc, where, ("kind", "unit_length", "baselines"))
        baselines = doc["baselines"]
        if isinstance(baselines, dict):
            baselines = {
                _str(k, where): _int(v, where) for k, v in baselines.items()
            }
        else:
            baselines = _int(baselines, where)
        return Relative(unit_length=_num(doc["unit_length"], where), baselines=baselines)
    if kind == "sequential":
        _take(doc, where, ("kind", "unit_length"))
        return Sequential(unit_length=_num(doc["unit_length"], where))
    raise FormatError(f"{where}: unknown kind {kind!r}")


def _parse_layout(value: Any) -> LayoutSpec:
    where = "design.layout"
    doc = _take(_obj(value, where), where, ("faceting",), ("segmentation", "branch_gap"))
    facet_doc = _obj(doc["faceting"], f"{where}.faceting")
    facet_kind = facet_doc.get("kind")
    if facet_kind == "unified":
        _take(facet_doc, f"{where}.faceting", ("kind",))
        faceting = Unified()
    elif facet_kind == "faceted":
        _take(facet_doc, f"{where}.faceting", ("kind",), ("branch_count",))
        faceting = Faceted(branch_count=_int(facet_doc.get("branch_count", 2), where))
    else:
        raise FormatError(f"{where}.faceting: unknown kind {facet_kind!r}")
    seg_doc = doc.get("segmentation")
    segmentation = None
    if seg_doc is not None:
        seg = _take(_obj(seg_doc, f"{where}.segmentation"), f"{where}.segmentation", ("period",))
        segmentation = Segmented(period=_int(seg["period"], where))
    return LayoutSpec(
        faceting=faceting,
        segmentation=segmentation,
        branch_gap=_num(doc.get("branch_gap", 0.5), where),
    )


def _parse_representation(value: Any):
    where = "design.representation"
    doc = _obj(value, where)
    kind = doc.get("kind")
    if kind == "flat-line":
        _take(doc, where, ("kind", "direction"))
        return FlatLine(direction=_vec3(doc["direction"], where))
    if kind == "convex-arc":
        _take(doc, where, ("kind", "center", "radius"))
        return ConvexArc(center=_vec3(doc["center"], where), radius=_num(doc["radius"], where))
    if kind == "convex-parabola":
        _take(doc, where, ("kind", "coefficient", "apex_distance"))
        return ConvexParabola(
            coefficient=_num(doc["coefficient"], where),
            apex_distance=_num(doc["apex_distance"], where),
        )
    if kind == "concave-parabola":
        _take(doc, where, ("kind", "coefficient", "apex_distance"))
        return ConcaveParabola(
            coefficient=_num(doc["coefficient"], where),
            apex_distance=_num(doc["apex_distance"], where),
        )
    if kind == "helicoid":
        _take(doc, where, ("kind", "axis_point", "radius", "points_per_loop", "pitch"))
        return Helicoid(
            axis_point=_vec3(doc["axis_point"], where),
            radius=_num(doc["radius"], where),
            points_per_loop=_int(doc["points_per_loop"], where),
            pitch=_num(doc["pitch"], where),
        )
    if kind == "spherical":
        _take(doc, where, ("kind", "center", "radius", "loops"))
        return Spherical(
            center=_vec3(doc["center"], where),
            radius=_num(doc["radius"], where),
            loops=_int(doc["loops"], where),
        )
    raise FormatError(f"{where}: unknown kind {kind!r}")


def _parse_support(value: Any):
    where = "design.support"
    doc = _obj(value, where)
    kind = doc.get("kind")
    if kind == "vertical-plane":
        _take(doc, where, ("kind",))
        return VerticalPlane()
    if kind == "horizontal-plane":
        _take(doc, where, ("kind",))
        return HorizontalPlane()
    if kind == "multiple-planes":
        _take(doc, where, ("kind",), ("count", "plane_gap"))
        return MultiplePlanes(
            count=_int(doc.get("count", 2), where),
            plane_gap=_num(doc.get("plane_gap", 0.5), where),
        )
    if kind == "cubic":
        _take(doc, where, ("kind",), ("rows", "cols"))
        return Cubic(rows=_int(doc.get("rows", 2), where), cols=_int(doc.get("cols", 2), where))
    if kind == "concentric-cylinders":
        _take(doc, where, ("kind",), ("radius_step",))
        return ConcentricCylinders(radius_step=_num(doc.get("radius_step", 0.5), where))
    raise FormatError(f"{where}: unknown kind {kind!r}")


# --- scene -----------------------------------------------------------------

def scene_to_json(render: RenderResult, state: SessionState) -> str:
    """One drawable entry per placed snapshot, plus gap markers."""
    layout = render.layout
    entries = []
    for p in layout.placements:
        clip_map = render.clipped.get((p.branch_id, p.time_index), {})
        for sid in p.members:
            snap = state.dataset.snapshot(sid)
            centroid = snap.shape.centroid
            local = (
                p.uniform_scale * centroid[0],
                p.uniform_scale * centroid[1],
                p.uniform_scale * centroid[2],
            )
            rotated = quat_rotate(p.orientation, local)
            position = (
                p.position[0] + rotated[0],
                p.position[1] + rotated[1],
                p.position[2] + rotated[2],
            )
            visibility = p.visibility
            if visibility == "visible" and sid in render.filtered:
                visibility = "filtered-out"
            decision = clip_map.get(sid)
            entries.append(
                {
                    "branch": p.branch_id,
                    "index": p.time_index,
                    "id": sid,
                    "shape": _shape_doc(snap.shape),
                    "position": list(position),
                    "quaternion": list(p.orientation),
                    "scale": p.uniform_scale,
                    "visibility": visibility,
                    "color": list(render.colors[sid]),
                    "clipped": bool(decision.clipped) if decision is not None else False,
                }
            )
    gaps = [
        {
            "branch": g.branch_id,
            "start": g.start_index,
            "end": g.end_index,
            "position": list(g.position),
            "count": g.collapsed_count,
        }
        for g in layout.gap_indicators
    ]
    doc = {
        "design": design_doc(state.design),
        "central": [layout.central[0], layout.central[1]],
        "uniform_scale": layout.uniform_scale,
        "placements": entries,
        "gaps": gaps,
    }
    return emit(doc)


# --- session state ---------------------------------------------------------

def state_doc(state: SessionState) -> dict:
    """Inspectable summary of a session; not a round-trip format."""
    return {
        "design": design_doc(state.design),
        "central": [state.central[0], state.central[1]],
        "selection": [
            {
                "root": obj.root_id,
                "members": sorted(obj.members),
                "intervals": [list(iv) for iv in obj.intervals],
            }
            for obj in state.selection
        ],
        "filters": [
            {
                "field": f.field,
                "min": None if f.lo == -math.inf else f.lo,
                "max": None if f.hi == math.inf else f.hi,
            }
            for f in state.value_filters
        ],
        "collapses": [
            {"branch": c.branch_id, "start": c.start_index, "end": c.end_index}
            for c in state.collapses
        ],
        "lod_stride": state.lod_stride,
        "cutaway": _cutaway_doc(state.cutaway),
        "color_field": None if state.color_binding is None else state.color_binding.field,
        "global_rotation": list(state.global_rotation),
        "global_scale": state.global_scale,
    }


def _cutaway_doc(operator: Optional[CutOperator]):
    if operator is None:
        return None
    if isinstance(operator, CutPlane):
        return {"kind": "plane", "normal": list(operator.normal), "offset": operator.offset}
    return {
        "kind": "box",
        "center_offset": list(operator.center_offset),
        "half_extents": list(operator.half_extents),
    }


# --- actions ---------------------------------------------------------------

def parse_action(doc: Any) -> Action:
    """Wire format to Action; structural problems raise FormatError."""
    doc = _obj(doc, "action")
    kind = doc.get("kind")
    where = f"action {kind!r}"
    if kind == "scroll":
        _take(doc, where, ("kind", "delta"))
        return Scroll(delta=_int(doc["delta"], where))
    if kind == "jump":
        _take(doc, where, ("kind", "branch", "index"))
        return Jump(branch=_str(doc["branch"], where), index=_int(doc["index"], where))
    if kind == "select-object":
        _take(doc, where, ("kind", "id"), ("include_lineage",))
        return SelectObject(
            snapshot_id=_str(doc["id"], where),
            include_lineage=bool(doc.get("include_lineage", True)),
        )
    if kind == "deselect":
        _take(doc, where, ("kind", "id"))
        return Deselect(snapshot_id=_str(doc["id"], where))
    if kind == "set-filter":
        _take(doc, where, ("kind", "field"), ("min", "max"))
        lo = doc.get("min")
        hi = doc.get("max")
        return SetFilter(
            field=_str(doc["field"], where),
            lo=-math.inf if lo is None else _num(lo, where),
            hi=math.inf if hi is None else _num(hi, where),
        )
    if kind == "collapse":
        _take(doc, where, ("kind", "branch", "start", "end"))
        return Collapse(range=_parse_range(doc, where))
    if kind == "extend":
        _take(doc, where, ("kind", "branch", "start", "end"))
        return Extend(range=_parse_range(doc, where))
    if kind == "set-lod":
        _take(doc, where, ("kind", "stride"))
        return SetLod(stride=_int(doc["stride"], where))
    if kind == "set-cutaway":
        _take(doc, where, ("kind", "operator"))
        return SetCutaway(operator=_parse_cutaway(doc["operator"], where))
    if kind == "set-color-field":
        _take(doc, where, ("kind", "field"))
        field = doc["field"]
        return SetColorField(field=None if field is None else _str(field, where))
    if kind == "rotate":
        _take(doc, where, ("kind", "quaternion"))
        q = doc["quaternion"]
        if not isinstance(q, list) or len(q) != 4:
            raise FormatError(f"{where}: quaternion must be [w, x, y, z]")
        return Rotate(quaternion=tuple(_num(c, where) for c in q))
    if kind == "scale":
        _take(doc, where, ("kind", "factor"))
        return Scale(factor=_num(doc["factor"], where))
    raise FormatError(f"action: unknown kind {kind!r}")


def _parse_range(doc: dict, where: str) -> CollapseRange:
    try:
        return CollapseRange(
            branch_id=_str(doc["branch"], where),
            start_index=_int(doc["start"], where),
            end_index=_int(doc["end"], where),
        )
    except ValueError as exc:
        raise FormatError(f"{where}: {exc}") from exc


def _parse_cutaway(value: Any, where: str) -> Optional[CutOperator]:
    if value is None:
        return None
    doc = _obj(value, where)
    kind = doc.get("kind")
    if kind == "plane":
        _take(doc, where, ("kind", "normal"), ("offset",))
        return CutPlane(
            normal=_vec3(doc["normal"], where),
            offset=_num(doc.get("offset", 0.0), where),
        )
    if kind == "box":
        _take(doc, where, ("kind", "center_offset", "half_extents"))
        return CutBox(
            center_offset=_vec3(doc["center_offset"], where),
            half_extents=_vec3(doc["half_extents"], where),
        )
    raise FormatError(f"{where}: unknown cut operator kind {kind!r}")


# --- benchmark configs, truth, tasks, traces -------------------------------

def gen_config_from_json(text: str) -> bench.GenConfig:
    doc = _take(
        _obj(parse_json(text, "config"), "config"),
        "config",
        (),
        (
            "time_point_count",
            "object_count",
            "group_count",
            "pattern",
            "pattern_occurrences",
            "gaussians_per_segment_length",
            "seed",
        ),
    )
    pattern = doc.get("pattern", [0, 1, 2])
    if not isinstance(pattern, list) or len(pattern) != 3:
        raise FormatError("config.pattern: expected a triple")
    try:
        return bench.GenConfig(
            time_point_count=_int(doc.get("time_point_count", 80), "config"),
            object_count=_int(doc.get("object_count", 6), "config"),
            group_count=_int(doc.get("group_count", 5), "config"),
            pattern=tuple(_int(g, "config.pattern") for g in pattern),
            pattern_occurrences=_int(doc.get("pattern_occurrences", 5), "config"),
            gaussians_per_segment_length=_int(
                doc.get("gaussians_per_segment_length", 20), "config"
            ),
            seed=_int(doc.get("seed", 0), "config"),
        )
    except ValueError as exc:
        raise FormatError(f"config: {exc}") from exc


def truth_to_json(truth: bench.GroundTruth) -> str:
    doc = {
        "pattern": list(truth.pattern),
        "occurrences": [list(o) for o in truth.occurrences],
        "value_argmax": truth.value_argmax,
        "group_counts": {k: truth.group_counts[k] for k in sorted(truth.group_counts)},
        "gaussians": [list(g) for g in truth.gaussians],
    }
    return emit(doc)


def truth_from_json(text: str) -> bench.GroundTruth:
    doc = _take(
        _obj(parse_json(text, "truth"), "truth"),
        "truth",
        ("pattern", "occurrences", "value_argmax", "group_counts", "gaussians"),
    )
    pattern = doc["pattern"]
    if not isinstance(pattern, list) or len(pattern) != 3:
        raise FormatError("truth.pattern: expected a triple")
    occurrences = []
    for o in doc["occurrences"]:
        if not isinstance(o, list) or len(o) != 2:
            raise FormatError("truth.occurrences: expected [object, start] pairs")
        occurrences.append((_int(o[0], "truth"), _int(o[1], "truth")))
    counts = _obj(doc["group_counts"], "truth.group_counts")
    gaussians = []
    for g in doc["gaussians"]:
        if not isinstance(g, list) or len(g) != 3:
            raise FormatError("truth.gaussians: expected [mean, amplitude, sigma] triples")
        gaussians.append(tuple(_num(x, "truth.gaussians") for x in g))
    return bench.GroundTruth(
        pattern=tuple(_int(g, "truth.pattern") for g in pattern),
        occurrences=tuple(occurrences),
        value_argmax=_int(doc["value_argmax"], "truth"),
        group_counts={_str(k, "truth"): _int(v, "truth") for k, v in counts.items()},
        gaussians=tuple(gaussians),
    )


def task_from_json(text: str) -> bench.TaskSpec:
    doc = _take(
        _obj(parse_json(text, "task"), "task"),
        "task",
        ("kind",),
        ("target", "group", "triple", "time_limit"),
    )
    kind = doc["kind"]
    if kind == "locate":
        spec_kind = bench.Locate(target=_int(doc.get("target"), "task.target"))
    elif kind == "count":
        spec_kind = bench.Count(group=_str(doc.get("group"), "task.group"))
    elif kind == "pattern":
        triple = doc.get("triple")
        if not isinstance(triple, list) or len(triple) != 3:
            raise FormatError("task.triple: expected a triple")
        spec_kind = bench.Pattern(triple=tuple(_int(g, "task.triple") for g in triple))
    elif kind == "maximum":
        spec_kind = bench.Maximum()
    else:
        raise FormatError(f"task: unknown kind {kind!r}")
    if "time_limit" in doc:
        limit = doc["time_limit"]
        return bench.TaskSpec(
            kind=spec_kind, time_limit=None if limit is None else _num(limit, "task")
        )
    return bench.TaskSpec(kind=spec_kind)


def trace_from_json(text: str) -> bench.ExplorationTrace:
    doc = _take(_obj(parse_json(text, "trace"), "trace"), "trace", ("events",))
    if not isinstance(doc["events"], list):
        raise FormatError("trace.events: expected an array")
    events = []
    for i, e in enumerate(doc["events"]):
        where = f"trace.events[{i}]"
        entry = _take(_obj(e, where), where, ("at", "kind"), ("payload",))
        events.append(
            bench.TraceEvent(
                at=_num(entry["at"], where),
                kind=_str(entry["kind"], where),
                payload=entry.get("payload"),
            )
        )
    try:
        return bench.ExplorationTrace(events=tuple(events))
    except ValueError as exc:
        raise FormatError(f"trace: {exc}") from exc


def result_to_json(result: bench.TaskResult) -> str:
    doc = {
        "answer": result.answer,
        "elapsed": result.elapsed,
        "metrics": {k: result.metrics[k] for k in sorted(result.metrics)},
    }
    return emit(doc)
