"""The interaction state machine over a dataset and a design.

A session is an immutable value transitioned by :func:`apply`; every user
interaction is one Action, so a recorded action log replays to the exact
same final state and scene.  :func:`render_state` turns the current state
into a solved layout plus per-snapshot colors, cut-away decisions, and
filter flags; the global rotation/scale is composed into every placement
identically, which is what makes the transforms feel linked across time
points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Mapping, Optional, Union

from .colormap import NEUTRAL_GRAY, Color, ColorMap, categorical_color, viridis
from .design import Faceted, TimelineDesign
from .errors import (
    DegenerateOperator,
    InvalidAction,
    NonNumericalField,
    NoSuchField,
    UnknownCentral,
    UnknownSnapshot,
)
from .layout import (
    FILTERED_OUT,
    IDENTITY_QUAT,
    VISIBLE,
    Branch,
    BranchSlot,
    ClipDecision,
    CollapseRange,
    CutOperator,
    GapIndicator,
    LayoutResult,
    Placement,
    Quat,
    Vec3,
    apply_cutaway,
    barycenter,
    base_branch_id,
    check_cutaway_operator,
    quat_multiply,
    quat_normalize,
    quat_rotate,
    solve_layout,
)
from .model import (
    Object4D,
    S4DDataset,
    annotation_range,
    categorical_values,
    expand_4d_object,
    field_kind,
)

UNIFIED_BRANCH_ID = "timeline"


# --- state -----------------------------------------------------------------

@dataclass(frozen=True)
class ValueFilter:
    """Keep snapshots whose ``field`` value lies inside [lo, hi].

    Snapshots without the field are never filtered; infinities make a
    bound one-sided.
    """

    field: str
    lo: float
    hi: float


@dataclass(frozen=True)
class ColorBinding:
    """Field driving per-snapshot colors.

    ``colormap`` is set for numerical fields; categorical fields use the
    qualitative palette over their sorted distinct values instead.
    """

    field: str
    colormap: Optional[ColorMap]


@dataclass(frozen=True)
class SessionState:
    dataset: S4DDataset
    design: TimelineDesign
    central: tuple[str, int]
    selection: tuple[Object4D, ...] = ()
    value_filters: tuple[ValueFilter, ...] = ()
    collapses: tuple[CollapseRange, ...] = ()
    lod_stride: int = 1
    cutaway: Optional[CutOperator] = None
    color_binding: Optional[ColorBinding] = None
    global_rotation: Quat = IDENTITY_QUAT
    global_scale: float = 1.0


def initial_state(
    dataset: S4DDataset,
    design: TimelineDesign,
    central: Optional[tuple[str, int]] = None,
) -> SessionState:
    """Fresh session showing the whole dataset, anchored at the first slot."""
    branches = _branches(dataset, design, ())
    if not branches:
        raise UnknownCentral("dataset yields no branches to anchor on")
    if central is None:
        central = (branches[0].id, branches[0].slots[0].time_index)
    else:
        _resolve_central(branches, central)
    return SessionState(dataset=dataset, design=design, central=central)


# --- branch construction ---------------------------------------------------

def _branches(
    dataset: S4DDataset,
    design: TimelineDesign,
    selection: tuple[Object4D, ...],
) -> tuple[Branch, ...]:
    """Branch content for the current selection (everything when empty)."""
    faceted = isinstance(design.layout.faceting, Faceted)
    if not selection:
        if not faceted:
            slots = tuple(
                BranchSlot(tp.index, tuple(sorted(s.id for s in tp.snapshots)))
                for tp in dataset.time_points
            )
            return (Branch(UNIFIED_BRANCH_ID, slots),)
        return _chain_branches(dataset, _all_objects(dataset))

    if faceted:
        return _chain_branches(dataset, selection)
    members_by_tp: dict[int, set[str]] = {tp.index: set() for tp in dataset.time_points}
    for obj in selection:
        for sid in obj.members:
            members_by_tp[dataset.time_index_of(sid)].add(sid)
    slots = tuple(
        BranchSlot(tp.index, tuple(sorted(members_by_tp[tp.index])))
        for tp in dataset.time_points
    )
    return (Branch(UNIFIED_BRANCH_ID, slots),)


def _all_objects(dataset: S4DDataset) -> tuple[Object4D, ...]:
    """One 4D object per track-connected component, in id order."""
    objects: list[Object4D] = []
    assigned: set[str] = set()
    for sid in sorted(dataset.all_snapshot_ids()):
        if sid in assigned:
            continue
        obj = expand_4d_object(dataset, sid, include_lineage=True)
        assigned.update(obj.members)
        objects.append(obj)
    return tuple(objects)


def _chain_branches(
    dataset: S4DDataset, objects: tuple[Object4D, ...]
) -> tuple[Branch, ...]:
    from .model import lineage_branches

    branches: dict[str, Branch] = {}
    for obj in objects:
        for chain in lineage_branches(obj, dataset):
            slots = tuple(
                BranchSlot(dataset.time_index_of(sid), (sid,)) for sid in chain
            )
            branches.setdefault(chain[0], Branch(chain[0], slots))
    return tuple(branches[key] for key in sorted(branches))


def _resolve_central(
    branches: tuple[Branch, ...], central: tuple[str, int]
) -> tuple[str, int]:
    """Check that the central slot exists, accepting pseudo-branch ids."""
    base = base_branch_id(central[0])
    for branch in branches:
        if branch.id == base:
            if any(s.time_index == central[1] for s in branch.slots):
                return (base, central[1])
            raise UnknownCentral(
                f"branch {base!r} has no time index {central[1]}"
            )
    raise UnknownCentral(f"no branch {central[0]!r}")


def _reanchor_central(
    branches: tuple[Branch, ...], central: tuple[str, int]
) -> tuple[str, int]:
    """Carry the central slot across a change of branch structure.

    Prefer the same (branch, index); then any branch holding the same time
    index; then the first branch's slot nearest that index.
    """
    base = base_branch_id(central[0])
    index = central[1]
    for branch in branches:
        if branch.id == base and any(s.time_index == index for s in branch.slots):
            return (base, index)
    for branch in branches:
        if any(s.time_index == index for s in branch.slots):
            return (branch.id, index)
    first = branches[0]
    nearest = min(first.slots, key=lambda s: (abs(s.time_index - index), s.time_index))
    return (first.id, nearest.time_index)


# --- actions ---------------------------------------------------------------

@dataclass(frozen=True)
class Scroll:
    delta: int


@dataclass(frozen=True)
class Jump:
    branch: str
    index: int


@dataclass(frozen=True)
class SelectObject:
    snapshot_id: str
    include_lineage: bool = True


@dataclass(frozen=True)
class Deselect:
    snapshot_id: str


@dataclass(frozen=True)
class SetFilter:
    field: str
    lo: float
    hi: float


@dataclass(frozen=True)
class Collapse:
    range: CollapseRange


@dataclass(frozen=True)
class Extend:
    range: CollapseRange


@dataclass(frozen=True)
class SetLod:
    stride: int


@dataclass(frozen=True)
class SetCutaway:
    operator: Optional[CutOperator]


@dataclass(frozen=True)
class SetColorField:
    field: Optional[str]


@dataclass(frozen=True)
class Rotate:
    quaternion: Quat


@dataclass(frozen=True)
class Scale:
    factor: float


Action = Union[
    Scroll, Jump, SelectObject, Deselect, SetFilter, Collapse, Extend,
    SetLod, SetCutaway, SetColorField, Rotate, Scale,
]


def apply(state: SessionState, action: Action) -> tuple[SessionState, frozenset[str]]:
    """Pure transition; returns the new state plus names of changed parts.

    Invalid arguments raise InvalidAction and leave the state untouched;
    a no-op (scrolling past the end) returns the state itself with no
    changed flags.
    """
    if isinstance(action, Scroll):
        return _scroll(state, action.delta)
    if isinstance(action, Jump):
        return _jump(state, action.branch, action.index)
    if isinstance(action, SelectObject):
        return _select(state, action.snapshot_id, action.include_lineage)
    if isinstance(action, Deselect):
        return _deselect(state, action.snapshot_id)
    if isinstance(action, SetFilter):
        return _set_filter(state, action.field, action.lo, action.hi)
    if isinstance(action, Collapse):
        return _collapse(state, action.range)
    if isinstance(action, Extend):
        return _extend(state, action.range)
    if isinstance(action, SetLod):
        if action.stride < 1:
            raise InvalidAction(f"lod stride must be >= 1, got {action.stride}")
        if action.stride == state.lod_stride:
            return state, frozenset()
        return replace(state, lod_stride=action.stride), frozenset({"lod"})
    if isinstance(action, SetCutaway):
        if action.operator is not None:
            try:
                check_cutaway_operator(action.operator)
            except DegenerateOperator as exc:
                raise InvalidAction(str(exc)) from exc
        if action.operator == state.cutaway:
            return state, frozenset()
        return replace(state, cutaway=action.operator), frozenset({"cutaway"})
    if isinstance(action, SetColorField):
        return _set_color_field(state, action.field)
    if isinstance(action, Rotate):
        q = action.quaternion
        norm = math.sqrt(sum(c * c for c in q))
        if abs(norm - 1.0) > 1e-6:
            raise InvalidAction(f"rotation quaternion not normalized (norm {norm})")
        composed = quat_normalize(quat_multiply(q, state.global_rotation))
        return replace(state, global_rotation=composed), frozenset({"transform"})
    if isinstance(action, Scale):
        if not action.factor > 0 or not math.isfinite(action.factor):
            raise InvalidAction(f"scale factor must be finite and > 0, got {action.factor}")
        return (
            replace(state, global_scale=state.global_scale * action.factor),
            frozenset({"transform"}),
        )
    raise InvalidAction(f"unknown action {type(action).__name__}")


def _scroll(state: SessionState, delta: int) -> tuple[SessionState, frozenset[str]]:
    branches = _branches(state.dataset, state.design, state.selection)
    branch = next(
        (b for b in branches if b.id == base_branch_id(state.central[0])), None
    )
    if branch is None:
        raise InvalidAction(f"central branch {state.central[0]!r} not in layout")
    indices = [s.time_index for s in branch.slots]
    pos = indices.index(state.central[1])
    new_pos = min(max(pos + delta, 0), len(indices) - 1)
    if new_pos == pos:
        return state, frozenset()
    return (
        replace(state, central=(branch.id, indices[new_pos])),
        frozenset({"central"}),
    )


def _jump(state: SessionState, branch_id: str, index: int) -> tuple[SessionState, frozenset[str]]:
    branches = _branches(state.dataset, state.design, state.selection)
    try:
        central = _resolve_central(branches, (branch_id, index))
    except UnknownCentral as exc:
        raise InvalidAction(str(exc)) from exc
    if central == state.central:
        return state, frozenset()
    return replace(state, central=central), frozenset({"central"})


def _select(
    state: SessionState, snapshot_id: str, include_lineage: bool
) -> tuple[SessionState, frozenset[str]]:
    try:
        obj = expand_4d_object(state.dataset, snapshot_id, include_lineage)
    except UnknownSnapshot as exc:
        raise InvalidAction(str(exc)) from exc
    if any(existing.members == obj.members for existing in state.selection):
        return state, frozenset()
    selection = state.selection + (obj,)
    new = replace(state, selection=selection)
    flags = {"selection"}
    recentered = _reanchor_central(
        _branches(state.dataset, state.design, selection), state.central
    )
    if recentered != state.central:
        new = replace(new, central=recentered)
        flags.add("central")
    return new, frozenset(flags)


def _deselect(state: SessionState, snapshot_id: str) -> tuple[SessionState, frozenset[str]]:
    kept = tuple(obj for obj in state.selection if snapshot_id not in obj.members)
    if len(kept) == len(state.selection):
        raise InvalidAction(f"snapshot {snapshot_id!r} is not part of any selected object")
    new = replace(state, selection=kept)
    flags = {"selection"}
    recentered = _reanchor_central(
        _branches(state.dataset, state.design, kept), state.central
    )
    if recentered != state.central:
        new = replace(new, central=recentered)
        flags.add("central")
    return new, frozenset(flags)


def _set_filter(
    state: SessionState, field: str, lo: float, hi: float
) -> tuple[SessionState, frozenset[str]]:
    if math.isnan(lo) or math.isnan(hi) or lo > hi:
        raise InvalidAction(f"bad filter range [{lo}, {hi}]")
    try:
        kind = field_kind(state.dataset, field)
    except NoSuchField as exc:
        raise InvalidAction(str(exc)) from exc
    if kind != "numerical":
        raise InvalidAction(f"field {field!r} is categorical, not filterable by range")
    filters = tuple(f for f in state.value_filters if f.field != field)
    filters += (ValueFilter(field, lo, hi),)
    return replace(state, value_filters=filters), frozenset({"filters"})


def _collapse(state: SessionState, rng: CollapseRange) -> tuple[SessionState, frozenset[str]]:
    _check_collapse_range(state, rng)
    base = base_branch_id(rng.branch_id)
    start, end = rng.start_index, rng.end_index
    kept: list[CollapseRange] = []
    for existing in state.collapses:
        if base_branch_id(existing.branch_id) == base and not (
            existing.end_index < start - 1 or existing.start_index > end + 1
        ):
            start = min(start, existing.start_index)
            end = max(end, existing.end_index)
        else:
            kept.append(existing)
    kept.append(CollapseRange(base, start, end))
    kept.sort(key=lambda c: (c.branch_id, c.start_index))
    collapses = tuple(kept)
    if collapses == state.collapses:
        return state, frozenset()
    return replace(state, collapses=collapses), frozenset({"collapses"})


def _extend(state: SessionState, rng: CollapseRange) -> tuple[SessionState, frozenset[str]]:
    _check_collapse_range(state, rng)
    base = base_branch_id(rng.branch_id)
    kept: list[CollapseRange] = []
    for existing in state.collapses:
        if base_branch_id(existing.branch_id) != base:
            kept.append(existing)
            continue
        # remove the intersection, keeping any stubs either side
        if existing.start_index < rng.start_index:
            kept.append(
                CollapseRange(
                    existing.branch_id,
                    existing.start_index,
                    min(existing.end_index, rng.start_index - 1),
                )
            )
        if existing.end_index > rng.end_index:
            kept.append(
                CollapseRange(
                    existing.branch_id,
                    max(existing.start_index, rng.end_index + 1),
                    existing.end_index,
                )
            )
    kept.sort(key=lambda c: (c.branch_id, c.start_index))
    collapses = tuple(kept)
    if collapses == state.collapses:
        return state, frozenset()
    return replace(state, collapses=collapses), frozenset({"collapses"})


def _check_collapse_range(state: SessionState, rng: CollapseRange) -> None:
    branches = _branches(state.dataset, state.design, state.selection)
    base = base_branch_id(rng.branch_id)
    branch = next((b for b in branches if b.id == base), None)
    if branch is None:
        raise InvalidAction(f"no branch {rng.branch_id!r} to collapse")
    if rng.start_index < 0 or rng.end_index >= len(state.dataset):
        raise InvalidAction(
            f"collapse range [{rng.start_index}, {rng.end_index}] outside the dataset"
        )


def _set_color_field(
    state: SessionState, field: Optional[str]
) -> tuple[SessionState, frozenset[str]]:
    if field is None:
        if state.color_binding is None:
            return state, frozenset()
        return replace(state, color_binding=None), frozenset({"color"})
    try:
        kind = field_kind(state.dataset, field)
        if kind == "numerical":
            binding = ColorBinding(field, viridis(annotation_range(state.dataset, field)))
        else:
            binding = ColorBinding(field, None)
    except (NoSuchField, NonNumericalField) as exc:
        raise InvalidAction(str(exc)) from exc
    if binding == state.color_binding:
        return state, frozenset()
    return replace(state, color_binding=binding), frozenset({"color"})


# --- rendering -------------------------------------------------------------

@dataclass(frozen=True)
class RenderResult:
    """A solved layout plus everything needed to draw it.

    ``layout`` already carries the global rotation/scale; ``colors`` maps
    every placed snapshot id to rgb; ``filtered`` lists snapshot ids
    outside the value filters; ``clipped`` holds cut-away decisions per
    (branch, time index) when a cut operator is set.
    """

    layout: LayoutResult
    colors: Mapping[str, Color]
    filtered: frozenset[str]
    clipped: Mapping[tuple[str, int], Mapping[str, ClipDecision]]


def render_state(state: SessionState) -> RenderResult:
    branches = _branches(state.dataset, state.design, state.selection)
    result = solve_layout(
        state.dataset,
        branches,
        state.design,
        state.central,
        state.collapses,
        state.lod_stride,
    )

    filtered = _filtered_ids(state, result.placements)
    if filtered:
        placements = tuple(
            replace(p, visibility=FILTERED_OUT)
            if p.visibility == VISIBLE and p.members and all(m in filtered for m in p.members)
            else p
            for p in result.placements
        )
        result = replace(result, placements=placements)

    clipped: dict[tuple[str, int], dict[str, ClipDecision]] = {}
    if state.cutaway is not None:
        for p in result.placements:
            if not p.members:
                continue
            snaps = [state.dataset.snapshot(m) for m in p.members]
            clipped[(p.branch_id, p.time_index)] = apply_cutaway(
                snaps, state.cutaway, barycenter(snaps)
            )

    if state.global_rotation != IDENTITY_QUAT or state.global_scale != 1.0:
        result = _transform(result, state.global_rotation, state.global_scale)

    return RenderResult(
        layout=result,
        colors=_colors(state, result.placements),
        filtered=filtered,
        clipped=clipped,
    )


def _filtered_ids(state: SessionState, placements: tuple[Placement, ...]) -> frozenset[str]:
    if not state.value_filters:
        return frozenset()
    out: set[str] = set()
    seen: set[str] = set()
    for p in placements:
        for sid in p.members:
            if sid in seen:
                continue
            seen.add(sid)
            snap = state.dataset.snapshot(sid)
            for f in state.value_filters:
                value = snap.annotations.get(f.field)
                if value is None or isinstance(value, str):
                    continue
                if not f.lo <= float(value) <= f.hi:
                    out.add(sid)
                    break
    return frozenset(out)


def _colors(state: SessionState, placements: tuple[Placement, ...]) -> dict[str, Color]:
    ids: list[str] = []
    seen: set[str] = set()
    for p in placements:
        for sid in p.members:
            if sid not in seen:
                seen.add(sid)
                ids.append(sid)
    binding = state.color_binding
    if binding is None:
        return {sid: NEUTRAL_GRAY for sid in ids}
    ordering: tuple[str, ...] = ()
    if binding.colormap is None:
        ordering = tuple(categorical_values(state.dataset, binding.field))
    out: dict[str, Color] = {}
    for sid in ids:
        value = state.dataset.snapshot(sid).annotations.get(binding.field)
        if value is None:
            out[sid] = NEUTRAL_GRAY
        elif binding.colormap is not None:
            out[sid] = binding.colormap.color_for(float(value))
        else:
            out[sid] = categorical_color(str(value), ordering)
    return out


def _transform(result: LayoutResult, q: Quat, factor: float) -> LayoutResult:
    def move(p: Vec3) -> Vec3:
        return quat_rotate(q, (factor * p[0], factor * p[1], factor * p[2]))

    placements = tuple(
        replace(
            p,
            position=move(p.position),
            orientation=quat_normalize(quat_multiply(q, p.orientation)),
            uniform_scale=factor * p.uniform_scale,
        )
        for p in result.placements
    )
    gaps = tuple(
        GapIndicator(
            g.branch_id, g.start_index, g.end_index, g.collapsed_count, move(g.position)
        )
        for g in result.gap_indicators
    )
    return LayoutResult(
        placements=placements,
        central=result.central,
        gap_indicators=gaps,
        uniform_scale=factor * result.uniform_scale,
    )


def argmax_invariance_check(state: SessionState, f: Callable[[float], float]) -> bool:
    """True iff a strictly increasing transform keeps the field's argmax.

    The argmax is taken per time point over the color-bound field's
    maximum value.  Strictness of ``f`` is probed on the observed values;
    a violation raises ValueError.
    """
    if state.color_binding is None or state.color_binding.colormap is None:
        raise ValueError("argmax check needs a numerical color-bound field")
    field = state.color_binding.field
    per_tp: list[tuple[int, float]] = []
    for tp in state.dataset.time_points:
        values = []
        for snap in tp.snapshots:
            v = snap.annotations.get(field)
            if v is not None and not isinstance(v, str):
                values.append(float(v))
        if values:
            per_tp.append((tp.index, max(values)))
    if not per_tp:
        raise ValueError(f"field {field!r} has no numerical values")
    distinct = sorted({v for _, v in per_tp})
    for a, b in zip(distinct, distinct[1:]):
        if not f(b) > f(a):
            raise ValueError("transform is not strictly increasing on the field values")
    before = max(per_tp, key=lambda item: (item[1], -item[0]))[0]
    after = max(per_tp, key=lambda item: (f(item[1]), -item[0]))[0]
    return before == after


# --- replay ----------------------------------------------------------------

def replay(
    initial: SessionState, actions: list[Action]
) -> SessionState:
    """Fold an action log; event-sourcing makes this reproduce any session."""
    state = initial
    for action in actions:
        state, _ = apply(state, action)
    return state
