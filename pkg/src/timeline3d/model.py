"""Data model for time-varying spatial 3D datasets with tracked objects.

A dataset is an ordered list of time points, each populated by object
snapshots.  Track edges link snapshots at consecutive time points and carry
an event kind (plain continuation, fission child, fusion parent), so a
tracked object can branch into a lineage tree or, in full generality, a DAG.
Datasets are immutable after construction and safe for concurrent reads.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence, Union

from .errors import InconsistentTrack, NonNumericalField, NoSuchField, UnknownSnapshot

Vec3 = tuple[float, float, float]

# Annotation values are plain Python scalars: float-likes are numerical,
# strings are categorical.
AnnotationValue = Union[float, int, str]

CONTINUATION = "continuation"
FISSION_CHILD = "fission-child"
FUSION_PARENT = "fusion-parent"

EDGE_KINDS = (CONTINUATION, FISSION_CHILD, FUSION_PARENT)


@dataclass(frozen=True)
class Sphere:
    center: Vec3
    radius: float

    def __post_init__(self) -> None:
        if not self.radius > 0:
            raise ValueError(f"sphere radius must be > 0, got {self.radius}")

    @property
    def centroid(self) -> Vec3:
        return self.center


@dataclass(frozen=True)
class Mesh:
    vertices: tuple[Vec3, ...]
    triangles: tuple[tuple[int, int, int], ...]

    def __post_init__(self) -> None:
        if len(self.vertices) < 4:
            raise ValueError("mesh needs at least 4 vertices")
        n = len(self.vertices)
        for tri in self.triangles:
            for idx in tri:
                if not 0 <= idx < n:
                    raise ValueError(f"triangle index {idx} out of range (vertex count {n})")

    @property
    def centroid(self) -> Vec3:
        n = len(self.vertices)
        sx = sum(v[0] for v in self.vertices)
        sy = sum(v[1] for v in self.vertices)
        sz = sum(v[2] for v in self.vertices)
        return (sx / n, sy / n, sz / n)


Shape = Union[Sphere, Mesh]


@dataclass(frozen=True)
class ObjectSnapshot:
    """One object's state at one time point."""

    id: str
    shape: Shape
    annotations: Mapping[str, AnnotationValue] = field(default_factory=dict)

    def annotation(self, name: str) -> Optional[AnnotationValue]:
        return self.annotations.get(name)


@dataclass(frozen=True)
class TimePoint:
    index: int
    snapshots: tuple[ObjectSnapshot, ...]


@dataclass(frozen=True)
class TrackEdge:
    from_id: str
    to_id: str
    kind: str = CONTINUATION

    def __post_init__(self) -> None:
        if self.kind not in EDGE_KINDS:
            raise ValueError(f"unknown edge kind {self.kind!r}")


@dataclass(frozen=True)
class DatasetMeta:
    name: str = "dataset"
    time_unit: str = "s"
    space_unit: str = "m"


class S4DDataset:
    """Immutable container for a tracked spatio-temporal dataset.

    Construction validates every structural invariant: strictly increasing
    timestamps, globally unique snapshot ids, edges spanning exactly one time
    step, and the track-graph degree constraints.
    """

    def __init__(
        self,
        time_points: Sequence[TimePoint],
        timestamps: Sequence[float],
        tracks: Sequence[TrackEdge] = (),
        meta: DatasetMeta = DatasetMeta(),
    ) -> None:
        self.time_points: tuple[TimePoint, ...] = tuple(time_points)
        self.timestamps: tuple[float, ...] = tuple(float(t) for t in timestamps)
        self.tracks: tuple[TrackEdge, ...] = tuple(tracks)
        self.meta = meta

        self._by_id: dict[str, ObjectSnapshot] = {}
        self._time_index: dict[str, int] = {}
        self._out: dict[str, list[TrackEdge]] = {}
        self._in: dict[str, list[TrackEdge]] = {}
        self._validate()

    # -- invariants ---------------------------------------------------------

    def _validate(self) -> None:
        if len(self.timestamps) != len(self.time_points):
            raise InconsistentTrack(
                f"{len(self.timestamps)} timestamps for {len(self.time_points)} time points"
            )
        for a, b in zip(self.timestamps, self.timestamps[1:]):
            if not b > a:
                raise InconsistentTrack(f"timestamps not strictly increasing at {a} -> {b}")
        for pos, tp in enumerate(self.time_points):
            if tp.index != pos:
                raise InconsistentTrack(f"time point at position {pos} carries index {tp.index}")
            for snap in tp.snapshots:
                if snap.id in self._by_id:
                    raise InconsistentTrack(f"duplicate snapshot id {snap.id!r}")
                self._by_id[snap.id] = snap
                self._time_index[snap.id] = pos
        for edge in self.tracks:
            for sid in (edge.from_id, edge.to_id):
                if sid not in self._by_id:
                    raise InconsistentTrack(f"track edge references unknown snapshot {sid!r}")
            if self._time_index[edge.to_id] != self._time_index[edge.from_id] + 1:
                raise InconsistentTrack(
                    f"edge {edge.from_id!r} -> {edge.to_id!r} does not span consecutive time points"
                )
            self._out.setdefault(edge.from_id, []).append(edge)
            self._in.setdefault(edge.to_id, []).append(edge)
        self._check_degrees()

    def _check_degrees(self) -> None:
        for sid, edges in self._out.items():
            cont = [e for e in edges if e.kind == CONTINUATION]
            fission = [e for e in edges if e.kind == FISSION_CHILD]
            if len(cont) > 1:
                raise InconsistentTrack(f"{sid!r} has {len(cont)} outgoing continuation edges")
            if fission and cont:
                raise InconsistentTrack(f"{sid!r} both continues and divides")
            if len(fission) == 1:
                raise InconsistentTrack(f"fission parent {sid!r} has a single child edge")
        for sid, edges in self._in.items():
            cont = [e for e in edges if e.kind == CONTINUATION]
            fusion = [e for e in edges if e.kind == FUSION_PARENT]
            if len(cont) > 1:
                raise InconsistentTrack(f"{sid!r} has {len(cont)} incoming continuation edges")
            if fusion and cont:
                raise InconsistentTrack(f"{sid!r} both continues and fuses")
            if len(fusion) == 1:
                raise InconsistentTrack(f"fusion child {sid!r} has a single parent edge")

    # -- lookups ------------------------------------------------------------

    def __len__(self) -> int:
        return len(self.time_points)

    def snapshot(self, snapshot_id: str) -> ObjectSnapshot:
        try:
            return self._by_id[snapshot_id]
        except KeyError:
            raise UnknownSnapshot(f"no snapshot {snapshot_id!r} in dataset") from None

    def has_snapshot(self, snapshot_id: str) -> bool:
        return snapshot_id in self._by_id

    def time_index_of(self, snapshot_id: str) -> int:
        self.snapshot(snapshot_id)
        return self._time_index[snapshot_id]

    def edges_from(self, snapshot_id: str) -> tuple[TrackEdge, ...]:
        return tuple(self._out.get(snapshot_id, ()))

    def edges_to(self, snapshot_id: str) -> tuple[TrackEdge, ...]:
        return tuple(self._in.get(snapshot_id, ()))

    def all_snapshot_ids(self) -> tuple[str, ...]:
        return tuple(self._by_id)

    def extent(self) -> float:
        """Radius of the smallest viewer-centered ball holding every shape.

        Used to derive the display scale factor for one time point; constant
        over the dataset so object sizes stay comparable across time.
        """
        best = 0.0
        for tp in self.time_points:
            for snap in tp.snapshots:
                if isinstance(snap.shape, Sphere):
                    c = snap.shape.center
                    r = (c[0] ** 2 + c[1] ** 2 + c[2] ** 2) ** 0.5 + snap.shape.radius
                else:
                    r = max((v[0] ** 2 + v[1] ** 2 + v[2] ** 2) ** 0.5 for v in snap.shape.vertices)
                best = max(best, r)
        return best


@dataclass(frozen=True)
class Object4D:
    """A tracked object spanning multiple time points.

    ``intervals`` lists one (start index, end index) pair per branch of the
    object's chain decomposition, ordered like :func:`lineage_branches`.
    """

    root_id: str
    members: frozenset[str]
    intervals: tuple[tuple[int, int], ...]


def expand_4d_object(dataset: S4DDataset, seed_id: str, include_lineage: bool = True) -> Object4D:
    """Collect every snapshot connected to ``seed_id`` through track edges.

    With ``include_lineage`` the closure crosses fission/fusion events and
    returns the whole lineage; without it only continuation edges are
    followed, so the closure stops at the seed's own life.
    """
    dataset.snapshot(seed_id)
    members: set[str] = set()
    queue = deque([seed_id])
    while queue:
        sid = queue.popleft()
        if sid in members:
            continue
        members.add(sid)
        for edge in dataset.edges_from(sid):
            if include_lineage or edge.kind == CONTINUATION:
                queue.append(edge.to_id)
        for edge in dataset.edges_to(sid):
            if include_lineage or edge.kind == CONTINUATION:
                queue.append(edge.from_id)
    obj = Object4D(root_id=seed_id, members=frozenset(members), intervals=())
    chains = lineage_branches(obj, dataset)
    intervals = tuple(
        (dataset.time_index_of(chain[0]), dataset.time_index_of(chain[-1])) for chain in chains
    )
    return Object4D(root_id=seed_id, members=frozenset(members), intervals=intervals)


def lineage_branches(obj: Object4D, dataset: S4DDataset) -> list[list[str]]:
    """Partition an object's members into maximal continuation chains.

    Fission and fusion events terminate and start chains, so a dividing cell
    yields one branch before the event and one per child after it.  Branches
    are ordered by their first snapshot id for determinism.
    """
    members = obj.members
    for sid in members:
        if not dataset.has_snapshot(sid):
            raise InconsistentTrack(f"member {sid!r} not in dataset")

    def next_in_chain(sid: str) -> Optional[str]:
        for edge in dataset.edges_from(sid):
            if edge.kind == CONTINUATION and edge.to_id in members:
                return edge.to_id
        return None

    def prev_in_chain(sid: str) -> Optional[str]:
        for edge in dataset.edges_to(sid):
            if edge.kind == CONTINUATION and edge.from_id in members:
                return edge.from_id
        return None

    heads = [sid for sid in members if prev_in_chain(sid) is None]
    branches: list[list[str]] = []
    seen: set[str] = set()
    for head in sorted(heads):
        chain = [head]
        seen.add(head)
        nxt = next_in_chain(head)
        while nxt is not None:
            if nxt in seen:
                raise InconsistentTrack(f"continuation cycle through {nxt!r}")
            chain.append(nxt)
            seen.add(nxt)
            nxt = next_in_chain(nxt)
        branches.append(chain)
    if len(seen) != len(members):
        # every member must be reachable from some chain head
        raise InconsistentTrack("continuation chains do not cover the member set")
    return sorted(branches, key=lambda chain: chain[0])


def annotation_range(dataset: S4DDataset, field_name: str) -> tuple[float, float]:
    """Exact (min, max) of a numerical annotation over all snapshots.

    Snapshots lacking the field are ignored; a single categorical value makes
    the whole field categorical and raises.
    """
    lo: Optional[float] = None
    hi: Optional[float] = None
    found = False
    for tp in dataset.time_points:
        for snap in tp.snapshots:
            value = snap.annotations.get(field_name)
            if value is None:
                continue
            found = True
            if isinstance(value, str):
                raise NonNumericalField(f"field {field_name!r} holds categorical values")
            v = float(value)
            lo = v if lo is None or v < lo else lo
            hi = v if hi is None or v > hi else hi
    if not found:
        raise NoSuchField(f"field {field_name!r} absent from every snapshot")
    assert lo is not None and hi is not None
    return lo, hi


def field_kind(dataset: S4DDataset, field_name: str) -> str:
    """Classify a field as "numerical" or "categorical" by scanning values."""
    for tp in dataset.time_points:
        for snap in tp.snapshots:
            value = snap.annotations.get(field_name)
            if value is None:
                continue
            return "categorical" if isinstance(value, str) else "numerical"
    raise NoSuchField(f"field {field_name!r} absent from every snapshot")


def categorical_values(dataset: S4DDataset, field_name: str) -> list[str]:
    """Sorted distinct values of a categorical field."""
    values: set[str] = set()
    found = False
    for tp in dataset.time_points:
        for snap in tp.snapshots:
            value = snap.annotations.get(field_name)
            if value is None:
                continue
            found = True
            if isinstance(value, str):
                values.add(value)
    if not found:
        raise NoSuchField(f"field {field_name!r} absent from every snapshot")
    return sorted(values)
