"""Procedural benchmark datasets with exact ground truth, and trace scoring.

The generator builds the evaluation dataset family: a handful of spheres
on a ring whose sizes grow monotonously, each carrying a group label from
a seeded random walk with a known number of injected 3-step group
patterns, plus a shared per-time-point value built from one Gaussian per
20-point segment.  Every stochastic choice flows from one seeded
generator, and generation re-rolls until the brute-force pattern matcher
and the value argmax agree exactly with the recorded ground truth, so the
oracles are exact by construction, not by hope.

A second generator grows a binary fission tree (cells dividing on a fixed
interval) for lineage-layout exercises.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from .errors import MissingAnnotation, NoAnswer, UnplaceablePattern
from .model import (
    CONTINUATION,
    FISSION_CHILD,
    DatasetMeta,
    ObjectSnapshot,
    S4DDataset,
    Sphere,
    TimePoint,
    TrackEdge,
    expand_4d_object,
    lineage_branches,
)

_MAX_ATTEMPTS = 200
_STAY_PROBABILITY = 0.8
_BASE_RADIUS = 0.1
_RING_RADIUS = 1.0
_TIMESTAMP_STEP = 89.0  # seconds between captures
_DIVISION_INTERVAL = 5  # time points per cell generation


# --- configuration and ground truth ----------------------------------------

@dataclass(frozen=True)
class GenConfig:
    time_point_count: int = 80
    object_count: int = 6
    group_count: int = 5
    pattern: tuple[int, int, int] = (0, 1, 2)
    pattern_occurrences: int = 5
    gaussians_per_segment_length: int = 20
    seed: int = 0

    def __post_init__(self) -> None:
        if self.time_point_count < 1:
            raise ValueError("time_point_count must be >= 1")
        if self.object_count < 1:
            raise ValueError("object_count must be >= 1")
        if self.group_count < 1:
            raise ValueError("group_count must be >= 1")
        if len(self.pattern) != 3:
            raise ValueError("pattern must be a triple of group ids")
        if any(not 0 <= g < self.group_count for g in self.pattern):
            raise ValueError(f"pattern groups must be < {self.group_count}")
        if self.pattern_occurrences < 0:
            raise ValueError("pattern_occurrences must be >= 0")
        if self.gaussians_per_segment_length < 1:
            raise ValueError("gaussians_per_segment_length must be >= 1")


@dataclass(frozen=True)
class GroundTruth:
    """Exact answers recorded at generation time.

    ``occurrences`` lists (object ordinal, start index) pairs for the
    injected pattern; ``gaussians`` holds (mean, amplitude, sigma) per
    segment of the value field.
    """

    pattern: tuple[int, int, int]
    occurrences: tuple[tuple[int, int], ...]
    value_argmax: int
    group_counts: dict[str, int]
    gaussians: tuple[tuple[float, float, float], ...]


def group_label(group: int) -> str:
    return f"g{group}"


def object_id(obj: int, t: int) -> str:
    # zero-padded so lexicographic id order equals numeric object order
    return f"obj{obj:03d}-t{t:04d}"


# --- generation ------------------------------------------------------------

def generate(config: GenConfig) -> tuple[S4DDataset, GroundTruth]:
    """Benchmark dataset plus its exact ground truth.

    Deterministic per (config, seed).  Raises UnplaceablePattern when the
    requested occurrences cannot fit without overlap, either by counting
    capacity up front or after repeated failed draws.
    """
    T = config.time_point_count
    n = config.object_count
    if config.pattern_occurrences > 0 and T < 3:
        raise UnplaceablePattern("pattern needs at least 3 time points")
    capacity = n * (T // 3) if T >= 3 else 0
    if config.pattern_occurrences > capacity:
        raise UnplaceablePattern(
            f"{config.pattern_occurrences} occurrences cannot fit: capacity {capacity}"
        )

    rng = np.random.default_rng(config.seed)
    groups: Optional[list[list[int]]] = None
    occurrences: tuple[tuple[int, int], ...] = ()
    for _ in range(_MAX_ATTEMPTS):
        candidate = _draw_groups(rng, config)
        if candidate is None:
            continue
        drawn_groups, injected = candidate
        found = tuple(_match_pattern(drawn_groups, config.pattern))
        if found == injected:
            groups, occurrences = drawn_groups, injected
            break
    if groups is None:
        raise UnplaceablePattern(
            f"no clean placement of {config.pattern_occurrences} occurrences "
            f"after {_MAX_ATTEMPTS} attempts"
        )

    values, gaussians = _draw_values(rng, config)

    time_points = []
    for t in range(T):
        snapshots = []
        for j in range(n):
            angle = 2.0 * math.pi * j / n
            center = (_RING_RADIUS * math.cos(angle), 0.0, _RING_RADIUS * math.sin(angle))
            radius = _BASE_RADIUS * (1.0 + 0.01 * t)
            snapshots.append(
                ObjectSnapshot(
                    id=object_id(j, t),
                    shape=Sphere(center=center, radius=radius),
                    annotations={
                        "group": group_label(groups[j][t]),
                        "value": float(values[t]),
                        "volume": (4.0 / 3.0) * math.pi * radius**3,
                    },
                )
            )
        time_points.append(TimePoint(index=t, snapshots=tuple(snapshots)))

    tracks = tuple(
        TrackEdge(object_id(j, t), object_id(j, t + 1), CONTINUATION)
        for j in range(n)
        for t in range(T - 1)
    )
    dataset = S4DDataset(
        time_points=tuple(time_points),
        timestamps=tuple(_TIMESTAMP_STEP * t for t in range(T)),
        tracks=tracks,
        meta=DatasetMeta(name="synthetic-benchmark", time_unit="s", space_unit="m"),
    )

    group_counts = {group_label(g): 0 for g in range(config.group_count)}
    for j in range(n):
        for t in range(T):
            group_counts[group_label(groups[j][t])] += 1

    truth = GroundTruth(
        pattern=config.pattern,
        occurrences=occurrences,
        value_argmax=int(np.argmax(values)),
        group_counts=group_counts,
        gaussians=gaussians,
    )
    return dataset, truth


def _draw_groups(
    rng: np.random.Generator, config: GenConfig
) -> Optional[tuple[list[list[int]], tuple[tuple[int, int], ...]]]:
    """One attempt: random walks plus non-overlapping pattern injection."""
    T, n, G = config.time_point_count, config.object_count, config.group_count
    groups: list[list[int]] = []
    for _ in range(n):
        walk = [int(rng.integers(G))]
        for _ in range(T - 1):
            if G > 1 and rng.random() >= _STAY_PROBABILITY:
                step = int(rng.integers(G - 1))
                walk.append(step if step < walk[-1] else step + 1)
            else:
                walk.append(walk[-1])
        groups.append(walk)

    taken: dict[int, list[tuple[int, int]]] = {}
    injected: list[tuple[int, int]] = []
    budget = 50 * max(1, config.pattern_occurrences)
    while len(injected) < config.pattern_occurrences:
        if budget == 0:
            return None
        budget -= 1
        j = int(rng.integers(n))
        start = int(rng.integers(T - 2))
        if any(not (start + 2 < s or e < start) for s, e in taken.get(j, [])):
            continue
        taken.setdefault(j, []).append((start, start + 2))
        injected.append((j, start))
    for j, start in injected:
        groups[j][start:start + 3] = list(config.pattern)
    return groups, tuple(sorted(injected))


def _match_pattern(
    groups: Sequence[Sequence[int]], pattern: tuple[int, int, int]
) -> list[tuple[int, int]]:
    """Brute force over every (object, start) window."""
    out = []
    for j, walk in enumerate(groups):
        for start in range(len(walk) - 2):
            if tuple(walk[start:start + 3]) == pattern:
                out.append((j, start))
    return sorted(out)


def _draw_values(
    rng: np.random.Generator, config: GenConfig
) -> tuple[np.ndarray, tuple[tuple[float, float, float], ...]]:
    """Sum of one Gaussian per segment, re-rolled until the argmax is unique."""
    T = config.time_point_count
    seg = config.gaussians_per_segment_length
    segment_count = max(1, math.ceil(T / seg))
    ts = np.arange(T, dtype=float)
    for _ in range(_MAX_ATTEMPTS):
        params = []
        total = np.zeros(T)
        for k in range(segment_count):
            lo = k * seg
            hi = min((k + 1) * seg, T)
            mean = float(rng.uniform(lo, hi - 1)) if hi - 1 > lo else float(lo)
            amplitude = float(rng.uniform(0.5, 1.5))
            sigma = float(rng.uniform(2.0, 5.0))
            params.append((mean, amplitude, sigma))
            total += amplitude * np.exp(-((ts - mean) ** 2) / (2.0 * sigma**2))
        peak = float(np.max(total))
        if int(np.sum(total == peak)) == 1:
            return total, tuple(params)
    raise UnplaceablePattern("could not draw a value field with a unique argmax")


# --- tasks and oracles -----------------------------------------------------

TASK_TIME_LIMIT = 180.0  # seconds, for counting and pattern search


@dataclass(frozen=True)
class Locate:
    target: int


@dataclass(frozen=True)
class Count:
    group: str


@dataclass(frozen=True)
class Pattern:
    triple: tuple[int, int, int]


@dataclass(frozen=True)
class Maximum:
    pass


TaskKind = Union[Locate, Count, Pattern, Maximum]

_AUTO = -1.0


@dataclass(frozen=True)
class TaskSpec:
    kind: TaskKind
    time_limit: Optional[float] = _AUTO

    def __post_init__(self) -> None:
        if self.time_limit == _AUTO:
            limit = TASK_TIME_LIMIT if isinstance(self.kind, (Count, Pattern)) else None
            object.__setattr__(self, "time_limit", limit)


def oracle(dataset: S4DDataset, truth: GroundTruth, task: TaskSpec):
    """Exact answer for a task on a generated dataset."""
    kind = task.kind
    if isinstance(kind, Locate):
        if not 0 <= kind.target < len(dataset):
            raise ValueError(f"locate target {kind.target} outside the dataset")
        return kind.target
    if isinstance(kind, Count):
        count = 0
        found = False
        for tp in dataset.time_points:
            for snap in tp.snapshots:
                value = snap.annotations.get("group")
                if value is not None:
                    found = True
                if value == kind.group:
                    count += 1
        if not found:
            raise MissingAnnotation("dataset has no group annotation")
        return count
    if isinstance(kind, Pattern):
        return _oracle_pattern(dataset, kind.triple)
    if isinstance(kind, Maximum):
        best_t: Optional[int] = None
        best_v = -math.inf
        for tp in dataset.time_points:
            for snap in tp.snapshots:
                value = snap.annotations.get("value")
                if value is None or isinstance(value, str):
                    continue
                if float(value) > best_v:
                    best_v = float(value)
                    best_t = tp.index
        if best_t is None:
            raise MissingAnnotation("dataset has no value annotation")
        return best_t
    raise TypeError(f"unknown task kind {type(kind).__name__}")


def _oracle_pattern(
    dataset: S4DDataset, pattern: tuple[int, int, int]
) -> list[tuple[int, int]]:
    """Re-derive (object ordinal, start) matches from the dataset alone.

    Objects are the continuation chains of the track graph in id order,
    which reproduces the generator's object ordinals.
    """
    target = tuple(group_label(g) for g in pattern)
    chains: list[list[str]] = []
    assigned: set[str] = set()
    for sid in sorted(dataset.all_snapshot_ids()):
        if sid in assigned:
            continue
        obj = expand_4d_object(dataset, sid, include_lineage=True)
        assigned.update(obj.members)
        chains.extend(lineage_branches(obj, dataset))
    chains.sort(key=lambda chain: chain[0])
    out = []
    found = False
    for j, chain in enumerate(chains):
        labels = []
        for sid in chain:
            value = dataset.snapshot(sid).annotations.get("group")
            if value is not None:
                found = True
            labels.append(value)
        base = dataset.time_index_of(chain[0])
        for i in range(len(labels) - 2):
            if tuple(labels[i:i + 3]) == target:
                out.append((j, base + i))
    if not found:
        raise MissingAnnotation("dataset has no group annotation")
    return sorted(out)


# --- traces and scoring ----------------------------------------------------

@dataclass(frozen=True)
class TraceEvent:
    at: float  # seconds since the task started
    kind: str  # "scroll" | "jump" | "select" | "answer" | ...
    payload: object = None


@dataclass(frozen=True)
class ExplorationTrace:
    events: tuple[TraceEvent, ...]

    def __post_init__(self) -> None:
        for a, b in zip(self.events, self.events[1:]):
            if b.at < a.at:
                raise ValueError(f"trace timestamps decrease at {b.at} < {a.at}")


@dataclass(frozen=True)
class TaskResult:
    answer: object
    elapsed: float
    metrics: dict[str, float] = field(default_factory=dict)


def score(trace: ExplorationTrace, task: TaskSpec, oracle_answer) -> TaskResult:
    """Metrics for a recorded exploration against the oracle's answer.

    The time limit truncates the trace: an answer given after the limit
    counts as no answer at all.
    """
    answer_event = next((e for e in trace.events if e.kind == "answer"), None)
    if answer_event is None:
        raise NoAnswer("trace contains no answer event")
    if task.time_limit is not None and answer_event.at > task.time_limit:
        raise NoAnswer(
            f"answer at {answer_event.at:.1f}s is past the {task.time_limit:.0f}s limit"
        )
    answer = answer_event.payload
    elapsed = answer_event.at

    kind = task.kind
    if isinstance(kind, Locate):
        metrics = {"difference": float(abs(int(answer) - int(oracle_answer)))}
    elif isinstance(kind, Count):
        true = int(oracle_answer)
        metrics = {"error_rate": abs(int(answer) - true) / max(true, 1)}
    elif isinstance(kind, Pattern):
        answered = {(int(j), int(s)) for j, s in answer}
        true_set = {(int(j), int(s)) for j, s in oracle_answer}
        hits = len(answered & true_set)
        metrics = {
            "precision": hits / len(answered) if answered else 1.0,
            "recall": hits / len(true_set) if true_set else 1.0,
        }
    elif isinstance(kind, Maximum):
        metrics = {"accuracy": 1.0 if int(answer) == int(oracle_answer) else 0.0}
    else:
        raise TypeError(f"unknown task kind {type(kind).__name__}")
    return TaskResult(answer=answer, elapsed=elapsed, metrics=metrics)


# --- lineage surrogate -----------------------------------------------------

def generate_lineage_surrogate(seed: int, generations: int) -> S4DDataset:
    """Binary fission tree: one root cell dividing every fixed interval.

    Each generation lives ``_DIVISION_INTERVAL`` time points, then splits
    into two children with perturbed positions and radii.  Dividing cells
    carry a "lifespan" annotation counting the remaining time points
    before their division; terminal cells are left unannotated.
    """
    if generations < 0:
        raise ValueError("generations must be >= 0")
    if generations > 8:
        raise ValueError("generations > 8 leaves the desk scale")
    rng = np.random.default_rng(seed)
    interval = _DIVISION_INTERVAL
    T = (generations + 1) * interval

    @dataclass
    class Cell:
        path: str
        center: tuple[float, float, float]
        radius: float
        start: int  # first time index of this generation

    cells: list[Cell] = [Cell("r", (0.0, 0.0, 0.0), 0.4, 0)]
    by_time: dict[int, list[tuple[Cell, int]]] = {t: [] for t in range(T)}
    tracks: list[TrackEdge] = []

    generation = [cells[0]]
    for g in range(generations + 1):
        for cell in generation:
            for t in range(cell.start, cell.start + interval):
                by_time[t].append((cell, t))
        if g == generations:
            break
        next_generation: list[Cell] = []
        for cell in generation:
            last_t = cell.start + interval - 1
            for side in (0, 1):
                direction = -1.0 if side == 0 else 1.0
                spread = 0.3 * (0.7**g)
                jitter = rng.normal(0.0, 0.03, size=3)
                child = Cell(
                    path=cell.path + str(side),
                    center=(
                        cell.center[0] + direction * spread + float(jitter[0]),
                        cell.center[1] + float(jitter[1]),
                        cell.center[2] + float(jitter[2]),
                    ),
                    radius=cell.radius * float(rng.uniform(0.75, 0.85)),
                    start=last_t + 1,
                )
                next_generation.append(child)
                tracks.append(
                    TrackEdge(
                        _cell_id(cell.path, last_t),
                        _cell_id(child.path, child.start),
                        FISSION_CHILD,
                    )
                )
        generation = next_generation

    time_points = []
    for t in range(T):
        snapshots = []
        for cell, _ in sorted(by_time[t], key=lambda item: item[0].path):
            divides = len(cell.path) - 1 < generations
            annotations: dict[str, float] = {}
            if divides:
                annotations["lifespan"] = float(cell.start + interval - 1 - t)
            snapshots.append(
                ObjectSnapshot(
                    id=_cell_id(cell.path, t),
                    shape=Sphere(center=cell.center, radius=cell.radius),
                    annotations=annotations,
                )
            )
            if t + 1 < cell.start + interval:
                tracks.append(
                    TrackEdge(_cell_id(cell.path, t), _cell_id(cell.path, t + 1), CONTINUATION)
                )
        time_points.append(TimePoint(index=t, snapshots=tuple(snapshots)))

    return S4DDataset(
        time_points=tuple(time_points),
        timestamps=tuple(10.0 * t for t in range(T)),
        tracks=tuple(tracks),
        meta=DatasetMeta(name="lineage-surrogate", time_unit="s", space_unit="m"),
    )


def _cell_id(path: str, t: int) -> str:
    return f"cell-{path}-t{t:04d}"
