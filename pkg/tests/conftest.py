import pytest

from timeline3d import bench
from timeline3d.model import (
    CONTINUATION,
    FISSION_CHILD,
    FUSION_PARENT,
    DatasetMeta,
    ObjectSnapshot,
    S4DDataset,
    Sphere,
    TimePoint,
    TrackEdge,
)


def sphere_snap(sid, center=(0.0, 0.0, 0.0), radius=0.5, **annotations):
    return ObjectSnapshot(id=sid, shape=Sphere(center=center, radius=radius), annotations=annotations)


def build_dataset(columns, tracks=(), timestamps=None, name="test"):
    """columns: list per time point of snapshot lists."""
    tps = [TimePoint(index=i, snapshots=tuple(snaps)) for i, snaps in enumerate(columns)]
    if timestamps is None:
        timestamps = [float(i) for i in range(len(columns))]
    return S4DDataset(
        time_points=tps, timestamps=timestamps, tracks=tuple(tracks), meta=DatasetMeta(name=name)
    )


@pytest.fixture
def line_dataset():
    """One object over 3 time points, plain continuation."""
    cols = [
        [sphere_snap("a0", value=1.0, group="left")],
        [sphere_snap("a1", value=2.0, group="left")],
        [sphere_snap("a2", value=4.0, group="right")],
    ]
    tracks = [TrackEdge("a0", "a1", CONTINUATION), TrackEdge("a1", "a2", CONTINUATION)]
    return build_dataset(cols, tracks)


@pytest.fixture
def chain6():
    """Six snapshots joined by 5 continuation edges."""
    cols = [[sphere_snap(f"c{i}")] for i in range(6)]
    tracks = [TrackEdge(f"c{i}", f"c{i+1}", CONTINUATION) for i in range(5)]
    return build_dataset(cols, tracks)


@pytest.fixture
def fission_dataset():
    """One parent snapshot dividing into two chains of length 3."""
    cols = [
        [sphere_snap("p")],
        [sphere_snap("l1"), sphere_snap("r1")],
        [sphere_snap("l2"), sphere_snap("r2")],
        [sphere_snap("l3"), sphere_snap("r3")],
    ]
    tracks = [
        TrackEdge("p", "l1", FISSION_CHILD),
        TrackEdge("p", "r1", FISSION_CHILD),
        TrackEdge("l1", "l2", CONTINUATION),
        TrackEdge("l2", "l3", CONTINUATION),
        TrackEdge("r1", "r2", CONTINUATION),
        TrackEdge("r2", "r3", CONTINUATION),
    ]
    return build_dataset(cols, tracks)


@pytest.fixture
def fusion_dataset():
    """Two chains merging into one at index 2."""
    cols = [
        [sphere_snap("a0"), sphere_snap("b0")],
        [sphere_snap("a1"), sphere_snap("b1")],
        [sphere_snap("m2")],
        [sphere_snap("m3")],
    ]
    tracks = [
        TrackEdge("a0", "a1", CONTINUATION),
        TrackEdge("b0", "b1", CONTINUATION),
        TrackEdge("a1", "m2", FUSION_PARENT),
        TrackEdge("b1", "m2", FUSION_PARENT),
        TrackEdge("m2", "m3", CONTINUATION),
    ]
    return build_dataset(cols, tracks)


@pytest.fixture(scope="session")
def bench_dataset():
    dataset, truth = bench.generate(bench.GenConfig(time_point_count=40, seed=11))
    return dataset, truth


@pytest.fixture(scope="session")
def bench_dataset_80():
    dataset, truth = bench.generate(bench.GenConfig(time_point_count=80, seed=5))
    return dataset, truth
