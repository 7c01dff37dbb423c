"""The 4-dimension design space for 3D timelines.

A timeline design fixes one choice per dimension: how temporal distance maps
to displayed distance (scale), how the timeline is partitioned into branches
(layout), the guiding curve along which time points are placed
(representation), and the 3D geometry arranging multiple branches (support).
Designs are immutable values; cross-dimension rules live in
:func:`validate_design`, which reports rather than raises so a UI can show
why a combination is rejected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Optional, Union

from .errors import UnknownPreset

Vec3 = tuple[float, float, float]


# --- scale -----------------------------------------------------------------

@dataclass(frozen=True)
class ChronologicalLinear:
    """Displayed distance proportional to temporal distance."""

    unit_length: float  # meters per second

    def __post_init__(self) -> None:
        _require_positive("unit_length", self.unit_length)


@dataclass(frozen=True)
class ChronologicalLog:
    """Logarithmic temporal distance, for long-tailed event distributions."""

    unit_length: float
    epsilon: float  # seconds; softens the singularity at zero temporal distance

    def __post_init__(self) -> None:
        _require_positive("unit_length", self.unit_length)
        _require_positive("epsilon", self.epsilon)


@dataclass(frozen=True)
class Relative:
    """Branches aligned on a per-branch baseline event.

    ``baselines`` maps branch id to the baseline time index; an integer
    applies the same time index to every branch.
    """

    unit_length: float
    baselines: Union[int, Mapping[str, int]] = 0

    def __post_init__(self) -> None:
        _require_positive("unit_length", self.unit_length)
        indices = (self.baselines,) if isinstance(self.baselines, int) else self.baselines.values()
        for index in indices:
            if index < 0:
                raise ValueError(f"baseline time index must be >= 0, got {index}")

    def baseline_for(self, branch_id: str) -> Optional[int]:
        if isinstance(self.baselines, int):
            return self.baselines
        value = self.baselines.get(branch_id)
        return None if value is None else int(value)


@dataclass(frozen=True)
class Sequential:
    """Fixed displayed distance between consecutive time points."""

    unit_length: float  # meters per step

    def __post_init__(self) -> None:
        _require_positive("unit_length", self.unit_length)


ScaleSpec = Union[ChronologicalLinear, ChronologicalLog, Relative, Sequential]


# --- layout ----------------------------------------------------------------

@dataclass(frozen=True)
class Unified:
    pass


@dataclass(frozen=True)
class Faceted:
    """Several juxtaposed branches; ``branch_count`` is the nominal count.

    The actual branch list is driven by the rendered content (selection,
    lineage events); the count here sizes the design, it does not clip data.
    """

    branch_count: int = 2

    def __post_init__(self) -> None:
        if self.branch_count < 2:
            raise ValueError(f"faceted layout needs >= 2 branches, got {self.branch_count}")


Faceting = Union[Unified, Faceted]


@dataclass(frozen=True)
class Segmented:
    period: int  # time points per segment

    def __post_init__(self) -> None:
        if self.period < 2:
            raise ValueError(f"segmentation period must be >= 2, got {self.period}")


@dataclass(frozen=True)
class LayoutSpec:
    faceting: Faceting = Unified()
    segmentation: Optional[Segmented] = None
    branch_gap: float = 0.5  # meters between juxtaposed branches

    def __post_init__(self) -> None:
        if self.branch_gap < 0:
            raise ValueError(f"branch_gap must be >= 0, got {self.branch_gap}")


# --- representation --------------------------------------------------------

@dataclass(frozen=True)
class FlatLine:
    """Straight guiding curve through the anchor point."""

    direction: Vec3 = (1.0, 0.0, 0.0)

    def __post_init__(self) -> None:
        norm = math.sqrt(sum(c * c for c in self.direction))
        if not math.isclose(norm, 1.0, abs_tol=1e-9):
            raise ValueError(f"direction must be a unit vector, norm {norm}")


@dataclass(frozen=True)
class ConvexArc:
    """Arc of a horizontal circle bending around the viewer."""

    center: Vec3 = (0.0, 0.0, 0.0)
    radius: float = 2.0

    def __post_init__(self) -> None:
        _require_positive("radius", self.radius)


@dataclass(frozen=True)
class ConvexParabola:
    """Planar parabola whose far ends wrap back toward the viewer."""

    coefficient: float  # curvature a in z = -d0 + a*x^2
    apex_distance: float  # d0, meters in front of the viewer

    def __post_init__(self) -> None:
        _require_positive("coefficient", self.coefficient)
        _require_positive("apex_distance", self.apex_distance)


@dataclass(frozen=True)
class ConcaveParabola:
    """Planar parabola whose far ends recede away from the viewer."""

    coefficient: float
    apex_distance: float

    def __post_init__(self) -> None:
        _require_positive("coefficient", self.coefficient)
        _require_positive("apex_distance", self.apex_distance)


@dataclass(frozen=True)
class Helicoid:
    """Time points coiled around a vertical cylinder.

    ``points_per_loop`` is the intended number of layout slots per full turn;
    :func:`helicoid_step` derives the matching sequential step length.
    """

    axis_point: Vec3 = (0.0, 0.0, 0.0)
    radius: float = 1.2
    points_per_loop: int = 20
    pitch: float = 0.4  # vertical rise per loop, meters

    def __post_init__(self) -> None:
        _require_positive("radius", self.radius)
        _require_positive("pitch", self.pitch)
        if self.points_per_loop < 3:
            raise ValueError(f"points_per_loop must be >= 3, got {self.points_per_loop}")

    @property
    def loop_length(self) -> float:
        """Arc length of one full helix turn."""
        return math.sqrt((2.0 * math.pi * self.radius) ** 2 + self.pitch**2)


@dataclass(frozen=True)
class Spherical:
    """Pole-to-pole spiral on a sphere centered on the viewer."""

    center: Vec3 = (0.0, 0.0, 0.0)
    radius: float = 2.0
    loops: int = 4

    def __post_init__(self) -> None:
        _require_positive("radius", self.radius)
        if self.loops < 1:
            raise ValueError(f"loops must be >= 1, got {self.loops}")


RepresentationSpec = Union[
    FlatLine, ConvexArc, ConvexParabola, ConcaveParabola, Helicoid, Spherical
]


def helicoid_step(rep: Helicoid) -> float:
    """Sequential step length that honors ``points_per_loop``."""
    return rep.loop_length / rep.points_per_loop


# --- support ---------------------------------------------------------------

@dataclass(frozen=True)
class VerticalPlane:
    pass


@dataclass(frozen=True)
class HorizontalPlane:
    pass


@dataclass(frozen=True)
class MultiplePlanes:
    count: int = 2
    plane_gap: float = 0.5

    def __post_init__(self) -> None:
        if self.count < 2:
            raise ValueError(f"plane count must be >= 2, got {self.count}")
        _require_positive("plane_gap", self.plane_gap)


@dataclass(frozen=True)
class Cubic:
    """Branches arranged as a 2D array of cells (row-major by branch index)."""

    rows: int = 2
    cols: int = 2

    def __post_init__(self) -> None:
        if self.rows < 1 or self.cols < 1:
            raise ValueError(f"rows and cols must be >= 1, got {self.rows}x{self.cols}")


@dataclass(frozen=True)
class ConcentricCylinders:
    radius_step: float = 0.5

    def __post_init__(self) -> None:
        _require_positive("radius_step", self.radius_step)


SupportSpec = Union[VerticalPlane, HorizontalPlane, MultiplePlanes, Cubic, ConcentricCylinders]


# --- the design ------------------------------------------------------------

@dataclass(frozen=True)
class TimelineDesign:
    scale: ScaleSpec
    layout: LayoutSpec
    representation: RepresentationSpec
    support: SupportSpec
    snapshot_scale: float = 0.3  # display size of one time point, meters
    # Degenerate baseline design: render only the central time point.  Hosts
    # the "no timeline" condition inside the design space instead of a
    # separate code path.
    central_only: bool = False

    def __post_init__(self) -> None:
        _require_positive("snapshot_scale", self.snapshot_scale)


# --- validation ------------------------------------------------------------

SEVERITY_ERROR = "error"
SEVERITY_WARNING = "warning"
SEVERITY_INFO = "info"


@dataclass(frozen=True)
class Violation:
    severity: str
    code: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.hard_errors

    @property
    def hard_errors(self) -> tuple[Violation, ...]:
        return tuple(v for v in self.violations if v.severity == SEVERITY_ERROR)

    @property
    def warnings(self) -> tuple[Violation, ...]:
        return tuple(v for v in self.violations if v.severity == SEVERITY_WARNING)


def validate_design(design: TimelineDesign) -> ValidationReport:
    """Check the cross-dimension rules of the design space.

    Pure and total: any syntactically valid design yields a report.  Hard
    errors mark combinations with no usable geometry; warnings flag designs
    the criteria advise against; "support-unused" notes that the support
    dimension is irrelevant for single-branch layouts.
    """
    out: list[Violation] = []
    rep = design.representation
    faceted = isinstance(design.layout.faceting, Faceted)
    segmented = design.layout.segmentation is not None
    coiled = isinstance(rep, (Helicoid, Spherical))

    if coiled and faceted and not isinstance(design.support, ConcentricCylinders):
        out.append(
            Violation(
                SEVERITY_ERROR,
                "coiled-support-mismatch",
                f"a faceted {type(rep).__name__.lower()} representation needs a "
                "concentric-cylinders support: coiled branches occupy the vertical "
                "axis, so flat supports cannot separate them",
            )
        )
    if isinstance(design.support, Cubic) and not faceted and not segmented:
        out.append(
            Violation(
                SEVERITY_ERROR,
                "cubic-needs-branches",
                "a cubic support arranges branches in a 2D array, but a unified "
                "unsegmented layout produces a single branch",
            )
        )
    if isinstance(rep, Spherical) and segmented:
        out.append(
            Violation(
                SEVERITY_WARNING,
                "spherical-segmented",
                "the varying loop radius of a spherical representation restrains "
                "its use for periodic (segmented) data",
            )
        )
    if isinstance(rep, Helicoid) and faceted:
        out.append(
            Violation(
                SEVERITY_WARNING,
                "helicoid-faceted",
                "juxtaposed branches can be confused with the next loop of the "
                "helicoid",
            )
        )
    if not faceted and not segmented:
        out.append(
            Violation(
                SEVERITY_INFO,
                "support-unused",
                "support dimension is unused: the layout yields a single branch",
            )
        )
    return ValidationReport(tuple(out))


# --- presets ---------------------------------------------------------------

PRESET_NAMES = ("helicoid-unified", "curved-faceted", "no-timeline")


def preset(name: str) -> TimelineDesign:
    """One of the three shipped designs.

    ``helicoid-unified``: unified timeline coiled around the viewer on a
    cylinder; the sequential step is derived from the helicoid's
    points-per-loop so each loop holds exactly that many time points.
    ``curved-faceted``: branches on congruent circular arcs around the
    viewer, stacked on a vertical plane.  ``no-timeline``: the baseline
    condition showing only the central time point.
    """
    if name == "helicoid-unified":
        rep = Helicoid(axis_point=(0.0, 0.0, 0.0), radius=1.2, points_per_loop=20, pitch=0.4)
        return TimelineDesign(
            scale=Sequential(unit_length=helicoid_step(rep)),
            layout=LayoutSpec(faceting=Unified(), segmentation=None, branch_gap=0.5),
            representation=rep,
            support=ConcentricCylinders(radius_step=0.5),
            snapshot_scale=0.25,
        )
    if name == "curved-faceted":
        return TimelineDesign(
            scale=Sequential(unit_length=0.25),
            layout=LayoutSpec(faceting=Faceted(branch_count=2), segmentation=None, branch_gap=0.5),
            representation=ConvexArc(center=(0.0, 0.0, 0.0), radius=4.0),
            support=VerticalPlane(),
            snapshot_scale=0.2,
        )
    if name == "no-timeline":
        return TimelineDesign(
            scale=Sequential(unit_length=0.3),
            layout=LayoutSpec(faceting=Unified(), segmentation=None, branch_gap=0.5),
            representation=FlatLine(direction=(1.0, 0.0, 0.0)),
            support=VerticalPlane(),
            snapshot_scale=0.3,
            central_only=True,
        )
    raise UnknownPreset(f"no preset named {name!r}; choose from {PRESET_NAMES}")


def _require_positive(name: str, value: float) -> None:
    if not value > 0:
        raise ValueError(f"{name} must be > 0, got {value}")
