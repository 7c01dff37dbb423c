"""3D timelines for time-varying spatial datasets.

Data model, design space, layout solver, synthetic benchmark, and an
event-sourced exploration session, with JSON file formats, a CLI, and an
HTTP service on top.
"""

from .bench import (
    Count,
    ExplorationTrace,
    GenConfig,
    GroundTruth,
    Locate,
    Maximum,
    Pattern,
    TaskResult,
    TaskSpec,
    TraceEvent,
    generate,
    generate_lineage_surrogate,
    oracle,
    score,
)
from .colormap import NEUTRAL_GRAY, ColorMap, categorical_color, viridis
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
    PRESET_NAMES,
    Relative,
    Segmented,
    Sequential,
    Spherical,
    TimelineDesign,
    Unified,
    ValidationReport,
    VerticalPlane,
    preset,
    validate_design,
)
from .errors import (
    DatasetError,
    DegenerateOperator,
    FormatError,
    InconsistentTrack,
    InvalidAction,
    InvalidDesign,
    MissingAnnotation,
    MissingBaseline,
    NoAnswer,
    NonMonotonicTimestamps,
    NonNumericalField,
    NoSuchField,
    OutOfDomain,
    TimelineError,
    UnknownCentral,
    UnknownPreset,
    UnknownSnapshot,
    UnplaceablePattern,
)
from .layout import (
    Branch,
    BranchSlot,
    CollapseRange,
    CutBox,
    CutPlane,
    GapIndicator,
    LayoutResult,
    Placement,
    ScaleMap,
    apply_cutaway,
    barycenter,
    billboard_quaternion,
    check_cutaway_operator,
    recentral,
    scale_map,
    solve_layout,
)
from .model import (
    DatasetMeta,
    Mesh,
    Object4D,
    ObjectSnapshot,
    S4DDataset,
    Sphere,
    TimePoint,
    TrackEdge,
    annotation_range,
    categorical_values,
    expand_4d_object,
    field_kind,
    lineage_branches,
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
    apply,
    argmax_invariance_check,
    initial_state,
    render_state,
    replay,
)

__version__ = "0.1.0"
