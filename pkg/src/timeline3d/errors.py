"""Exception hierarchy shared by all timeline3d modules."""


class TimelineError(Exception):
    """Base class for all errors raised by timeline3d."""


# --- dataset model ---------------------------------------------------------

class DatasetError(TimelineError):
    """A dataset violates a structural invariant."""


class UnknownSnapshot(DatasetError):
    """A snapshot id is not present in the dataset."""


class InconsistentTrack(DatasetError):
    """The track graph violates its degree constraints."""


class NoSuchField(DatasetError):
    """An annotation field is absent from every snapshot."""


class NonNumericalField(DatasetError):
    """A numerical operation was requested on a categorical field."""


# --- design space ----------------------------------------------------------

class UnknownPreset(TimelineError):
    """The requested preset name is not one of the shipped designs."""


# --- layout engine ---------------------------------------------------------

class NonMonotonicTimestamps(TimelineError):
    """Timestamps passed to the scale mapping are not strictly increasing."""


class MissingBaseline(TimelineError):
    """A relative scale was applied to a branch without a baseline."""


class OutOfDomain(TimelineError):
    """An arc length falls outside the guiding curve's domain."""


class InvalidDesign(TimelineError):
    """A design with hard validation errors was handed to the solver."""


class UnknownCentral(TimelineError):
    """The requested central slot does not exist in the branch set."""


class DegenerateOperator(TimelineError):
    """A cut-away operator has no usable geometry (zero normal, empty box)."""


# --- benchmark -------------------------------------------------------------

class UnplaceablePattern(TimelineError):
    """Pattern occurrences cannot be injected without overlap or ambiguity."""


class MissingAnnotation(TimelineError):
    """A task requires an annotation the dataset does not carry."""


class NoAnswer(TimelineError):
    """An exploration trace holds no answer event inside the time limit."""


# --- session ---------------------------------------------------------------

class InvalidAction(TimelineError):
    """An action's arguments are invalid for the current session state."""


# --- io --------------------------------------------------------------------

class FormatError(TimelineError):
    """A JSON document does not match the expected schema."""
