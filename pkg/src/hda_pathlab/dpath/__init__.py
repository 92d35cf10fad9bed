"""Exact piecewise-linear d-paths on pre-cubical sets."""

from .pl import PLMap, PLMapError, frac, frac_str
from .presentation import (
    ConstantPath,
    PathPresentation,
    PresentationError,
    Segment,
    comparison_grid,
    is_natural,
    naturalize,
    path_length,
    paths_equal,
    tighten,
    vertices_of_path,
)
from .progress import (
    InfeasibleProgressFunction,
    NotATrackPresentation,
    ProgressFunction,
    path_from_progress,
    progress_from_path,
    stage_windows,
)
from .tame import (
    DifferentPaths,
    NotNaturalTame,
    NotTame,
    WrongLength,
    apply_R,
    apply_R_map,
    eval_R,
    eval_R_s,
    in_tame_form,
    is_regular,
    is_tame,
    minimal_presentation,
    presentations_equivalent,
    regularize,
    tamify,
    tamify_orbit,
    to_tame_presentation,
)
from .tracks import (
    Action,
    ActionTable,
    Track,
    TrackEntry,
    action_table,
    extract_track,
    normalize_presentation,
    track_length,
    validate_track,
)

__all__ = [
    "Action",
    "action_table",
    "ActionTable",
    "apply_R",
    "apply_R_map",
    "comparison_grid",
    "ConstantPath",
    "DifferentPaths",
    "eval_R",
    "eval_R_s",
    "extract_track",
    "frac",
    "frac_str",
    "in_tame_form",
    "InfeasibleProgressFunction",
    "is_natural",
    "is_regular",
    "is_tame",
    "minimal_presentation",
    "naturalize",
    "normalize_presentation",
    "NotATrackPresentation",
    "NotNaturalTame",
    "NotTame",
    "path_from_progress",
    "path_length",
    "PathPresentation",
    "paths_equal",
    "PLMap",
    "PLMapError",
    "PresentationError",
    "presentations_equivalent",
    "progress_from_path",
    "ProgressFunction",
    "regularize",
    "Segment",
    "stage_windows",
    "tamify",
    "tamify_orbit",
    "tighten",
    "to_tame_presentation",
    "Track",
    "track_length",
    "TrackEntry",
    "validate_track",
    "vertices_of_path",
    "WrongLength",
]
