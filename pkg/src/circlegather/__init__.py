"""Exact simulation and verification of circle gathering with limited visibility."""

from .angles import (
    Arc,
    HALF_TURN,
    QUARTER_TURN,
    angular_distance,
    antipode,
    ccw_angle,
    cw_angle,
    format_angle,
    in_arc,
    norm,
    parse_angle,
    sort_cw_from,
)
from .analysis import (
    ConfigurationClass,
    LeaderClass,
    LeaderTag,
    Possibility,
    analysis_report,
    classify,
    classify_all,
    configuration_class,
    expected_leaders,
    hypothesis_configs,
    is_safe_neighbor,
)
from .configuration import (
    Configuration,
    Robot,
    Snapshot,
    VisiblePoint,
    angle_sequence,
    gap_sequence,
    is_rotationally_symmetric,
    lex_compare,
    take_snapshot,
    true_leader,
)
from .errors import (
    AmbiguousSymmetric,
    CircleGatherError,
    ContractViolation,
    GenerationExhausted,
    InvariantViolation,
    LimitExceeded,
    MultiplicityPresent,
    ParseError,
    ScheduleError,
    SymmetricConfiguration,
)
from .oracle import (
    CheckResult,
    GeneratorSpec,
    brute_force_leader,
    check_propositions,
    oracle_classify,
    random_config,
    search_class,
    shrink_config,
)
from .protocol import Memory, MoveCommand, decide
from .render import RenderSpec, render_svg
from .sim import (
    AsyncRandomPolicy,
    FsyncPolicy,
    RunLimits,
    RunOptions,
    ScriptedPolicy,
    SsyncPolicy,
    Trace,
    TraceRecord,
    run,
)

__version__ = "0.1.0"
