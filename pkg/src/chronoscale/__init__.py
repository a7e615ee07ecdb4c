"""Multiscale timeline exhibit engine."""

from .analytics import Session, SummaryStats, analyze_entries, sessionize, summarize
from .choreographer import (
    ExhibitState,
    InputEvent,
    InputKind,
    Mode,
    PlanKind,
    TimingSettings,
    TransitionPlan,
    apply,
    initial_state,
    interpolate,
)
from .errors import ChronoError
from .ingest import (
    IngestConfig,
    RawRow,
    TimeUnit,
    build_dataset,
    dataset_from_dict,
    dataset_to_dict,
    dataset_to_json,
    dataset_to_table,
    load_dataset_file,
    parse_table,
    to_years_ago,
)
from .layout import (
    Scene,
    Viewport,
    color_of,
    compute_scene,
    format_measure,
    scene_to_dict,
    scene_to_json,
    tier_vertical_layout,
    x_position,
)
from .logbook import LogEntry, LogKind, entry_to_json, read_jsonl
from .model import Dataset, Event, Period, ValidationReport, period_of, validate
from .partition import PartitionParams, auto_partition, partition_report
from .service import DeploymentConfig, LogStore, create_server, serve
from .svg import Theme, render_svg

__version__ = "0.1.0"
