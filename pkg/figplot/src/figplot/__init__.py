"""Figure rendering for scheduler metrics CSVs."""

from .plot import (
    Curve,
    MetricsPoint,
    build_curves,
    config_label,
    read_many,
    read_points,
    render_backlog_figure,
)

__all__ = [
    "Curve",
    "MetricsPoint",
    "build_curves",
    "config_label",
    "read_many",
    "read_points",
    "render_backlog_figure",
]
