"""Exact Alpern towers whose base is independent of a finite partition."""

from ._alpern import (
    AlpernError,
    Column,
    ColumnSystem,
    SeamEdge,
    TowerResult,
    bottom_staircase,
    build_cyclic,
    build_rotation,
    build_tower,
    compute_b,
    compute_delta,
    compute_gamma,
    enrich_rotation,
    format_labels,
    independence,
    is_rich,
    parse_labels,
    parse_system,
    read_report,
    render_ascii,
    render_svg,
    required_M,
    top_staircase,
    verify,
    write_report,
)

__all__ = [name for name in dir() if not name.startswith("_")]
