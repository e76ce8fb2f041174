"""Routine extraction from unsegmented UI logs."""

from ._routinelog import (
    RoutineLogError,
    alignment_cost,
    encode,
    extract,
    fitness,
    generate,
    inject_noise,
    jaccard_coefficient,
    segment,
)

__all__ = [
    "RoutineLogError",
    "alignment_cost",
    "encode",
    "extract",
    "fitness",
    "generate",
    "inject_noise",
    "jaccard_coefficient",
    "segment",
]
