"""Python bindings for the kgef knowledge-graph toolkit."""

from ._core import (
    AuthorRecord,
    ExposureRatio,
    Graph,
    KgefError,
    LinkPredictionMetrics,
    Model,
    TrainConfig,
    TrainResult,
    assign_generation,
    draw_sample,
    evaluate_link_prediction,
    exposure_ratios,
    filter_by_birth_year,
    isbn_to_13,
    match_goodreads,
    match_openlibrary,
    normalize_name,
    run_stage,
    similar_authors,
    top_count,
    train,
    uniform_random_mrr,
    works_ratio,
)

__all__ = [name for name in dir() if not name.startswith("_")]
