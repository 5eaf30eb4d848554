"""End-to-end orchestration: one config object, deterministic outputs.

``detect`` runs preprocessing, statistics, the chosen engine and object
scoring; ``select`` runs the same front end and thresholds the feature
relevance.  All randomness in the library lives in the synthetic data
generator; detection itself is deterministic for fixed inputs, including
across thread counts.
"""

from __future__ import annotations

from dataclasses import dataclass

from .dataset import CategoricalDataset, FrequencyStats, compute_stats, preprocess, take_features
from .scoring import (
    FeatureRelevance,
    ObjectScores,
    compute_value_outlierness,
    feature_relevance,
    marp_scores,
    object_scores,
    select_features,
)
from .walks import DEFAULT_ALPHA, DEFAULT_MAX_ITER, DEFAULT_TOL, OutliernessVector

METHODS = ("cbrw", "sdrw", "marp", "base", "cbrw-ia", "cbrw-ie", "sdrw-ia", "sdrw-ie")


@dataclass
class DetectorConfig:
    method: str = "cbrw"
    alpha: float = DEFAULT_ALPHA
    tol: float = DEFAULT_TOL
    max_iter: int = DEFAULT_MAX_ITER
    lift_scaling: str = "support"
    top_ratio: float | None = 0.5
    min_rel: float | None = None
    threads: int = 1

    def validate(self) -> None:
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}; expected one of {METHODS}")
        if not 0.0 <= self.alpha < 1.0:
            raise ValueError(f"alpha must lie in [0, 1), got {self.alpha}")
        if self.tol <= 0 or self.max_iter <= 0:
            raise ValueError("tol and max_iter must be positive")
        if self.lift_scaling not in ("support", "frequency"):
            raise ValueError(f"unknown lift scaling {self.lift_scaling!r}")
        if self.min_rel is None and (self.top_ratio is None or not 0.0 < self.top_ratio <= 1.0):
            raise ValueError(f"top_ratio must lie in (0, 1], got {self.top_ratio}")
        if self.threads < 1:
            raise ValueError("threads must be at least 1")


@dataclass
class DetectionResult:
    scores: ObjectScores
    dataset: CategoricalDataset
    stats: FrequencyStats
    phi: OutliernessVector | None = None
    relevance: FeatureRelevance | None = None


@dataclass
class SelectionResult:
    feature_ids: "list[int]"
    feature_names: "list[str]"
    relevance: FeatureRelevance
    dataset: CategoricalDataset
    reduced: CategoricalDataset | None = None


def _front_end(dataset: CategoricalDataset, config: DetectorConfig):
    ds = preprocess(dataset)
    stats = compute_stats(ds, threads=config.threads)
    return ds, stats


def detect(dataset: CategoricalDataset, config: DetectorConfig | None = None) -> DetectionResult:
    """Full pipeline for the configured method.

    Returns the object scores plus, for outlierness-based methods, the
    value outlierness vector and feature relevance as side artifacts.
    The returned dataset is the preprocessed one the scores refer to.
    """
    config = config or DetectorConfig()
    config.validate()
    ds, stats = _front_end(dataset, config)
    if config.method == "marp":
        return DetectionResult(scores=marp_scores(ds, stats), dataset=ds, stats=stats)
    phi = compute_value_outlierness(
        stats,
        config.method,
        alpha=config.alpha,
        tol=config.tol,
        max_iter=config.max_iter,
        lift_scaling=config.lift_scaling,
    )
    rel = feature_relevance(phi, ds)
    scores = object_scores(phi, rel, ds)
    return DetectionResult(scores=scores, dataset=ds, stats=stats, phi=phi, relevance=rel)


def select(
    dataset: CategoricalDataset,
    config: DetectorConfig | None = None,
    emit_reduced: bool = False,
) -> SelectionResult:
    """Rank features by relevance and keep those meeting the threshold."""
    config = config or DetectorConfig()
    config.validate()
    if config.method not in ("cbrw", "sdrw"):
        raise ValueError("feature selection needs method 'cbrw' or 'sdrw'")
    ds, stats = _front_end(dataset, config)
    phi = compute_value_outlierness(
        stats,
        config.method,
        alpha=config.alpha,
        tol=config.tol,
        max_iter=config.max_iter,
        lift_scaling=config.lift_scaling,
    )
    rel = feature_relevance(phi, ds)
    kept = select_features(rel, top_ratio=config.top_ratio, min_rel=config.min_rel)
    reduced = take_features(ds, kept) if emit_reduced else None
    return SelectionResult(
        feature_ids=[int(j) for j in kept],
        feature_names=[ds.feature_names[int(j)] for j in kept],
        relevance=rel,
        dataset=ds,
        reduced=reduced,
    )
