"""From value outlierness to feature relevance and object outlier scores.

Also hosts the engine variants used for component analysis (walk with
binarized influence, walk without the intra-feature bias, and the
no-graph baseline) and the marginal-probability baseline scorer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dataset import CategoricalDataset, FrequencyStats, compute_stats
from .factors import (
    InfluenceMatrix,
    IntraFactor,
    conditional_influence,
    intra_outlierness,
    lift_influence,
)
from .graph import build_cbrw_graph, build_sdrw_graph
from .peeling import gamma_factor, peel_subgraphs, subgraph_outlierness
from .walks import (
    DEFAULT_ALPHA,
    DEFAULT_MAX_ITER,
    DEFAULT_TOL,
    OutliernessVector,
    stationary_distribution,
    transition_matrix,
)

_SCORE_CHUNK = 65_536

PHI_METHODS = ("cbrw", "sdrw", "base", "cbrw-ia", "cbrw-ie", "sdrw-ia", "sdrw-ie")


@dataclass
class FeatureRelevance:
    """Per-feature relevance and its normalized weighting."""

    rel: np.ndarray
    tau: np.ndarray

    @property
    def n_features(self) -> int:
        return len(self.rel)


@dataclass
class ObjectScores:
    """Per-object outlier scores and the descending ranking.

    ``ranking[k]`` is the index of the k-th most outlying object; equal
    scores keep their original order.
    """

    score: np.ndarray
    ranking: np.ndarray

    @property
    def n_objects(self) -> int:
        return len(self.score)

    def rank_of(self) -> np.ndarray:
        """1-based rank per object (1 = most outlying)."""
        out = np.empty(len(self.ranking), dtype=np.int64)
        out[self.ranking] = np.arange(1, len(self.ranking) + 1)
        return out


def _as_phi_array(phi, n_values: int) -> np.ndarray:
    arr = phi.phi if isinstance(phi, OutliernessVector) else np.asarray(phi, dtype=np.float64)
    if arr.shape != (n_values,):
        raise ValueError(
            f"outlierness vector covers {arr.shape[0] if arr.ndim else 0} values, "
            f"dataset has {n_values}"
        )
    if np.any(arr <= 0.0) or np.any(arr >= 1.0):
        raise ValueError("value outlierness must lie strictly in (0, 1)")
    return arr


def feature_relevance(phi, dataset: CategoricalDataset) -> FeatureRelevance:
    """rel(F) = 1 - prod_{v in dom(F)} (1 - phi(v)); tau = rel / sum(rel).

    The product form reads rel as the chance that at least one of the
    feature's values is outlying; it is known to favour features with
    many values, which is accepted for its interpretability.
    """
    arr = _as_phi_array(phi, dataset.n_values)
    log1m = np.log1p(-arr)
    off = dataset.feature_offsets
    rel = np.array(
        [-math.expm1(log1m[off[j] : off[j + 1]].sum()) for j in range(dataset.n_features)]
    )
    return FeatureRelevance(rel=rel, tau=rel / rel.sum())


def object_scores(phi, relevance: FeatureRelevance, dataset: CategoricalDataset) -> ObjectScores:
    """score(x) = 1 - prod_j (1 - phi(x_ij)) ** rel(F_j), ranked descending.

    The exponents are the raw relevance weights; rescaling them all by a
    positive constant (normalizing them to sum 1, say) only applies a
    monotone transform to the scores, so the ranking is unaffected by
    that choice.
    """
    arr = _as_phi_array(phi, dataset.n_values)
    if relevance.n_features != dataset.n_features:
        raise ValueError("relevance weights do not match the dataset's features")
    log1m = np.log1p(-arr)
    w = relevance.rel
    n = dataset.n_objects
    scores = np.empty(n, dtype=np.float64)
    for lo in range(0, n, _SCORE_CHUNK):
        hi = min(lo + _SCORE_CHUNK, n)
        scores[lo:hi] = -np.expm1(log1m[dataset.cells[lo:hi]] @ w)
    ranking = np.argsort(-scores, kind="stable")
    return ObjectScores(score=scores, ranking=ranking)


def select_features(
    relevance: FeatureRelevance,
    top_ratio: float | None = 0.5,
    min_rel: float | None = None,
) -> np.ndarray:
    """Keep the top ceil(ratio * D) features by relevance, or all above min_rel.

    Ties at the cut break toward the lower feature id.  Returns kept
    feature ids in ascending order.
    """
    d = relevance.n_features
    if d == 0:
        raise ValueError("no features to select from")
    if min_rel is not None:
        kept = np.flatnonzero(relevance.rel >= min_rel)
        if len(kept) == 0:
            raise ValueError("no features selected: min_rel above every relevance")
        return kept
    if top_ratio is None or not 0.0 < top_ratio <= 1.0:
        raise ValueError(f"top_ratio must lie in (0, 1], got {top_ratio}")
    k = math.ceil(top_ratio * d)
    order = np.lexsort((np.arange(d), -relevance.rel))
    return np.sort(order[:k])


def marp_scores(dataset: CategoricalDataset, stats: FrequencyStats | None = None) -> ObjectScores:
    """Marginal-probability baseline: score(x) = sum_j -log freq(x_ij).

    Order-equivalent to the product of inverse marginal probabilities and
    numerically safe for wide data.
    """
    if stats is None:
        stats = compute_stats(dataset)
    neg_log_freq = np.log(stats.n_objects) - np.log(stats.supp.astype(np.float64))
    n = dataset.n_objects
    scores = np.empty(n, dtype=np.float64)
    for lo in range(0, n, _SCORE_CHUNK):
        hi = min(lo + _SCORE_CHUNK, n)
        scores[lo:hi] = neg_log_freq[dataset.cells[lo:hi]].sum(axis=1)
    ranking = np.argsort(-scores, kind="stable")
    return ObjectScores(score=scores, ranking=ranking)


def _binarized(infl: InfluenceMatrix) -> InfluenceMatrix:
    m = infl.matrix.copy()
    m.data = np.ones_like(m.data)
    return InfluenceMatrix(infl.kind, m, infl.node_feature)


def _neutral_delta(n: int) -> IntraFactor:
    ones = np.ones(n, dtype=np.float64)
    return IntraFactor(delta_raw=ones, delta_hat=ones)


def _split_method(method: str, engine: str):
    head, _, variant = method.partition("-")
    if head != engine or variant not in ("", "ia", "ie"):
        raise ValueError(f"method {method!r} is not a {engine}-family method")
    return variant


def walk_transition(stats: FrequencyStats, method: str = "cbrw") -> "tuple":
    """Bias factor and transition matrix for a walk-family method.

    Applies the method's variant substitutions ("-ia" binarizes the
    influence entries, "-ie" neutralizes the bias factor) before building
    the matrix, so traces and diagnostics see exactly what the detector
    ran.  Returns (delta, transition_matrix).
    """
    variant = _split_method(method, "cbrw")
    delta = _neutral_delta(stats.n_values) if variant == "ie" else intra_outlierness(stats)
    infl = conditional_influence(stats)
    if variant == "ia":
        infl = _binarized(infl)
    return delta, transition_matrix(build_cbrw_graph(delta, infl), delta)


def density_graph(stats: FrequencyStats, method: str = "sdrw", lift_scaling: str = "support"):
    """Undirected weighted graph a density-family method peels."""
    variant = _split_method(method, "sdrw")
    delta = _neutral_delta(stats.n_values) if variant == "ie" else intra_outlierness(stats)
    infl = lift_influence(stats, scaling=lift_scaling)
    if variant == "ia":
        infl = _binarized(infl)
    return build_sdrw_graph(delta, infl)


def compute_value_outlierness(
    stats: FrequencyStats,
    method: str = "cbrw",
    alpha: float = DEFAULT_ALPHA,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    lift_scaling: str = "support",
) -> OutliernessVector:
    """Value outlierness for any engine/variant combination.

    Methods: "cbrw" (biased damped walk), "sdrw" (subgraph-density closed
    form), "base" (normalized intra-feature factor, no graph), and the
    "-ia" variants (influence binarized to co-occurrence indicators) and
    "-ie" variants (intra-feature factor neutralized to 1) of either
    engine.
    """
    if method not in PHI_METHODS:
        raise ValueError(f"unknown method {method!r}; expected one of {PHI_METHODS}")

    if method == "base":
        delta = intra_outlierness(stats)
        return OutliernessVector(phi=delta.delta_hat / delta.delta_hat.sum())

    if method.startswith("cbrw"):
        _, w = walk_transition(stats, method)
        return stationary_distribution(w, alpha=alpha, tol=tol, max_iter=max_iter)

    g = density_graph(stats, method, lift_scaling)
    return subgraph_outlierness(gamma_factor(peel_subgraphs(g)))


def variant_scores(
    dataset: CategoricalDataset,
    engine: str = "cbrw",
    variant: str = "full",
    alpha: float = DEFAULT_ALPHA,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    lift_scaling: str = "support",
    stats: FrequencyStats | None = None,
) -> ObjectScores:
    """Object scores for an engine ("cbrw"/"sdrw") and variant.

    Variants: "full" (standard pipeline), "base", "ia", "ie".  The input
    dataset must already be preprocessed (or free of constant features).
    """
    if engine not in ("cbrw", "sdrw"):
        raise ValueError(f"unknown engine {engine!r}")
    if variant not in ("full", "base", "ia", "ie"):
        raise ValueError(f"unknown variant {variant!r}")
    method = "base" if variant == "base" else (engine if variant == "full" else f"{engine}-{variant}")
    if stats is None:
        stats = compute_stats(dataset)
    phi = compute_value_outlierness(
        stats, method, alpha=alpha, tol=tol, max_iter=max_iter, lift_scaling=lift_scaling
    )
    rel = feature_relevance(phi, dataset)
    return object_scores(phi, rel, dataset)
