"""Label-based evaluation: ranking AUC, data-complexity indicators, and a
seeded generator of benchmark data with planted couplings.

The four indicators quantify, in order: how much rare-value co-occurrence
lives in the normal class rather than the outlier class (vcc), how
unequal the per-feature mode frequencies are (het), how poorly the single
best feature separates outliers (ins), and what fraction of features
actively rank outliers below normal objects (fnl).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.stats import rankdata

from .dataset import CategoricalDataset, FrequencyStats, compute_stats, from_columns

DEFAULT_THETA = 0.05
DEFAULT_EPSILON = 0.001


@dataclass
class FeatureEfficiency:
    """Per-feature single-feature ranking AUC and the derived indicators."""

    per_feature: np.ndarray
    kappa_sep: float
    kappa_ins: float
    kappa_fnl: float


@dataclass
class ComplexityReport:
    kappa_vcc: float
    kappa_het: float
    kappa_ins: float
    kappa_fnl: float
    per_feature_efficiency: np.ndarray
    params: dict = field(default_factory=lambda: {"theta": DEFAULT_THETA, "epsilon": DEFAULT_EPSILON})


def _check_labels(labels) -> np.ndarray:
    if labels is None:
        raise ValueError("labels are required")
    lab = np.asarray(labels).astype(bool)
    if not lab.any():
        raise ValueError("no outliers in labels")
    if lab.all():
        raise ValueError("no normal objects in labels")
    return lab


def auc(scores, labels) -> float:
    """Ranking AUC via the rank-sum statistic, ties sharing average ranks."""
    lab = _check_labels(labels)
    scores = np.asarray(scores, dtype=np.float64)
    if scores.shape != lab.shape:
        raise ValueError("scores and labels differ in length")
    n_pos = int(lab.sum())
    n_neg = len(lab) - n_pos
    ranks = rankdata(scores)
    return float((ranks[lab].sum() - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg))


def kappa_het(stats: FrequencyStats) -> float:
    """Mean pairwise ratio of mode frequencies, larger over smaller.

    With the modes sorted by frequency descending, averages
    freq(m_i) / freq(m_j) over all i < j; equal modes give exactly 1.
    """
    d = stats.n_features
    if d < 2:
        raise ValueError("heterogeneity needs at least 2 features")
    mode_freq = np.sort(stats.freq[stats.mode])[::-1]
    ratios = mode_freq[:, None] / mode_freq[None, :]
    total = ratios[np.triu_indices(d, k=1)].sum()
    return float(2.0 * total / (d * (d - 1)))


def _rare_pair_rate(
    dataset: CategoricalDataset,
    stats: FrequencyStats,
    theta: float,
) -> tuple[float, float]:
    lab = _check_labels(dataset.labels)
    rare = stats.freq <= theta
    per_object = rare[dataset.cells].sum(axis=1)
    flagged = per_object >= 2
    nvv = float(flagged[~lab].mean())
    pvv = float(flagged[lab].mean())
    return nvv, pvv


def kappa_vcc(
    dataset: CategoricalDataset,
    stats: FrequencyStats | None = None,
    theta: float = DEFAULT_THETA,
    epsilon: float = DEFAULT_EPSILON,
) -> float:
    """nvv / (pvv + nvv + epsilon), the noisy share of rare-value coupling.

    An object is counted once if it contains at least two values of
    frequency <= theta, regardless of how many more it holds; frequencies
    are global (computed over all objects).
    """
    if stats is None:
        stats = compute_stats(dataset)
    nvv, pvv = _rare_pair_rate(dataset, stats, theta)
    return nvv / (pvv + nvv + epsilon)


def feature_efficiency(
    dataset: CategoricalDataset,
    stats: FrequencyStats | None = None,
) -> FeatureEfficiency:
    """AUC of ranking objects by each single feature's inverse value frequency.

    Any strictly decreasing transform of the frequency gives the same AUC;
    1/freq is used.  kappa_sep is the best feature's AUC, kappa_ins its
    complement, kappa_fnl the fraction of features scoring below 0.5.
    """
    lab = _check_labels(dataset.labels)
    if stats is None:
        stats = compute_stats(dataset)
    inv_freq = stats.n_objects / stats.supp.astype(np.float64)
    per_feature = np.array(
        [auc(inv_freq[dataset.cells[:, j]], lab) for j in range(dataset.n_features)]
    )
    kappa_sep = float(per_feature.max())
    return FeatureEfficiency(
        per_feature=per_feature,
        kappa_sep=kappa_sep,
        kappa_ins=1.0 - kappa_sep,
        kappa_fnl=float((per_feature < 0.5).mean()),
    )


def complexity_report(
    dataset: CategoricalDataset,
    stats: FrequencyStats | None = None,
    theta: float = DEFAULT_THETA,
    epsilon: float = DEFAULT_EPSILON,
) -> ComplexityReport:
    """All four indicators plus the per-feature efficiencies."""
    if stats is None:
        stats = compute_stats(dataset)
    eff = feature_efficiency(dataset, stats)
    return ComplexityReport(
        kappa_vcc=kappa_vcc(dataset, stats, theta, epsilon),
        kappa_het=kappa_het(stats),
        kappa_ins=eff.kappa_ins,
        kappa_fnl=eff.kappa_fnl,
        per_feature_efficiency=eff.per_feature,
        params={"theta": theta, "epsilon": epsilon},
    )


def generate_synthetic(
    n_objects: int,
    n_relevant: int,
    n_noisy: int,
    n_outliers: int,
    coupling_strength: float = 1.0,
    seed: int = 0,
) -> CategoricalDataset:
    """Benchmark data with planted co-occurring rare values, labels included.

    Relevant features hold a reserved "planted" value that each outlier
    takes with probability ``coupling_strength``, so planted values
    co-occur across the relevant features.  Noisy features scatter
    equally-rare "scatter" values independently over normal objects while
    outliers draw only the common values there, making those features
    actively misleading.  Fully reproducible from the seed.
    """
    if n_objects <= 0 or n_relevant <= 0 or n_noisy < 0:
        raise ValueError("n_objects and n_relevant must be positive, n_noisy nonnegative")
    if n_outliers <= 0:
        raise ValueError("need at least one outlier")
    if n_outliers >= n_objects:
        raise ValueError("n_outliers must be smaller than n_objects")
    if not 0.0 <= coupling_strength <= 1.0:
        raise ValueError("coupling_strength must lie in [0, 1]")

    rng = np.random.default_rng(seed)
    labels = np.zeros(n_objects, dtype=np.uint8)
    labels[rng.choice(n_objects, size=n_outliers, replace=False)] = 1
    is_out = labels.astype(bool)
    n_normal = n_objects - n_outliers

    base_values = np.array(["v0", "v1", "v2"])
    base_probs = np.array([0.5, 0.3, 0.2])

    # A pinch of planted values on normal objects keeps the outlying
    # values co-occurring with the common background; without it they
    # would form a sealed clique that random walks cannot reach.
    n_impure = min(n_normal, max(1, round(0.25 * n_outliers * max(coupling_strength, 0.05))))

    names = []
    columns = []
    for j in range(n_relevant):
        col = base_values[rng.choice(len(base_values), size=n_objects, p=base_probs)].astype(object)
        planted = rng.random(n_outliers) < coupling_strength
        col[np.flatnonzero(is_out)[planted]] = "planted"
        impure = rng.choice(np.flatnonzero(~is_out), size=n_impure, replace=False)
        col[impure] = "planted"
        names.append(f"rel{j}")
        columns.append(col)

    # Scatter mass tuned so each scatter value is about as rare as a
    # planted value, the "equally infrequent but uncoupled" regime.  Two
    # scatter values keep noise domains the same size as relevant ones,
    # so feature relevance is not distorted by domain cardinality.
    n_scatter = 2
    rho = min(0.4, n_scatter * n_outliers * max(coupling_strength, 0.05) / max(n_normal, 1))
    normal_probs = np.concatenate([np.array([0.6, 0.4]) * (1 - rho), np.full(n_scatter, rho / n_scatter)])
    noise_values = np.array(["v0", "v1"] + [f"scatter{k}" for k in range(n_scatter)])
    for j in range(n_noisy):
        col = np.empty(n_objects, dtype=object)
        col[~is_out] = noise_values[rng.choice(len(noise_values), size=n_normal, p=normal_probs)]
        col[is_out] = noise_values[rng.choice(2, size=n_outliers, p=[0.75, 0.25])]
        names.append(f"noise{j}")
        columns.append(col)

    return from_columns(names, columns, labels)
