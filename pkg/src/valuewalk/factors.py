"""Per-value outlier factors and cross-feature influence matrices.

The intra-feature factor scores a value by how far its frequency falls
below the feature mode's frequency, anchored at the mode's own rarity:

    raw(v) = (1 - freq(m)) + (freq(m) - freq(v)) / freq(m)

which lies in (0, 2) once constant features are dropped, and is halved
into (0, 1) for use as a node attribute.  Influence between values of
different features comes in two flavours: conditional probability
freq(u, v) / freq(v) (asymmetric) and lift (symmetric).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy import sparse

from .dataset import FrequencyStats

LiftScaling = Literal["support", "frequency"]


@dataclass
class IntraFactor:
    """Mode-anchored intra-feature outlierness per value."""

    delta_raw: np.ndarray
    delta_hat: np.ndarray

    @property
    def n_values(self) -> int:
        return len(self.delta_raw)


@dataclass
class InfluenceMatrix:
    """Sparse |V| x |V| cross-feature influence weights.

    ``kind`` is "conditional" (entry(u,v) = freq(u,v)/freq(v), values in
    [0, 1], zero pattern symmetric) or "lift" (symmetric, nonnegative).
    Within-feature entries, including the diagonal, are always zero.
    """

    kind: str
    matrix: sparse.csr_matrix
    node_feature: np.ndarray

    @property
    def n_values(self) -> int:
        return self.matrix.shape[0]

    def entry(self, u: int, v: int) -> float:
        return float(self.matrix[u, v])


def intra_outlierness(stats: FrequencyStats) -> IntraFactor:
    """Mode-based factor for every value; requires preprocessed input.

    Ties between modes are harmless: tied modes share a frequency and the
    factor depends on the mode only through that frequency.
    """
    freq = stats.freq
    mode_freq_per_value = freq[stats.mode][stats.feature_of_values()]
    if np.any(mode_freq_per_value >= 1.0):
        raise RuntimeError("feature with mode frequency 1 survived preprocessing")
    base = 1.0 - mode_freq_per_value
    dev = (mode_freq_per_value - freq) / mode_freq_per_value
    raw = base + dev
    return IntraFactor(delta_raw=raw, delta_hat=raw / 2.0)


def _pair_matrix(stats: FrequencyStats, up_weights: np.ndarray, down_weights: np.ndarray):
    """Assemble a CSR matrix from per-pair weights in both directions."""
    n = stats.n_values
    rows = np.concatenate([stats.pair_u, stats.pair_v])
    cols = np.concatenate([stats.pair_v, stats.pair_u])
    data = np.concatenate([up_weights, down_weights])
    return sparse.csr_matrix((data, (rows, cols)), shape=(n, n))


def conditional_influence(stats: FrequencyStats) -> InfluenceMatrix:
    """Conditional-probability influence: entry(u, v) = freq(u, v) / freq(v)."""
    cnt = stats.pair_count.astype(np.float64)
    up = cnt / stats.supp[stats.pair_v]      # (u, v): divide by freq(v), N cancels
    down = cnt / stats.supp[stats.pair_u]    # (v, u)
    return InfluenceMatrix("conditional", _pair_matrix(stats, up, down), stats.feature_of_values())


def lift_influence(stats: FrequencyStats, scaling: LiftScaling = "support") -> InfluenceMatrix:
    """Lift influence: symmetric co-occurrence strength of a value pair.

    "support" scaling stores supp(u,v) / (supp(u) * supp(v)); "frequency"
    stores the classical lift freq(u,v) / (freq(u) * freq(v)), which is N
    times larger.  The global factor cancels in every degree-normalized
    quantity downstream, so the two scalings produce identical rankings.
    """
    if scaling not in ("support", "frequency"):
        raise ValueError(f"unknown lift scaling {scaling!r}")
    cnt = stats.pair_count.astype(np.float64)
    w = cnt / (stats.supp[stats.pair_u] * stats.supp[stats.pair_v])
    if scaling == "frequency":
        w = w * stats.n_objects
    return InfluenceMatrix("lift", _pair_matrix(stats, w, w), stats.feature_of_values())
