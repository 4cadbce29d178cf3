"""Scorer evaluation on PN and PU views: ECDF, quantiles, lift curves, AUL, AUC.

A score series is any 1-D sequence of finite reals, index-aligned with its
dataset.  The same lift/AUL code serves both views: pass the true-positive
indices of a PN dataset to get the fully-labeled AUL, or the
observed-positive indices of a PU dataset to get its label-free estimate.
The positive set may be given as a boolean mask or as an index array.

All functions are pure and safe to call concurrently.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

CANONICAL = "canonical"
EXPECTED = "expected"


def _as_scores(scores) -> np.ndarray:
    arr = np.asarray(scores, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("scores must be a non-empty 1-D sequence")
    if not np.isfinite(arr).all():
        raise ValueError("scores must be finite")
    return arr


def _as_positive_mask(positives, n: int) -> np.ndarray:
    arr = np.asarray(positives)
    if arr.dtype == bool:
        if arr.shape != (n,):
            raise ValueError("positive mask length must match scores")
        mask = arr
    else:
        mask = np.zeros(n, dtype=bool)
        idx = arr.astype(np.int64, copy=False)
        if idx.size and (idx.min() < 0 or idx.max() >= n):
            raise ValueError("positive index out of range")
        mask[idx] = True
    if not mask.any():
        raise ValueError("positive set must be non-empty")
    return mask


@dataclass(frozen=True)
class LiftCurve:
    """Sensitivity at the top p-fraction cutoffs p = t/n for t = 1..n."""

    p: np.ndarray
    alpha: np.ndarray

    @property
    def points(self) -> Iterator[tuple[float, float]]:
        return zip(self.p.tolist(), self.alpha.tolist())

    def to_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["p", "alpha"])
            for p, alpha in self.points:
                writer.writerow([repr(p), repr(alpha)])


@dataclass(frozen=True)
class MetricReport:
    """Evaluation summary; ``auc`` and ``residual`` exist only with PN labels."""

    aul: float
    n: int
    n_pos: int
    auc: float | None = None
    theta_p_used: float | None = None
    residual: float | None = None

    def to_dict(self) -> dict:
        return {
            "aul": self.aul,
            "auc": self.auc,
            "residual": self.residual,
            "n": self.n,
            "n_pos": self.n_pos,
        }

    def to_json(self, **extra) -> str:
        return json.dumps({**self.to_dict(), **extra}, sort_keys=True)


def ecdf_at(scores, xi: float) -> float:
    """Fraction of scores at or below ``xi`` (right-continuous step function)."""
    arr = _as_scores(scores)
    return float(np.count_nonzero(arr <= xi)) / arr.size


def quantile_threshold(scores, p: float) -> float:
    """Smallest achieved score whose ECDF reaches 1 - p.

    This is the cutoff above which roughly a ``p`` fraction of samples
    would be classified positive.  At ``p = 1`` the mathematical answer is
    unbounded below, so the minimum achieved score is returned instead
    (everything classified positive either way).
    """
    arr = _as_scores(scores)
    if not 0.0 < p <= 1.0:
        raise ValueError(f"p must be in (0,1], got {p}")
    ordered = np.sort(arr)
    if p == 1.0:
        return float(ordered[0])
    rank = math.ceil((1.0 - p) * arr.size)
    return float(ordered[rank - 1])


def sensitivity(scores, positives, s: float) -> float:
    """Fraction of positive-indexed scores at or above threshold ``s``."""
    arr = _as_scores(scores)
    mask = _as_positive_mask(positives, arr.size)
    pos_scores = arr[mask]
    return float(np.count_nonzero(pos_scores >= s)) / pos_scores.size


def _canonical_order(arr: np.ndarray) -> np.ndarray:
    # descending score, ties by ascending original index
    return np.lexsort((np.arange(arr.size), -arr))


def _cumulative_positives(arr: np.ndarray, mask: np.ndarray, tie_mode: str) -> np.ndarray:
    order = _canonical_order(arr)
    pos_sorted = mask[order].astype(np.float64)
    if tie_mode == CANONICAL:
        return np.cumsum(pos_sorted)
    if tie_mode != EXPECTED:
        raise ValueError(f"unknown tie_mode {tie_mode!r}")
    # spread each tied group's positive count evenly over its slots
    s_sorted = arr[order]
    n = arr.size
    starts = np.flatnonzero(np.concatenate(([True], s_sorted[1:] != s_sorted[:-1])))
    ends = np.concatenate((starts[1:], [n]))
    cum = np.empty(n, dtype=np.float64)
    base = 0.0
    for a, b in zip(starts, ends):
        q = float(pos_sorted[a:b].sum())
        g = b - a
        cum[a:b] = base + q * (np.arange(1, g + 1) / g)
        base += q
    return cum


def lift_curve(scores, positives, tie_mode: str = CANONICAL) -> LiftCurve:
    """Lift curve of a scorer against a positive set.

    Point t is (t/n, positives captured among the top-t scores divided by
    the total positive count).  The top-t set uses descending score with
    ties broken by ascending index; ``tie_mode='expected'`` instead
    credits each tied group with its expected positive count, which is the
    average over all within-tie orderings.
    """
    arr = _as_scores(scores)
    mask = _as_positive_mask(positives, arr.size)
    n = arr.size
    cum = _cumulative_positives(arr, mask, tie_mode)
    alpha = cum / mask.sum()
    p = np.arange(1, n + 1, dtype=np.float64) / n
    return LiftCurve(p=p, alpha=alpha)


def aul(scores, positives, tie_mode: str = CANONICAL) -> float:
    """Area under the lift curve: the mean of the curve's ordinates.

    Equals the integral of the empirical lift step function over (0, 1].
    With the true positives of a PN view this is the fully-labeled AUL;
    with the observed positives of a PU view it estimates that same value
    without any knowledge of the unlabeled samples.
    """
    arr = _as_scores(scores)
    mask = _as_positive_mask(positives, arr.size)
    cum = _cumulative_positives(arr, mask, tie_mode)
    return float(cum.mean() / mask.sum())


def _average_ranks(arr: np.ndarray) -> np.ndarray:
    order = np.argsort(arr, kind="stable")
    ordered = arr[order]
    n = arr.size
    starts = np.flatnonzero(np.concatenate(([True], ordered[1:] != ordered[:-1])))
    ends = np.concatenate((starts[1:], [n]))
    ranks = np.empty(n, dtype=np.float64)
    for a, b in zip(starts, ends):
        ranks[order[a:b]] = 0.5 * (a + 1 + b)
    return ranks


def auc(scores, labels) -> float:
    """Probability a random positive outscores a random negative; ties count half.

    Computed from tie-averaged ranks, which is exactly the pairwise
    definition at a fraction of the cost.
    """
    arr = _as_scores(scores)
    lab = np.asarray(labels)
    if lab.shape != arr.shape:
        raise ValueError("labels length must match scores")
    pos = lab == 1
    n_pos = int(pos.sum())
    n_neg = arr.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("AUC needs at least one positive and one negative")
    ranks = _average_ranks(arr)
    u = ranks[pos].sum() - n_pos * (n_pos + 1) / 2.0
    return float(u / (n_pos * n_neg))


def relation_residual(auc_value: float, aul_pn: float, theta_p: float) -> float:
    """Deviation from the linear tie between AUC and fully-labeled AUL.

    For large samples with continuous scores the gap AUC - AUL equals
    ``theta_p * (AUC - 0.5)``; the residual is the left side minus the
    right side and should be near zero, so either metric ranks models
    identically without knowing the class prior.
    """
    return (auc_value - aul_pn) - theta_p * (auc_value - 0.5)
