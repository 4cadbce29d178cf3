"""Datasets: CSV ingestion, PN-to-PU manipulation, folds, synthetic generation.

Two labeled views exist side by side.  A PN dataset carries ground-truth
labels in {+1, -1}; a PU dataset carries observed flags in {1, 0} where 1
means "known positive" and 0 means "unlabeled".  All arrays are frozen
after construction and safe to share between threads.
"""

from __future__ import annotations

import csv
import hashlib
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DataError
from .rng import generator

PN = "pn"
PU = "pu"

_LABEL_COLUMN = "label"
_OBSERVED_COLUMN = "observed"


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class FeatureMatrix:
    """An n-by-d matrix of finite real-valued features."""

    values: np.ndarray

    def __post_init__(self):
        values = np.ascontiguousarray(self.values, dtype=np.float64)
        if values.ndim != 2:
            raise DataError(f"feature matrix must be 2-D, got shape {values.shape}")
        if not np.isfinite(values).all():
            raise DataError("feature matrix contains non-finite values")
        object.__setattr__(self, "values", _freeze(values))

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def d(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class PNDataset:
    """Features plus ground-truth labels in {+1, -1}."""

    features: FeatureMatrix
    labels: np.ndarray

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=np.int8)
        if labels.ndim != 1 or labels.shape[0] != self.features.n:
            raise DataError("labels must be a length-n vector")
        if not np.isin(labels, (1, -1)).all():
            raise DataError("PN labels must be +1 or -1")
        object.__setattr__(self, "labels", _freeze(labels))

    @property
    def n(self) -> int:
        return self.features.n

    @property
    def positive_mask(self) -> np.ndarray:
        return self.labels == 1

    @property
    def n_positive(self) -> int:
        return int(np.count_nonzero(self.labels == 1))


@dataclass(frozen=True)
class PUDataset:
    """Features plus observed-positive flags in {1, 0}.

    At least one observed positive must be present; a PU set with no known
    positives carries no usable signal.
    """

    features: FeatureMatrix
    observed: np.ndarray

    def __post_init__(self):
        observed = np.asarray(self.observed, dtype=np.int8)
        if observed.ndim != 1 or observed.shape[0] != self.features.n:
            raise DataError("observed flags must be a length-n vector")
        if not np.isin(observed, (0, 1)).all():
            raise DataError("observed flags must be 1 or 0")
        if not (observed == 1).any():
            raise DataError("no observed positives in PU dataset")
        object.__setattr__(self, "observed", _freeze(observed))

    @property
    def n(self) -> int:
        return self.features.n

    @property
    def observed_mask(self) -> np.ndarray:
        return self.observed == 1

    @property
    def n_observed(self) -> int:
        return int(np.count_nonzero(self.observed == 1))


@dataclass(frozen=True)
class SyntheticSpec:
    """Two-Gaussian generator configuration.

    Classes share an isotropic covariance ``shared_std_dev**2 * I`` so the
    optimal scorer is linear, which gives the harness a closed-form
    reference scorer.
    """

    theta_p: float
    theta_o: float
    d: int
    mean_p: tuple[float, ...]
    mean_n: tuple[float, ...]
    shared_std_dev: float = 1.0
    seed: int = 42

    def __post_init__(self):
        if not 0.0 < self.theta_p < 1.0:
            raise ValueError(f"theta_p must be in (0,1), got {self.theta_p}")
        if not 0.0 < self.theta_o <= 1.0:
            raise ValueError(f"theta_o must be in (0,1], got {self.theta_o}")
        if self.shared_std_dev <= 0:
            raise ValueError("shared_std_dev must be positive")
        object.__setattr__(self, "mean_p", tuple(float(v) for v in self.mean_p))
        object.__setattr__(self, "mean_n", tuple(float(v) for v in self.mean_n))
        if len(self.mean_p) != self.d or len(self.mean_n) != self.d:
            raise ValueError("mean_p and mean_n must have length d")


@dataclass(frozen=True)
class FoldAssignment:
    """Stratified fold indices: per stratum, fold counts differ by at most 1."""

    fold_count: int
    assignment: np.ndarray

    def __post_init__(self):
        assignment = np.asarray(self.assignment, dtype=np.int64)
        if self.fold_count < 2:
            raise ValueError("fold_count must be >= 2")
        if assignment.min(initial=0) < 0 or assignment.max(initial=0) >= self.fold_count:
            raise DataError("fold index out of range")
        counts = np.bincount(assignment, minlength=self.fold_count)
        if (counts == 0).any():
            raise DataError("every fold must be non-empty")
        object.__setattr__(self, "assignment", _freeze(assignment))

    def test_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignment == fold)

    def train_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignment != fold)


def dataset_hash(dataset: PNDataset | PUDataset) -> str:
    """Short stable content hash used in model metadata and run echoes."""
    h = hashlib.sha256()
    h.update(dataset.features.values.tobytes())
    marks = dataset.labels if isinstance(dataset, PNDataset) else dataset.observed
    h.update(marks.tobytes())
    h.update(str(dataset.features.values.shape).encode())
    return h.hexdigest()[:16]


def _parse_label(token: str, line_no: int) -> int:
    if token in ("+1", "1"):
        return 1
    if token == "-1":
        return -1
    raise DataError(f"line {line_no}: label must be +1 or -1, got {token!r}")


def _parse_observed(token: str, line_no: int) -> int:
    if token == "1":
        return 1
    if token == "0":
        return 0
    raise DataError(f"line {line_no}: observed flag must be 1 or 0, got {token!r}")


def load_csv(path, schema: str, drop_bad_rows: bool = False) -> PNDataset | PUDataset:
    """Read a PN or PU dataset from a headed CSV file.

    The marker column is ``label`` (PN, values +1/-1) or ``observed``
    (PU, values 1/0); every other column is a feature and must parse as a
    finite real.  With ``drop_bad_rows`` set, rows with missing or
    non-finite entries are silently dropped instead of raising; this is
    the documented escape hatch for sources with missing values, which the
    loader never imputes.
    """
    if schema not in (PN, PU):
        raise ValueError(f"schema must be {PN!r} or {PU!r}")
    marker = _LABEL_COLUMN if schema == PN else _OBSERVED_COLUMN
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot open {path}: {exc}") from exc
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty file") from None
        header = [h.strip() for h in header]
        if marker not in header:
            raise DataError(f"{path}: missing required column {marker!r}")
        marker_col = header.index(marker)
        width = len(header)
        rows: list[list[float]] = []
        marks: list[int] = []
        for line_no, row in enumerate(reader, start=2):
            try:
                if len(row) != width:
                    raise DataError(
                        f"line {line_no}: expected {width} fields, got {len(row)}"
                    )
                mark_token = row[marker_col].strip()
                mark = (
                    _parse_label(mark_token, line_no)
                    if schema == PN
                    else _parse_observed(mark_token, line_no)
                )
                feats = []
                for col, token in enumerate(row):
                    if col == marker_col:
                        continue
                    try:
                        value = float(token)
                    except ValueError:
                        raise DataError(
                            f"line {line_no}: cannot parse {token!r} as a real number"
                        ) from None
                    if not math.isfinite(value):
                        raise DataError(f"line {line_no}: non-finite value {token!r}")
                    feats.append(value)
            except DataError:
                if drop_bad_rows:
                    continue
                raise
            rows.append(feats)
            marks.append(mark)
    if not rows:
        raise DataError(f"{path}: no data rows")
    features = FeatureMatrix(np.array(rows, dtype=np.float64))
    if schema == PN:
        return PNDataset(features, np.array(marks, dtype=np.int8))
    return PUDataset(features, np.array(marks, dtype=np.int8))


def save_csv(dataset: PNDataset | PUDataset, path) -> None:
    """Write a dataset back to CSV; floats keep full round-trip precision."""
    is_pn = isinstance(dataset, PNDataset)
    marker = _LABEL_COLUMN if is_pn else _OBSERVED_COLUMN
    marks = dataset.labels if is_pn else dataset.observed
    values = dataset.features.values
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow([f"x{j}" for j in range(values.shape[1])] + [marker])
        for i in range(values.shape[0]):
            mark = int(marks[i])
            token = f"+{mark}" if is_pn and mark == 1 else str(mark)
            writer.writerow([repr(float(v)) for v in values[i]] + [token])


def make_pu(
    pn: PNDataset, theta_o: float, seed: int, mode: str = "exact-fraction"
) -> PUDataset:
    """Turn a PN dataset into a PU view by revealing a fraction of positives.

    ``exact-fraction`` reveals exactly ``round(theta_o * n_positive)``
    positives (half-to-even rounding), chosen uniformly without
    replacement; ``bernoulli`` reveals each positive independently with
    probability ``theta_o``.  Negatives always stay unlabeled.
    """
    if not 0.0 < theta_o <= 1.0:
        raise ValueError(f"theta_o must be in (0,1], got {theta_o}")
    if mode not in ("exact-fraction", "bernoulli"):
        raise ValueError(f"unknown mode {mode!r}")
    pos_idx = np.flatnonzero(pn.labels == 1)
    if pos_idx.size == 0:
        raise DataError("PN dataset has no positive samples")
    observed = np.zeros(pn.n, dtype=np.int8)
    if mode == "exact-fraction":
        count = round(theta_o * pos_idx.size)
        if count == 0:
            raise DataError(
                f"theta_o={theta_o} with {pos_idx.size} positives reveals none"
            )
        gen = generator(seed, 0x9C)
        chosen = gen.choice(pos_idx, size=count, replace=False)
        observed[chosen] = 1
    else:
        gen = generator(seed, 0xB3)
        u = gen.random(pos_idx.size)
        observed[pos_idx[u < theta_o]] = 1
    return PUDataset(pn.features, observed)


def synth_generate(spec: SyntheticSpec, n: int) -> tuple[PNDataset, PUDataset]:
    """Draw paired PN and PU views of the same two-Gaussian sample.

    Both views share the same features and row order; the PU flags come
    from independent per-positive observation with probability
    ``spec.theta_o``.  No separability check is made: identical class
    means simply produce chance-level data.
    """
    if n < 10:
        raise ValueError(f"n must be >= 10, got {n}")
    label_gen = generator(spec.seed, 1)
    feat_gen = generator(spec.seed, 2)
    obs_gen = generator(spec.seed, 3)
    labels = np.where(label_gen.random(n) < spec.theta_p, 1, -1).astype(np.int8)
    noise = feat_gen.standard_normal((n, spec.d))
    means = np.where(
        (labels == 1)[:, None],
        np.asarray(spec.mean_p, dtype=np.float64),
        np.asarray(spec.mean_n, dtype=np.float64),
    )
    values = means + spec.shared_std_dev * noise
    features = FeatureMatrix(values)
    observed = np.zeros(n, dtype=np.int8)
    pos = labels == 1
    observed[pos] = (obs_gen.random(int(pos.sum())) < spec.theta_o).astype(np.int8)
    return PNDataset(features, labels), PUDataset(features, observed)


def split_folds(marks, fold_count: int, seed: int) -> FoldAssignment:
    """Stratified fold assignment over a label or flag vector.

    Every stratum (distinct value of ``marks``) is shuffled with its own
    derived stream and dealt round-robin, so per-stratum fold sizes differ
    by at most one.
    """
    marks = np.asarray(marks)
    n = marks.shape[0]
    if fold_count < 2:
        raise ValueError("fold_count must be >= 2")
    if n < fold_count:
        raise ValueError(f"cannot split {n} samples into {fold_count} folds")
    assignment = np.empty(n, dtype=np.int64)
    for stratum_no, value in enumerate(np.unique(marks)):
        idx = np.flatnonzero(marks == value)
        if idx.size < fold_count:
            raise DataError(
                f"stratum {value!r} has {idx.size} samples, fewer than "
                f"{fold_count} folds"
            )
        gen = generator(seed, 0xF0, stratum_no)
        shuffled = idx[gen.permutation(idx.size)]
        assignment[shuffled] = np.arange(idx.size) % fold_count
    return FoldAssignment(fold_count, assignment)
