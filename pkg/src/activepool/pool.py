"""Labeled/unlabeled/test pools behind one training matrix and a boolean mask.

Ground-truth labels for unlabeled rows live in Y_train but are firewalled:
query strategies only ever see features, probabilities, and embeddings.
Only `Pool.update` (oracle labeling) and the simulated oracle read them.
"""

import csv

from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigError, DataError, ShapeError


@dataclass
class Pool:
    X_train: np.ndarray
    Y_train: np.ndarray
    labeled_mask: np.ndarray
    X_test: np.ndarray
    Y_test: np.ndarray
    num_classes: int

    def __post_init__(self):
        n = self.X_train.shape[0]
        if self.Y_train.shape != (n,) or self.labeled_mask.shape != (n,):
            raise ShapeError("Y_train and labeled_mask must align with X_train rows")
        if self.X_test.shape[0] != self.Y_test.shape[0]:
            raise ShapeError("X_test and Y_test must align")
        for Y in (self.Y_train, self.Y_test):
            if Y.size and (Y.min() < 0 or Y.max() >= self.num_classes):
                raise DataError(f"labels must lie in [0, {self.num_classes})")

    @property
    def n_labeled(self):
        return int(self.labeled_mask.sum())

    @property
    def n_unlabeled(self):
        return int((~self.labeled_mask).sum())

    def labeled_view(self):
        """(X, Y, global indices) of labeled rows, ascending index order."""
        idxs = np.flatnonzero(self.labeled_mask)
        return self.X_train[idxs], self.Y_train[idxs], idxs

    def unlabeled_view(self):
        """(X, global indices) of unlabeled rows, ascending index order."""
        idxs = np.flatnonzero(~self.labeled_mask)
        return self.X_train[idxs], idxs

    def update(self, query_idxs):
        """New Pool with the given unlabeled indices flipped to labeled."""
        query_idxs = np.asarray(query_idxs, dtype=int)
        if len(set(query_idxs.tolist())) != query_idxs.size:
            raise ConfigError("query indices must be distinct")
        for i in query_idxs:
            if i < 0 or i >= self.labeled_mask.size:
                raise ConfigError(f"index {i} outside the training pool")
            if self.labeled_mask[i]:
                raise ConfigError(f"index {i} is already labeled")
        mask = self.labeled_mask.copy()
        mask[query_idxs] = True
        return replace(self, labeled_mask=mask)

    def oracle_labels(self, query_idxs):
        """Simulated oracle: ground-truth labels for the given indices."""
        return self.Y_train[np.asarray(query_idxs, dtype=int)].copy()

    def with_labels(self, query_idxs, labels):
        """New Pool recording externally supplied labels for the given rows."""
        query_idxs = np.asarray(query_idxs, dtype=int)
        labels = np.asarray(labels, dtype=int)
        if labels.min() < 0 or labels.max() >= self.num_classes:
            raise DataError(f"labels must lie in [0, {self.num_classes})")
        Y = self.Y_train.copy()
        Y[query_idxs] = labels
        return replace(self, Y_train=Y)


class Preprocessor:
    """Per-feature scaling fitted on training rows only.

    Schemes: "none", "minmax" (to [0, 1]), "standardize" (zero mean, unit sd).
    Constant features are left untouched under minmax/standardize.
    """

    SCHEMES = ("none", "minmax", "standardize")

    def __init__(self, scheme="none"):
        if scheme not in self.SCHEMES:
            raise ConfigError(f"unknown preprocessing scheme {scheme!r}")
        self.scheme = scheme
        self._shift = None
        self._scale = None

    def fit(self, X):
        X = np.asarray(X, dtype=float)
        if self.scheme == "minmax":
            lo, hi = X.min(axis=0), X.max(axis=0)
            span = hi - lo
            span[span == 0] = 1.0
            self._shift, self._scale = lo, span
        elif self.scheme == "standardize":
            mu, sd = X.mean(axis=0), X.std(axis=0)
            sd = sd.copy()
            sd[sd == 0] = 1.0
            self._shift, self._scale = mu, sd
        return self

    def transform(self, X):
        X = np.asarray(X, dtype=float)
        if self.scheme == "none":
            return X.copy()
        if self._shift is None:
            raise ConfigError("preprocessor not fitted")
        return (X - self._shift) / self._scale


def load_csv(path, label_column, num_classes, has_header=False):
    """Read a numeric CSV into (features, labels).

    label_column is a 0-based index, or a column name when has_header is set.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r]
    if not rows:
        raise DataError(f"{path}: empty dataset")
    header = None
    if has_header:
        header, rows = rows[0], rows[1:]
        if not rows:
            raise DataError(f"{path}: no data rows after header")
    if isinstance(label_column, str):
        if header is None or label_column not in header:
            raise DataError(f"label column {label_column!r} not found in header")
        label_idx = header.index(label_column)
    else:
        label_idx = int(label_column)

    features, labels = [], []
    for r, row in enumerate(rows):
        if label_idx >= len(row):
            raise DataError(f"row {r}: no column {label_idx}")
        try:
            label = int(float(row[label_idx]))
        except ValueError:
            raise DataError(f"row {r}, column {label_idx}: non-numeric label {row[label_idx]!r}")
        if not (0 <= label < num_classes):
            raise DataError(f"row {r}: label {label} outside [0, {num_classes})")
        feat = []
        for c, cell in enumerate(row):
            if c == label_idx:
                continue
            try:
                feat.append(float(cell))
            except ValueError:
                raise DataError(f"row {r}, column {c}: non-numeric value {cell!r}")
        features.append(feat)
        labels.append(label)
    lengths = {len(f) for f in features}
    if len(lengths) != 1:
        raise DataError("rows have inconsistent feature counts")
    return np.asarray(features, dtype=float), np.asarray(labels, dtype=int)


def make_two_gaussians(n_per_class, separation, noise_sd, seed):
    """Two 2-D Gaussian blobs centered at (-+separation/2, 0)."""
    if n_per_class < 1:
        raise ConfigError("n_per_class must be >= 1")
    rng = np.random.default_rng(seed)
    centers = np.array([[-separation / 2.0, 0.0], [separation / 2.0, 0.0]])
    X = np.vstack(
        [c + noise_sd * rng.standard_normal((n_per_class, 2)) for c in centers]
    )
    Y = np.repeat([0, 1], n_per_class)
    order = rng.permutation(2 * n_per_class)
    return X[order], Y[order]


def initialize_pool(features, labels, test_fraction, n_init, seed, max_retries=100):
    """Shuffle, split off a test set, and label n_init rows uniformly at random.

    When the data holds >= 2 classes, the initial labeled set is resampled
    (bounded retries) until it covers at least 2 of them.
    """
    features = np.asarray(features, dtype=float)
    labels = np.asarray(labels, dtype=int)
    if not (0.0 < test_fraction < 1.0):
        raise ConfigError("test_fraction must lie in (0, 1)")
    n = features.shape[0]
    n_test = int(round(n * test_fraction))
    n_train = n - n_test
    if n_test < 1 or n_train < 1:
        raise ConfigError("test_fraction leaves an empty split")
    if not (1 <= n_init <= n_train):
        raise ConfigError(f"n_init must lie in [1, {n_train}]")

    rng = np.random.default_rng(seed)
    order = rng.permutation(n)
    train_idx, test_idx = order[:n_train], order[n_train:]
    X_train, Y_train = features[train_idx], labels[train_idx]
    X_test, Y_test = features[test_idx], labels[test_idx]

    multiclass = len(np.unique(Y_train)) >= 2
    for _ in range(max_retries):
        chosen = rng.choice(n_train, size=n_init, replace=False)
        if not multiclass or len(np.unique(Y_train[chosen])) >= 2:
            break
    else:
        raise ConfigError("could not draw a class-diverse initial labeled set")

    mask = np.zeros(n_train, dtype=bool)
    mask[chosen] = True
    num_classes = int(labels.max()) + 1
    return Pool(X_train, Y_train, mask, X_test, Y_test, num_classes)


def evaluate_accuracy(predictions, Y_test):
    """Fraction of exact label matches."""
    predictions = np.asarray(predictions)
    Y_test = np.asarray(Y_test)
    if predictions.shape != Y_test.shape:
        raise ShapeError("predictions and labels must align")
    if Y_test.size == 0:
        raise ShapeError("empty test set")
    return float(np.mean(predictions == Y_test))
