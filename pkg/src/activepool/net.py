"""Dense feed-forward classifier with dropout, trained by exact backpropagation.

The model is a plain MLP: ReLU hidden layers, each followed by inverted
dropout, and a linear output layer producing logits. Everything is numpy;
all randomness flows through explicit seeds or generators so every
operation is replayable.
"""

from dataclasses import dataclass, field

import json

import numpy as np

from .errors import ConfigError, NumericError, ShapeError


def _as_rng(rng):
    """Accept either an integer seed or a numpy Generator."""
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


@dataclass(frozen=True)
class NetConfig:
    """Architecture: layer widths (input, hidden..., classes), dropout, init seed."""

    layer_widths: tuple
    dropout_rate: float = 0.0
    activation: str = "relu"
    init_seed: int = 0

    def __post_init__(self):
        widths = tuple(int(w) for w in self.layer_widths)
        object.__setattr__(self, "layer_widths", widths)
        if len(widths) < 2:
            raise ConfigError("layer_widths needs at least input and output widths")
        if any(w < 1 for w in widths):
            raise ConfigError("every layer width must be >= 1")
        if not (0.0 <= self.dropout_rate < 1.0):
            raise ConfigError("dropout_rate must lie in [0, 1)")
        if self.activation != "relu":
            raise ConfigError(f"unsupported activation {self.activation!r}")

    @property
    def input_dim(self):
        return self.layer_widths[0]

    @property
    def num_classes(self):
        return self.layer_widths[-1]

    @property
    def embedding_dim(self):
        """Width of the penultimate layer (the input itself if no hidden layers)."""
        return self.layer_widths[-2]


@dataclass(frozen=True)
class TrainParams:
    epochs: int = 100
    batch_size: int = 32
    learning_rate: float = 0.1
    seed: int = 0

    def __post_init__(self):
        if self.epochs < 1 or self.batch_size < 1:
            raise ConfigError("epochs and batch_size must be positive")
        if self.learning_rate < 0:
            raise ConfigError("learning_rate must be nonnegative")


@dataclass
class Classifier:
    """Layer parameters plus the config that shaped them. Treated as immutable."""

    config: NetConfig
    weights: list = field(repr=False)
    biases: list = field(repr=False)

    def __post_init__(self):
        widths = self.config.layer_widths
        for i, (W, b) in enumerate(zip(self.weights, self.biases)):
            if W.shape != (widths[i], widths[i + 1]) or b.shape != (widths[i + 1],):
                raise ShapeError(f"layer {i} parameters inconsistent with widths {widths}")
            if not (np.isfinite(W).all() and np.isfinite(b).all()):
                raise NumericError(f"layer {i} holds non-finite parameters")


def init_classifier(config):
    """Fresh parameters: uniform(-1/sqrt(fan_in), +1/sqrt(fan_in)) weights, zero biases."""
    rng = np.random.default_rng(config.init_seed)
    weights, biases = [], []
    widths = config.layer_widths
    for fan_in, fan_out in zip(widths[:-1], widths[1:]):
        bound = 1.0 / np.sqrt(fan_in)
        weights.append(rng.uniform(-bound, bound, size=(fan_in, fan_out)))
        biases.append(np.zeros(fan_out))
    return Classifier(config=config, weights=weights, biases=biases)


def _check_input(clf, X):
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != clf.config.input_dim:
        raise ShapeError(
            f"expected (*, {clf.config.input_dim}) input, got {X.shape}"
        )
    return X


def _forward_cached(clf, X, dropout_active, rng):
    """Full pass keeping per-layer caches for backprop.

    Returns (logits, activations, pre_activations, masks) where activations[0]
    is the input and masks[i] is the dropout multiplier applied after hidden
    layer i (None when no masking happened).
    """
    p = clf.config.dropout_rate
    if dropout_active and p > 0.0:
        rng = _as_rng(rng)
    n_layers = len(clf.weights)
    activations = [X]
    pre_acts = []
    masks = []
    a = X
    for i in range(n_layers - 1):
        z = a @ clf.weights[i] + clf.biases[i]
        pre_acts.append(z)
        a = np.maximum(z, 0.0)
        if dropout_active and p > 0.0:
            keep = rng.random(a.shape) >= p
            mask = keep / (1.0 - p)
            a = a * mask
            masks.append(mask)
        else:
            masks.append(None)
        activations.append(a)
    logits = a @ clf.weights[-1] + clf.biases[-1]
    return logits, activations, pre_acts, masks


def forward(clf, X, dropout_active=False, rng=None):
    """Logits and penultimate activations; dropout masks drawn from rng when active."""
    X = _check_input(clf, X)
    if dropout_active and clf.config.dropout_rate > 0.0:
        rng = _as_rng(rng)
    logits, activations, _, _ = _forward_cached(clf, X, dropout_active, rng)
    return logits, activations[-1]


def softmax(logits):
    """Row-wise softmax with max subtraction; rejects non-finite logits."""
    logits = np.asarray(logits, dtype=float)
    if not np.isfinite(logits).all():
        raise NumericError("non-finite logits")
    shifted = logits - logits.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)


def predict_prob(clf, X):
    """Class probabilities from a deterministic pass."""
    logits, _ = forward(clf, X, dropout_active=False)
    return softmax(logits)


def predict(clf, X):
    """Per-row argmax of predict_prob; ties go to the lowest class index."""
    return np.argmax(predict_prob(clf, X), axis=1)


def get_embeddings(clf, X):
    """Penultimate activations from a deterministic pass."""
    _, emb = forward(clf, X, dropout_active=False)
    return emb


def mc_dropout_probs(clf, X, n_drop, rng=None):
    """Stack of n_drop dropout-active probability matrices, shape (n_drop, N, K)."""
    if n_drop < 1:
        raise ConfigError("n_drop must be >= 1")
    rng = _as_rng(rng)
    X = _check_input(clf, X)
    stack = np.empty((n_drop, X.shape[0], clf.config.num_classes))
    for t in range(n_drop):
        logits, _, _, _ = _forward_cached(clf, X, True, rng)
        stack[t] = softmax(logits)
    return stack


def _loss_and_grads(clf, X, Y, dropout_active=False, rng=None):
    """Mean cross-entropy plus exact parameter gradients for one batch."""
    logits, activations, pre_acts, masks = _forward_cached(clf, X, dropout_active, rng)
    probs = softmax(logits)
    n = X.shape[0]
    picked = probs[np.arange(n), Y]
    loss = float(-np.mean(np.log(np.maximum(picked, 1e-300))))

    delta = probs.copy()
    delta[np.arange(n), Y] -= 1.0
    delta /= n

    grads_W = [None] * len(clf.weights)
    grads_b = [None] * len(clf.biases)
    for i in range(len(clf.weights) - 1, -1, -1):
        grads_W[i] = activations[i].T @ delta
        grads_b[i] = delta.sum(axis=0)
        if i > 0:
            delta = delta @ clf.weights[i].T
            if masks[i - 1] is not None:
                delta = delta * masks[i - 1]
            delta = delta * (pre_acts[i - 1] > 0)
    return loss, grads_W, grads_b


def loss_and_param_grads(clf, X, Y):
    """Deterministic (dropout-off) loss and gradients, e.g. for gradient checks."""
    X = _check_input(clf, X)
    Y = np.asarray(Y, dtype=int)
    return _loss_and_grads(clf, X, Y)


def train(clf, X, Y, params):
    """Minibatch SGD on mean cross-entropy, dropout active; returns (new clf, loss history).

    Shuffling and dropout masks derive from params.seed; the last short batch
    is used rather than dropped.
    """
    X = _check_input(clf, X)
    Y = np.asarray(Y, dtype=int)
    if X.shape[0] == 0:
        raise ConfigError("cannot train on an empty labeled set")
    if Y.shape != (X.shape[0],):
        raise ShapeError("labels must align with rows of X")
    K = clf.config.num_classes
    if Y.min() < 0 or Y.max() >= K:
        raise ConfigError(f"labels must lie in [0, {K})")

    rng = np.random.default_rng(params.seed)
    out = Classifier(
        config=clf.config,
        weights=[W.copy() for W in clf.weights],
        biases=[b.copy() for b in clf.biases],
    )
    n = X.shape[0]
    history = []
    for epoch in range(params.epochs):
        order = rng.permutation(n)
        losses = []
        for start in range(0, n, params.batch_size):
            idx = order[start : start + params.batch_size]
            loss, gW, gb = _loss_and_grads(out, X[idx], Y[idx], True, rng)
            if not np.isfinite(loss):
                raise NumericError(f"non-finite loss at epoch {epoch}")
            for i in range(len(out.weights)):
                out.weights[i] -= params.learning_rate * gW[i]
                out.biases[i] -= params.learning_rate * gb[i]
            losses.append(loss * len(idx))
        history.append(float(np.sum(losses) / n))
    return out, history


def input_gradient(clf, x, target_class):
    """Exact gradient of the target-class logit w.r.t. a single input row (dropout off)."""
    x = np.asarray(x, dtype=float).reshape(1, -1)
    x = _check_input(clf, x)
    K = clf.config.num_classes
    if not (0 <= target_class < K):
        raise ShapeError(f"target_class {target_class} outside [0, {K})")
    _, _, pre_acts, _ = _forward_cached(clf, x, False, None)
    v = clf.weights[-1][:, target_class].copy()
    for i in range(len(clf.weights) - 2, -1, -1):
        v = clf.weights[i] @ (v * (pre_acts[i][0] > 0))
    return v


def save_checkpoint(clf, path):
    """Write config plus parameters; doubles round-trip bit-exactly."""
    arrays = {}
    for i, (W, b) in enumerate(zip(clf.weights, clf.biases)):
        arrays[f"W{i}"] = W
        arrays[f"b{i}"] = b
    meta = json.dumps(
        {
            "layer_widths": list(clf.config.layer_widths),
            "dropout_rate": clf.config.dropout_rate,
            "activation": clf.config.activation,
            "init_seed": clf.config.init_seed,
        }
    )
    np.savez(path, config=np.frombuffer(meta.encode(), dtype=np.uint8), **arrays)


def load_checkpoint(path):
    with np.load(path) as data:
        meta = json.loads(bytes(data["config"]).decode())
        config = NetConfig(
            layer_widths=tuple(meta["layer_widths"]),
            dropout_rate=meta["dropout_rate"],
            activation=meta["activation"],
            init_seed=meta["init_seed"],
        )
        n_layers = len(config.layer_widths) - 1
        weights = [data[f"W{i}"].copy() for i in range(n_layers)]
        biases = [data[f"b{i}"].copy() for i in range(n_layers)]
    return Classifier(config=config, weights=weights, biases=biases)
