"""Query strategies: score unlabeled examples and pick the n most informative.

Scorers are pure functions of model outputs (probabilities, dropout stacks,
embeddings); they never touch ground-truth labels. Selection is deterministic:
ties always break toward the lower index.
"""

import csv

from dataclasses import dataclass, field

import numpy as np

from . import net
from .errors import CapacityError, ConfigError, NumericError, ShapeError

STRATEGY_KINDS = (
    "random",
    "least_confidence",
    "margin",
    "entropy",
    "lc_dropout",
    "margin_dropout",
    "entropy_dropout",
    "bald",
    "kcenter_greedy",
    "kmeans",
    "adv_bim",
    "adv_deepfool",
)

SELECT_MAX = "select_max"
SELECT_MIN = "select_min"

_INF = float("inf")


@dataclass(frozen=True)
class ScoreVector:
    """Scores aligned with the unlabeled view, plus the selection direction."""

    scores: np.ndarray
    direction: str

    def __post_init__(self):
        if self.direction not in (SELECT_MAX, SELECT_MIN):
            raise ConfigError(f"unknown direction {self.direction!r}")


@dataclass(frozen=True)
class StrategyConfig:
    kind: str = "random"
    n_drop: int = 10
    bim_eps: float = 0.05
    adv_max_iter: int = 50
    deepfool_overshoot: float = 0.02
    kmeans_max_iter: int = 100
    seed: int = 0

    def __post_init__(self):
        if self.kind not in STRATEGY_KINDS:
            raise ConfigError(f"unknown strategy kind {self.kind!r}")
        if self.n_drop < 1 or self.adv_max_iter < 1 or self.kmeans_max_iter < 1:
            raise ConfigError("n_drop, adv_max_iter, kmeans_max_iter must be positive")
        if self.bim_eps <= 0 or self.deepfool_overshoot < 0:
            raise ConfigError("bim_eps must be positive, overshoot nonnegative")


@dataclass
class QueryResult:
    selected: np.ndarray
    scores: ScoreVector = None
    diagnostics: dict = field(default_factory=dict)


def select_top(scores, n, unlabeled_idxs):
    """Global indices of the n best-scoring unlabeled rows, best first.

    Ties break toward the lower view index. Under select_min, +inf entries
    are only taken once every finite entry is exhausted.
    """
    values = np.asarray(scores.scores, dtype=float)
    if values.shape[0] != len(unlabeled_idxs):
        raise ShapeError("scores must align with the unlabeled view")
    if not (1 <= n <= values.shape[0]):
        raise CapacityError(f"cannot select {n} of {values.shape[0]} unlabeled examples")
    keys = -values if scores.direction == SELECT_MAX else values
    order = np.argsort(keys, kind="stable")
    return np.asarray(unlabeled_idxs)[order[:n]]


def random_query(pool, n, seed):
    """Uniform sample without replacement from the unlabeled pool."""
    _, idxs = pool.unlabeled_view()
    if not (1 <= n <= idxs.size):
        raise CapacityError(f"cannot select {n} of {idxs.size} unlabeled examples")
    rng = np.random.default_rng(seed)
    return QueryResult(selected=rng.choice(idxs, size=n, replace=False))


def least_confidence_scores(probs):
    """1 - max class probability; higher means less confident."""
    return ScoreVector(1.0 - np.max(probs, axis=1), SELECT_MAX)


def margin_scores(probs):
    """Gap between the top two class probabilities; smaller means more uncertain."""
    part = np.sort(probs, axis=1)
    return ScoreVector(part[:, -1] - part[:, -2], SELECT_MIN)


def entropy_scores(probs):
    """Shannon entropy (natural log), with 0*log(0) taken as 0."""
    p = np.asarray(probs, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(p > 0, -p * np.log(p), 0.0)
    return ScoreVector(terms.sum(axis=1), SELECT_MAX)


_BASE_SCORERS = {
    "least_confidence": least_confidence_scores,
    "margin": margin_scores,
    "entropy": entropy_scores,
}


def mean_probs(stack):
    """Average a dropout stack into one probability matrix, renormalizing drift."""
    stack = np.asarray(stack, dtype=float)
    if stack.ndim != 3 or stack.shape[0] < 1:
        raise ConfigError("stack must hold at least one probability matrix")
    mean = stack.mean(axis=0)
    sums = mean.sum(axis=1, keepdims=True)
    drift = np.abs(sums - 1.0)
    if np.any(drift > 1e-12):
        mean = mean / sums
    return mean


def dropout_uncertainty_scores(stack, base):
    """Apply a base uncertainty scorer to the mean of the dropout passes."""
    if base not in _BASE_SCORERS:
        raise ConfigError(f"unknown base scorer {base!r}")
    return _BASE_SCORERS[base](mean_probs(stack))


def bald_scores(stack):
    """Mutual information: entropy of the mean minus mean per-pass entropy."""
    stack = np.asarray(stack, dtype=float)
    if stack.ndim != 3 or stack.shape[0] < 1:
        raise ConfigError("stack must hold at least one probability matrix")
    h_mean = entropy_scores(mean_probs(stack)).scores
    per_pass = np.stack([entropy_scores(stack[t]).scores for t in range(stack.shape[0])])
    return ScoreVector(h_mean - per_pass.mean(axis=0), SELECT_MAX)


def kcenter_greedy(embeddings_all, labeled_mask, n):
    """Repeatedly pick the unlabeled point farthest from all covered points.

    Coverage starts from the labeled set and grows with each pick; distances
    are Euclidean over the given embeddings. Returns global indices in pick order.
    """
    emb = np.asarray(embeddings_all, dtype=float)
    mask = np.asarray(labeled_mask, dtype=bool).copy()
    if not mask.any():
        raise ConfigError("k-center greedy needs at least one labeled example")
    unlabeled = np.flatnonzero(~mask)
    if not (1 <= n <= unlabeled.size):
        raise CapacityError(f"cannot select {n} of {unlabeled.size} unlabeled examples")

    covered = emb[mask]
    # min distance from every point to the covered set
    min_dist = np.min(
        np.linalg.norm(emb[:, None, :] - covered[None, :, :], axis=2), axis=1
    )
    picks = []
    for _ in range(n):
        cand = np.flatnonzero(~mask)
        best = cand[np.argmax(min_dist[cand])]
        picks.append(int(best))
        mask[best] = True
        d_new = np.linalg.norm(emb - emb[best], axis=1)
        min_dist = np.minimum(min_dist, d_new)
    return QueryResult(
        selected=np.asarray(picks),
        scores=None,
        diagnostics={"coverage_radius": float(min_dist[~mask].max()) if (~mask).any() else 0.0},
    )


def _kmeans_pp_seeds(X, k, rng):
    """k-means++ seeding: first center uniform, rest D^2-weighted."""
    centers = [X[rng.integers(X.shape[0])]]
    for _ in range(k - 1):
        d2 = np.min(
            np.stack([np.sum((X - c) ** 2, axis=1) for c in centers]), axis=0
        )
        total = d2.sum()
        if total <= 0:
            centers.append(X[rng.integers(X.shape[0])])
            continue
        centers.append(X[rng.choice(X.shape[0], p=d2 / total)])
    return np.stack(centers)


def kmeans_query(embeddings_unlabeled, unlabeled_idxs, n, seed, max_iter=100):
    """Lloyd's algorithm (k = n, k-means++ seeding) then one distinct point per centroid."""
    X = np.asarray(embeddings_unlabeled, dtype=float)
    idxs = np.asarray(unlabeled_idxs)
    if not (1 <= n <= X.shape[0]):
        raise CapacityError(f"cannot select {n} of {X.shape[0]} unlabeled examples")
    rng = np.random.default_rng(seed)
    centers = _kmeans_pp_seeds(X, n, rng)
    assign = None
    for _ in range(max_iter):
        dists = np.linalg.norm(X[:, None, :] - centers[None, :, :], axis=2)
        new_assign = np.argmin(dists, axis=1)
        if assign is not None and np.array_equal(new_assign, assign):
            break
        assign = new_assign
        for c in range(n):
            members = X[assign == c]
            if members.shape[0]:
                centers[c] = members.mean(axis=0)

    # each centroid claims its nearest still-available point
    dists = np.linalg.norm(X[:, None, :] - centers[None, :, :], axis=2)
    taken = np.zeros(X.shape[0], dtype=bool)
    picks = []
    for c in range(n):
        avail = np.flatnonzero(~taken)
        chosen = avail[np.argmin(dists[avail, c])]
        taken[chosen] = True
        picks.append(int(chosen))
    return QueryResult(selected=idxs[picks])


def adv_bim_distance(clf, x, bim_eps, adv_max_iter):
    """Decision-boundary distance by iterated signed gradient steps.

    Walks x along sign(grad(runner-up logit - current logit)) until the
    prediction flips; returns (L2 perturbation norm, iterations). +inf norm
    when the label never flips.
    """
    x0 = np.asarray(x, dtype=float).ravel()
    c = int(net.predict(clf, x0.reshape(1, -1))[0])
    x_cur = x0.copy()
    for it in range(1, adv_max_iter + 1):
        logits, _ = net.forward(clf, x_cur.reshape(1, -1))
        order = np.argsort(-logits[0], kind="stable")
        runner = int(order[0]) if order[0] != c else int(order[1])
        g = net.input_gradient(clf, x_cur, runner) - net.input_gradient(clf, x_cur, c)
        x_cur = x_cur + bim_eps * np.sign(g)
        if int(net.predict(clf, x_cur.reshape(1, -1))[0]) != c:
            return float(np.linalg.norm(x_cur - x0)), it
    return _INF, adv_max_iter


def adv_deepfool_distance(clf, x, adv_max_iter, overshoot):
    """Decision-boundary distance by iterative multiclass linearization.

    Each step moves to the nearest linearized class boundary; the accumulated
    perturbation is scaled by (1 + overshoot). Returns (L2 norm, iterations).
    """
    x0 = np.asarray(x, dtype=float).ravel()
    c = int(net.predict(clf, x0.reshape(1, -1))[0])
    K = clf.config.num_classes
    r_total = np.zeros_like(x0)
    x_cur = x0.copy()
    for it in range(1, adv_max_iter + 1):
        logits, _ = net.forward(clf, x_cur.reshape(1, -1))
        g_c = net.input_gradient(clf, x_cur, c)
        best_ratio, best_w, best_f = None, None, None
        for k in range(K):
            if k == c:
                continue
            w_k = net.input_gradient(clf, x_cur, k) - g_c
            f_k = float(logits[0, k] - logits[0, c])
            norm = float(np.linalg.norm(w_k))
            if norm < 1e-12:
                continue
            ratio = abs(f_k) / norm
            if best_ratio is None or ratio < best_ratio:
                best_ratio, best_w, best_f = ratio, w_k, f_k
        if best_w is None:
            raise NumericError("vanishing boundary gradients for all classes")
        r_total = r_total + (abs(best_f) / float(np.dot(best_w, best_w)) + 1e-9) * best_w
        x_cur = x0 + (1.0 + overshoot) * r_total
        if int(net.predict(clf, x_cur.reshape(1, -1))[0]) != c:
            return float((1.0 + overshoot) * np.linalg.norm(r_total)), it
    return _INF, adv_max_iter


def adversarial_query(pool, clf, method, n, config):
    """Select the unlabeled points closest to the decision boundary."""
    X_u, idxs = pool.unlabeled_view()
    if not (1 <= n <= idxs.size):
        raise CapacityError(f"cannot select {n} of {idxs.size} unlabeled examples")
    norms = np.empty(idxs.size)
    iters = np.empty(idxs.size, dtype=int)
    for i, x in enumerate(X_u):
        if method == "bim":
            norms[i], iters[i] = adv_bim_distance(clf, x, config.bim_eps, config.adv_max_iter)
        elif method == "deepfool":
            try:
                norms[i], iters[i] = adv_deepfool_distance(
                    clf, x, config.adv_max_iter, config.deepfool_overshoot
                )
            except NumericError:
                norms[i], iters[i] = _INF, config.adv_max_iter
        else:
            raise ConfigError(f"unknown adversarial method {method!r}")
    scores = ScoreVector(norms, SELECT_MIN)
    selected = select_top(scores, n, idxs)
    return QueryResult(
        selected=selected,
        scores=scores,
        diagnostics={"perturbation_norms": norms, "iterations": iters},
    )


def run_query(pool, clf, config, n, seed=None):
    """Dispatch a StrategyConfig to the matching strategy; returns a QueryResult."""
    seed = config.seed if seed is None else seed
    kind = config.kind
    X_u, idxs = pool.unlabeled_view()

    if kind == "random":
        return random_query(pool, n, seed)
    if kind in ("least_confidence", "margin", "entropy"):
        scores = _BASE_SCORERS[kind](net.predict_prob(clf, X_u))
    elif kind in ("lc_dropout", "margin_dropout", "entropy_dropout"):
        base = {"lc_dropout": "least_confidence", "margin_dropout": "margin"}.get(
            kind, "entropy"
        )
        stack = net.mc_dropout_probs(clf, X_u, config.n_drop, seed)
        scores = dropout_uncertainty_scores(stack, base)
    elif kind == "bald":
        stack = net.mc_dropout_probs(clf, X_u, config.n_drop, seed)
        scores = bald_scores(stack)
    elif kind == "kcenter_greedy":
        emb = net.get_embeddings(clf, pool.X_train)
        return kcenter_greedy(emb, pool.labeled_mask, n)
    elif kind == "kmeans":
        emb = net.get_embeddings(clf, X_u)
        return kmeans_query(emb, idxs, n, seed, config.kmeans_max_iter)
    elif kind == "adv_bim":
        return adversarial_query(pool, clf, "bim", n, config)
    elif kind == "adv_deepfool":
        return adversarial_query(pool, clf, "deepfool", n, config)
    else:
        raise ConfigError(f"unknown strategy kind {kind!r}")

    return QueryResult(selected=select_top(scores, n, idxs), scores=scores)


def export_diagnostics(result, unlabeled_idxs, path):
    """Write per-example scores/norms as CSV keyed by global index."""
    idxs = np.asarray(unlabeled_idxs)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        header = ["global_index"]
        columns = []
        if result.scores is not None:
            header.append("score")
            columns.append(np.asarray(result.scores.scores))
        for key, values in result.diagnostics.items():
            values = np.asarray(values)
            if values.shape == idxs.shape:
                header.append(key)
                columns.append(values)
        writer.writerow(header)
        for i, g in enumerate(idxs):
            writer.writerow([int(g)] + [repr(float(col[i])) for col in columns])
