"""Score unlabeled examples with the uncertainty-based query strategies.

Shows least confidence, margin, entropy, their Monte Carlo dropout variants,
and BALD on one small pool.
"""

import numpy as np

import activepool as ap

X, Y = ap.make_two_gaussians(n_per_class=100, separation=3.0, noise_sd=1.0, seed=1)
pool = ap.initialize_pool(X, Y, test_fraction=0.25, n_init=10, seed=1)

clf = ap.init_classifier(ap.NetConfig((2, 8, 2), dropout_rate=0.3, init_seed=1))
X_l, Y_l, _ = pool.labeled_view()
clf, _ = ap.train(clf, X_l, Y_l, ap.TrainParams(epochs=100, batch_size=10, learning_rate=0.1, seed=1))

X_u, unlabeled_idxs = pool.unlabeled_view()
probs = ap.predict_prob(clf, X_u)

# Single-pass uncertainties.
for name, scorer in [
    ("least confidence", ap.least_confidence_scores),
    ("margin", ap.margin_scores),
    ("entropy", ap.entropy_scores),
]:
    sv = scorer(probs)
    picks = ap.select_top(sv, 5, unlabeled_idxs)
    print(f"{name:18s} -> {picks.tolist()}")

# Dropout-estimated uncertainties average 10 stochastic passes first.
stack = ap.mc_dropout_probs(clf, X_u, n_drop=10, rng=1)
sv = ap.dropout_uncertainty_scores(stack, "entropy")
print(f"{'entropy (dropout)':18s} -> {ap.select_top(sv, 5, unlabeled_idxs).tolist()}")

# BALD: disagreement between passes, not plain uncertainty.
bald = ap.bald_scores(stack)
print(f"{'bald':18s} -> {ap.select_top(bald, 5, unlabeled_idxs).tolist()}")
print("bald score range:", float(bald.scores.min()), "to", float(bald.scores.max()))

# The one-call dispatcher covers every catalog entry by name.
res = ap.run_query(pool, clf, ap.StrategyConfig(kind="margin_dropout", n_drop=10), 5, seed=1)
print(f"{'dispatcher':18s} -> {res.selected.tolist()}")
