"""Geometry-driven selection: core-set coverage and decision-boundary distance.

k-center greedy and k-means operate on embeddings; the adversarial strategies
estimate each point's distance to the decision boundary with BIM or DeepFool.
"""

import numpy as np

import activepool as ap

X, Y = ap.make_two_gaussians(n_per_class=80, separation=4.0, noise_sd=0.5, seed=2)
pool = ap.initialize_pool(X, Y, test_fraction=0.25, n_init=8, seed=2)

clf = ap.init_classifier(ap.NetConfig((2, 8, 2), init_seed=2))
X_l, Y_l, _ = pool.labeled_view()
clf, _ = ap.train(clf, X_l, Y_l, ap.TrainParams(epochs=150, batch_size=8, learning_rate=0.1, seed=2))

# Core-set: cover the embedding space, farthest-first.
emb = ap.get_embeddings(clf, pool.X_train)
res = ap.kcenter_greedy(emb, pool.labeled_mask, 6)
print("k-center picks:", res.selected.tolist())
print("coverage radius after picks:", round(res.diagnostics["coverage_radius"], 3))

# k-means variant: one representative per cluster of the unlabeled embeddings.
X_u, unlabeled_idxs = pool.unlabeled_view()
res = ap.kmeans_query(ap.get_embeddings(clf, X_u), unlabeled_idxs, 6, seed=2)
print("k-means picks: ", res.selected.tolist())

# Adversarial margins: smaller perturbation = closer to the boundary.
cfg = ap.StrategyConfig(kind="adv_deepfool", adv_max_iter=50, deepfool_overshoot=0.02)
res = ap.adversarial_query(pool, clf, "deepfool", 6, cfg)
norms = res.diagnostics["perturbation_norms"]
print("deepfool picks:", res.selected.tolist())
print(f"selected norms: {np.sort(norms)[:6].round(3).tolist()}")
print(f"pool-wide norm range: {norms.min():.3f} .. {norms[np.isfinite(norms)].max():.3f}")

# BIM walks in signed-gradient steps, so it slightly overshoots DeepFool.
x = X_u[0]
df, _ = ap.adv_deepfool_distance(clf, x, 50, 0.02)
bim, _ = ap.adv_bim_distance(clf, x, 0.05, 500)
print(f"one point: deepfool={df:.3f}, bim={bim:.3f}")
