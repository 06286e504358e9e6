"""Run full active-learning experiments and compare strategies across seeds.

Each run: train on the initial labels, then 10 rounds of query -> label ->
retrain -> evaluate. The exported learning curve is reproducible bit-for-bit.
"""

import activepool as ap

config = ap.ExperimentConfig(
    dataset=ap.DatasetSpec(kind="two_gaussians", n_per_class=300, separation=3.0, noise_sd=1.0),
    n_init=10,
    n_query=5,
    rounds=10,
    test_fraction=1 / 3,
    net=ap.NetConfig((2, 2)),
    train=ap.TrainParams(epochs=80, batch_size=10, learning_rate=0.1),
    strategy=ap.StrategyConfig(kind="entropy"),
    seed=0,
)

records = ap.run_experiment(config)
print("entropy learning curve:")
for r in records:
    print(f"  round {r.round:2d}: {r.n_labeled:3d} labels, accuracy {r.accuracy:.3f}")

ap.export_curve(records, "/tmp/entropy_curve.csv", "csv")
print("curve exported to /tmp/entropy_curve.csv")

# Multi-seed comparison: mean AULC and rounds needed to hit 90% accuracy.
summary = ap.compare_strategies(
    config, ["random", "entropy", "margin", "least_confidence"], seeds=range(10)
)
print(f"\n{'strategy':18s} {'mean AULC':>10s} {'rounds to 90%':>14s}")
for kind, s in summary.items():
    print(f"{kind:18s} {s['mean_aulc']:10.4f} {s['mean_rounds_to_threshold']:14.2f}")
