"""Round-by-round experiment loop: query, label, retrain, evaluate.

Every run is a pure function of its config; per-round seeds are mixed from
the master seed so any round can be reproduced in isolation.
"""

from __future__ import annotations

import csv
import json
import time

from dataclasses import dataclass, field, asdict

import numpy as np

from . import net as nn
from . import strategies
from .errors import ConfigError
from .pool import Preprocessor, initialize_pool, load_csv, make_two_gaussians, evaluate_accuracy

_MIX = 0x9E3779B9  # golden-ratio multiplier for seed mixing


def mix_seed(master, stream):
    """Derived seed: master XOR (stream+1) * golden-ratio constant, mod 2^32."""
    return (int(master) ^ ((int(stream) + 1) * _MIX)) % (2**32)


@dataclass(frozen=True)
class DatasetSpec:
    """Either a CSV path or a synthetic generator with its parameters."""

    kind: str = "two_gaussians"  # "csv" | "two_gaussians"
    csv_path: str = ""
    label_column: object = -1
    has_header: bool = False
    num_classes: int = 2
    n_per_class: int = 200
    separation: float = 3.0
    noise_sd: float = 1.0

    def materialize(self, seed):
        if self.kind == "csv":
            return load_csv(self.csv_path, self.label_column, self.num_classes, self.has_header)
        if self.kind == "two_gaussians":
            return make_two_gaussians(self.n_per_class, self.separation, self.noise_sd, seed)
        raise ConfigError(f"unknown dataset kind {self.kind!r}")


@dataclass(frozen=True)
class ExperimentConfig:
    dataset: DatasetSpec = field(default_factory=DatasetSpec)
    preprocess: str = "none"
    n_init: int = 10
    n_query: int = 5
    rounds: int = 10
    test_fraction: float = 0.25
    net: nn.NetConfig = field(default_factory=lambda: nn.NetConfig((2, 8, 2)))
    train: nn.TrainParams = field(default_factory=nn.TrainParams)
    strategy: strategies.StrategyConfig = field(default_factory=strategies.StrategyConfig)
    seed: int = 0
    warm_start: bool = False

    def __post_init__(self):
        if self.n_init < 1 or self.n_query < 1 or self.rounds < 0:
            raise ConfigError("n_init, n_query must be >= 1 and rounds >= 0")


@dataclass
class RoundRecord:
    round: int
    n_labeled: int
    accuracy: float
    selected: list
    wall_time: float = 0.0


class ExperimentEngine:
    """Stateful driver shared by the batch harness and the labeling service.

    Round 0 trains the initial classifier on the starting labeled pool;
    each later round queries, labels (through the caller), retrains, and
    records test accuracy.
    """

    def __init__(self, config):
        self.config = config
        data_seed = mix_seed(config.seed, 0)
        features, labels = config.dataset.materialize(data_seed)
        self.preprocessor = Preprocessor(config.preprocess).fit(features)
        features = self.preprocessor.transform(features)
        self.pool = initialize_pool(
            features, labels, config.test_fraction, config.n_init, mix_seed(config.seed, 1)
        )
        if config.n_query * config.rounds > self.pool.n_unlabeled:
            raise ConfigError(
                f"{config.rounds} rounds of {config.n_query} queries exceed "
                f"{self.pool.n_unlabeled} unlabeled examples"
            )
        if config.net.input_dim != self.pool.X_train.shape[1]:
            raise ConfigError(
                f"net input width {config.net.input_dim} does not match "
                f"{self.pool.X_train.shape[1]} features"
            )
        self.round = 0
        self.records = []
        self.clf = None
        self._train_and_record(selected=[])

    @property
    def done(self):
        return self.round >= self.config.rounds

    def _train_and_record(self, selected):
        t0 = time.perf_counter()
        cfg = self.config
        t = self.round
        if self.clf is None or not cfg.warm_start:
            init_cfg = nn.NetConfig(
                layer_widths=cfg.net.layer_widths,
                dropout_rate=cfg.net.dropout_rate,
                activation=cfg.net.activation,
                init_seed=mix_seed(cfg.seed, 100 + 2 * t),
            )
            clf = nn.init_classifier(init_cfg)
        else:
            clf = self.clf
        params = nn.TrainParams(
            epochs=cfg.train.epochs,
            batch_size=cfg.train.batch_size,
            learning_rate=cfg.train.learning_rate,
            seed=mix_seed(cfg.seed, 101 + 2 * t),
        )
        X_l, Y_l, _ = self.pool.labeled_view()
        self.clf, _ = nn.train(clf, X_l, Y_l, params)
        acc = evaluate_accuracy(nn.predict(self.clf, self.pool.X_test), self.pool.Y_test)
        self.records.append(
            RoundRecord(
                round=t,
                n_labeled=self.pool.n_labeled,
                accuracy=acc,
                selected=[int(i) for i in selected],
                wall_time=time.perf_counter() - t0,
            )
        )

    def query_next(self):
        """Indices the strategy wants labeled for the upcoming round."""
        if self.done:
            raise ConfigError("all rounds exhausted")
        seed = mix_seed(self.config.seed, 1000 + self.round + 1)
        result = strategies.run_query(
            self.pool, self.clf, self.config.strategy, self.config.n_query, seed
        )
        return result.selected

    def apply_labels(self, query_idxs, labels=None):
        """Label the queried rows (ground truth when labels is None), retrain, record."""
        if labels is None:
            labels = self.pool.oracle_labels(query_idxs)
        self.pool = self.pool.with_labels(query_idxs, labels).update(query_idxs)
        self.round += 1
        self._train_and_record(selected=query_idxs)
        return self.records[-1]

    def step(self):
        """One simulated-oracle round: query, auto-label, retrain."""
        return self.apply_labels(self.query_next())


def run_experiment(config):
    """Full simulated run; returns the list of RoundRecords (round 0 included)."""
    engine = ExperimentEngine(config)
    while not engine.done:
        engine.step()
    return engine.records


def area_under_curve(records):
    """Mean accuracy over rounds 0..T."""
    return float(np.mean([r.accuracy for r in records]))


def rounds_to_accuracy(records, threshold):
    """First round whose accuracy reaches the threshold; T+1 when never reached."""
    for r in records:
        if r.accuracy >= threshold:
            return r.round
    return records[-1].round + 1


def compare_strategies(base_config, strategy_kinds, seeds, accuracy_threshold=0.9):
    """Run every (strategy, seed) cell; summarize curves per strategy.

    Returns {kind: {"mean_curve", "std_curve", "mean_aulc", "mean_rounds_to_threshold"}}.
    """
    import dataclasses

    summary = {}
    for kind in strategy_kinds:
        curves, aulcs, rounds_to = [], [], []
        for seed in seeds:
            cfg = dataclasses.replace(
                base_config,
                strategy=dataclasses.replace(base_config.strategy, kind=kind),
                seed=seed,
            )
            records = run_experiment(cfg)
            curves.append([r.accuracy for r in records])
            aulcs.append(area_under_curve(records))
            rounds_to.append(rounds_to_accuracy(records, accuracy_threshold))
        curves = np.asarray(curves)
        summary[kind] = {
            "mean_curve": curves.mean(axis=0).tolist(),
            "std_curve": curves.std(axis=0).tolist(),
            "mean_aulc": float(np.mean(aulcs)),
            "mean_rounds_to_threshold": float(np.mean(rounds_to)),
        }
    return summary


def config_to_dict(config):
    """JSON-ready dict mirroring ExperimentConfig."""
    d = asdict(config)
    d["net"]["layer_widths"] = list(config.net.layer_widths)
    return d


def config_from_dict(d):
    """Build an ExperimentConfig from a nested dict (inverse of config_to_dict)."""
    d = dict(d)
    dataset = DatasetSpec(**d.pop("dataset", {}))
    net_d = dict(d.pop("net", {}))
    if "layer_widths" in net_d:
        net_d["layer_widths"] = tuple(net_d["layer_widths"])
    net_cfg = nn.NetConfig(**net_d) if net_d else nn.NetConfig((2, 8, 2))
    train_cfg = nn.TrainParams(**d.pop("train", {}))
    strat_cfg = strategies.StrategyConfig(**d.pop("strategy", {}))
    return ExperimentConfig(
        dataset=dataset, net=net_cfg, train=train_cfg, strategy=strat_cfg, **d
    )


def export_curve(records, path, fmt="csv"):
    """Write the learning curve; accuracy fixed to 6 decimals, indices ';'-joined."""
    if fmt == "csv":
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["round", "n_labeled", "accuracy", "selected_indices"])
            for r in records:
                writer.writerow(
                    [r.round, r.n_labeled, f"{r.accuracy:.6f}", ";".join(map(str, r.selected))]
                )
    elif fmt == "json":
        payload = [
            {
                "round": r.round,
                "n_labeled": r.n_labeled,
                "accuracy": f"{r.accuracy:.6f}",
                "selected_indices": list(r.selected),
            }
            for r in records
        ]
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
    else:
        raise ConfigError(f"unknown export format {fmt!r}")


def import_curve(path, fmt="csv"):
    """Parse a curve written by export_curve back into RoundRecords."""
    records = []
    if fmt == "csv":
        with open(path, newline="", encoding="utf-8") as fh:
            for row in csv.DictReader(fh):
                records.append(
                    RoundRecord(
                        round=int(row["round"]),
                        n_labeled=int(row["n_labeled"]),
                        accuracy=float(row["accuracy"]),
                        selected=[int(i) for i in row["selected_indices"].split(";") if i],
                    )
                )
    elif fmt == "json":
        with open(path, encoding="utf-8") as fh:
            for item in json.load(fh):
                records.append(
                    RoundRecord(
                        round=item["round"],
                        n_labeled=item["n_labeled"],
                        accuracy=float(item["accuracy"]),
                        selected=list(item["selected_indices"]),
                    )
                )
    else:
        raise ConfigError(f"unknown export format {fmt!r}")
    return records
