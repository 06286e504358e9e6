"""Command-line front end: run one experiment, compare strategies, or serve."""

import argparse
import json
import sys

from . import harness
from .errors import CapacityError, ConfigError, DataError, NumericError, ShapeError
from .strategies import STRATEGY_KINDS


def _add_shared_flags(p):
    p.add_argument("--config", help="flat JSON file of flag values; flags override it")
    p.add_argument("--dataset", help='"two-gaussians" or "csv:PATH"')
    p.add_argument("--n-per-class", type=int)
    p.add_argument("--separation", type=float)
    p.add_argument("--noise-sd", type=float)
    p.add_argument("--label-column", help="CSV label column, name or 0-based index")
    p.add_argument("--has-header", action="store_true", default=None)
    p.add_argument("--num-classes", type=int)
    p.add_argument("--preprocess", choices=["none", "minmax", "standardize"])
    p.add_argument("--test-fraction", type=float)
    p.add_argument("--n-init", type=int)
    p.add_argument("--n-query", type=int)
    p.add_argument("--rounds", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--hidden", help="comma-separated hidden layer widths, e.g. 8,8")
    p.add_argument("--dropout-rate", type=float)
    p.add_argument("--epochs", type=int)
    p.add_argument("--batch-size", type=int)
    p.add_argument("--learning-rate", type=float)
    p.add_argument("--n-drop", type=int)
    p.add_argument("--bim-eps", type=float)
    p.add_argument("--adv-max-iter", type=int)
    p.add_argument("--deepfool-overshoot", type=float)
    p.add_argument("--warm-start", action="store_true", default=None)


def _merge_flags(args):
    """File values first, explicit flags on top; keys mirror flag names."""
    values = {}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            values.update(json.load(fh))
    for key, val in vars(args).items():
        flag = key.replace("_", "-")
        if val is not None and flag not in ("config", "command"):
            values[flag] = val
    return values


def _build_config(values, strategy_kind=None):
    dataset_flag = values.get("dataset", "two-gaussians")
    if dataset_flag.startswith("csv:"):
        label_col = values.get("label-column", -1)
        try:
            label_col = int(label_col)
        except (TypeError, ValueError):
            pass
        dataset = {
            "kind": "csv",
            "csv_path": dataset_flag[4:],
            "label_column": label_col,
            "has_header": bool(values.get("has-header", False)),
            "num_classes": values.get("num-classes", 2),
        }
        input_dim = None
    elif dataset_flag in ("two-gaussians", "two_gaussians"):
        dataset = {
            "kind": "two_gaussians",
            "n_per_class": values.get("n-per-class", 200),
            "separation": values.get("separation", 3.0),
            "noise_sd": values.get("noise-sd", 1.0),
        }
        input_dim = 2
    else:
        raise ConfigError(f"unknown dataset {dataset_flag!r}")

    if input_dim is None:
        # peek at the CSV to size the input layer
        from .pool import load_csv

        features, _ = load_csv(
            dataset["csv_path"],
            dataset["label_column"],
            dataset["num_classes"],
            dataset["has_header"],
        )
        input_dim = features.shape[1]

    hidden = values.get("hidden", "8")
    if isinstance(hidden, str):
        hidden = [int(w) for w in hidden.split(",") if w]
    num_classes = values.get("num-classes", 2)
    d = {
        "dataset": dataset,
        "preprocess": values.get("preprocess", "none"),
        "n_init": values.get("n-init", 10),
        "n_query": values.get("n-query", 5),
        "rounds": values.get("rounds", 10),
        "test_fraction": values.get("test-fraction", 0.25),
        "seed": values.get("seed", 0),
        "warm_start": bool(values.get("warm-start", False)),
        "net": {
            "layer_widths": [input_dim, *hidden, num_classes],
            "dropout_rate": values.get("dropout-rate", 0.2),
        },
        "train": {
            "epochs": values.get("epochs", 100),
            "batch_size": values.get("batch-size", 32),
            "learning_rate": values.get("learning-rate", 0.1),
        },
        "strategy": {
            "kind": strategy_kind or values.get("strategy", "random"),
            "n_drop": values.get("n-drop", 10),
            "bim_eps": values.get("bim-eps", 0.05),
            "adv_max_iter": values.get("adv-max-iter", 50),
            "deepfool_overshoot": values.get("deepfool-overshoot", 0.02),
        },
    }
    return harness.config_from_dict(d)


def cmd_run(args):
    values = _merge_flags(args)
    config = _build_config(values)
    records = harness.run_experiment(config)
    for r in records:
        print(f"round {r.round}: n_labeled={r.n_labeled} accuracy={r.accuracy:.6f}")
    out = values.get("out")
    if out:
        harness.export_curve(records, out, values.get("format", "csv"))
        print(f"curve written to {out}")
    return 0


def cmd_compare(args):
    values = _merge_flags(args)
    kinds = [k for k in values.get("strategies", "random,entropy").split(",") if k]
    seeds = [int(s) for s in str(values.get("seeds", "0,1,2")).split(",")]
    config = _build_config(values, strategy_kind=kinds[0])
    summary = harness.compare_strategies(config, kinds, seeds)
    width = max(len(k) for k in kinds)
    print(f"{'strategy':<{width}}  mean_aulc  rounds_to_90%")
    for kind in kinds:
        s = summary[kind]
        print(f"{kind:<{width}}  {s['mean_aulc']:.6f}   {s['mean_rounds_to_threshold']:.2f}")
    out = values.get("out")
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            json.dump(summary, fh, indent=2)
        print(f"summary written to {out}")
    return 0


def cmd_serve(args):
    from .service import serve

    serve(host=args.host, port=args.port, snapshot_dir=args.snapshot_dir)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="activepool")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one active-learning experiment")
    _add_shared_flags(p_run)
    p_run.add_argument("--strategy", choices=STRATEGY_KINDS)
    p_run.add_argument("--out", help="write the learning curve here")
    p_run.add_argument("--format", choices=["csv", "json"])
    p_run.set_defaults(func=cmd_run)

    p_cmp = sub.add_parser("compare", help="benchmark strategies over seeds")
    _add_shared_flags(p_cmp)
    p_cmp.add_argument("--strategies", help="comma-separated strategy kinds")
    p_cmp.add_argument("--seeds", help="comma-separated master seeds")
    p_cmp.add_argument("--out", help="write the JSON summary here")
    p_cmp.set_defaults(func=cmd_compare)

    p_srv = sub.add_parser("serve", help="start the labeling HTTP service")
    p_srv.add_argument("--host", default="127.0.0.1")
    p_srv.add_argument("--port", type=int, default=8000)
    p_srv.add_argument("--snapshot-dir", default=None)
    p_srv.set_defaults(func=cmd_serve)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, DataError, ShapeError, CapacityError, NumericError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
