"""Pool-based active learning: a small dense network, a strategy catalog,
an experiment harness, and an HTTP labeling service."""

from .net import (
    Classifier,
    NetConfig,
    TrainParams,
    forward,
    get_embeddings,
    init_classifier,
    input_gradient,
    load_checkpoint,
    mc_dropout_probs,
    predict,
    predict_prob,
    save_checkpoint,
    softmax,
    train,
)
from .pool import (
    Pool,
    Preprocessor,
    evaluate_accuracy,
    initialize_pool,
    load_csv,
    make_two_gaussians,
)
from .strategies import (
    STRATEGY_KINDS,
    QueryResult,
    ScoreVector,
    StrategyConfig,
    adversarial_query,
    adv_bim_distance,
    adv_deepfool_distance,
    bald_scores,
    dropout_uncertainty_scores,
    entropy_scores,
    kcenter_greedy,
    kmeans_query,
    least_confidence_scores,
    margin_scores,
    random_query,
    run_query,
    select_top,
)
from .harness import (
    DatasetSpec,
    ExperimentConfig,
    ExperimentEngine,
    RoundRecord,
    area_under_curve,
    compare_strategies,
    config_from_dict,
    config_to_dict,
    export_curve,
    import_curve,
    mix_seed,
    rounds_to_accuracy,
    run_experiment,
)

__version__ = "0.1.0"
