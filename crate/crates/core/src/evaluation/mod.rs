//! Model evaluation. Sweeps compare the predictors fold by fold against the
//! leave-one-out baseline.

mod loo;
mod metrics;
mod models;
mod sweep;

pub use loo::{loo_feature_len, loo_features, score_loo, train_loo, LooConfig};
pub use metrics::{
    auc_neg_pr, auc_roc, mean_and_standard_error, neg_pr_curve, roc_curve, trapezoid, write_curve_csv,
    ScoredEdge,
};
pub use models::{infer_unknown, predict_combined, predict_network_only, predict_sentiment_only, ModelOptions};
pub use sweep::{
    drop_feature_model, make_folds, run_evidence_sweep, run_feature_drop_sweep, FoldPair, FoldScheme, ModelKind,
    SweepConfig, SweepOutput, SweepReport, SweepRow,
};
