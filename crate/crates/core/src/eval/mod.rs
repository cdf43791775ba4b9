//! Stratified cross-validation, confusion-matrix metrics and error metrics.

mod cv;
mod folds;
mod metrics;

pub use cv::{attribute_curve, cross_validate, fold_seed, CurvePoint, EvalReport};
pub use folds::{stratified_folds, stratify, FoldAssignment};
pub use metrics::{error_metrics, metrics, ConfusionMatrix, ErrorMetrics, ErrorVariant, Metrics};
