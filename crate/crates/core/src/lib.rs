//! Tabular screening pipeline for AQ-10 questionnaire data.
//!
//! The crate is organised bottom-up:
//!
//! - [`tabular`]: datasets, ARFF/CSV parsing, preprocessing and numeric encoding.
//! - [`screening`]: questionnaire scoring, per-group profiles and a synthetic generator.
//! - [`stats`]: Pearson correlation with two-tailed p-values, entropy, chi-squared.
//! - [`featsel`]: the five attribute rankers (information gain, chi-squared,
//!   correlation, OneR, ReliefF).
//! - [`learn`]: SMO-trained SVM, ridge logistic regression, one-vs-rest wrapper, MLP.
//! - [`eval`]: stratified folds, confusion-matrix metrics, error metrics,
//!   cross-validation and incremental-attribute curves.

pub mod error;
pub mod eval;
pub mod featsel;
pub mod learn;
pub mod screening;
pub mod stats;
pub mod tabular;

pub use error::{Error, Result};
pub use eval::{ConfusionMatrix, EvalReport, FoldAssignment};
pub use featsel::{FeatureRanking, RankingMethod};
pub use learn::{LearnerConfig, TrainedModel};
pub use screening::{GroupProfile, SynthConfig};
pub use stats::CorrelationResult;
pub use tabular::{
    AgeGroup, AttributeKind, AttributeSchema, ClassLabel, Dataset, EncodedMatrix, LabelScheme,
    Record, Value,
};
