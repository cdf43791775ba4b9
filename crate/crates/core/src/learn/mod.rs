//! The four compared classifiers and a uniform, serializable model wrapper.

mod logistic;
mod mlp;
mod multiclass;
mod smo;

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use logistic::{fit_logistic, penalized_loss, LogisticConfig, LogisticModel};
pub use mlp::{fit_mlp, MlpConfig, MlpModel};
pub use multiclass::{fit_multiclass, fit_one_vs_rest, MulticlassModel};
pub use smo::{dual_objective, fit_smo, fit_smo_traced, Kernel, SmoConfig, SmoModel};

use crate::error::{Error, Result};
use crate::tabular::{ClassLabel, Dataset, EncodedMatrix, Encoder, LabelScheme, Record};

/// Logistic sigmoid, evaluated without overflow for large `|z|`.
pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LearnerKind {
    Smo,
    Logistic,
    Multiclass,
    Mlp,
}

impl LearnerKind {
    pub const ALL: [LearnerKind; 4] = [
        LearnerKind::Smo,
        LearnerKind::Logistic,
        LearnerKind::Multiclass,
        LearnerKind::Mlp,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            LearnerKind::Smo => "smo",
            LearnerKind::Logistic => "logistic",
            LearnerKind::Multiclass => "multiclass",
            LearnerKind::Mlp => "mlp",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            LearnerKind::Smo => "SMO",
            LearnerKind::Logistic => "Logistic",
            LearnerKind::Multiclass => "Multi Class Classifier",
            LearnerKind::Mlp => "Multilayer Perceptron",
        }
    }
}

impl fmt::Display for LearnerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LearnerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "smo" | "svm" => Ok(LearnerKind::Smo),
            "logistic" => Ok(LearnerKind::Logistic),
            "multiclass" | "multi_class" | "one_vs_rest" => Ok(LearnerKind::Multiclass),
            "mlp" | "multilayer_perceptron" => Ok(LearnerKind::Mlp),
            _ => Err(Error::InvalidParameter(format!("unknown classifier `{s}`"))),
        }
    }
}

/// A learner together with its hyper-parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "learner", rename_all = "snake_case")]
pub enum LearnerConfig {
    Smo(SmoConfig),
    Logistic(LogisticConfig),
    Multiclass(LogisticConfig),
    Mlp(MlpConfig),
}

impl LearnerConfig {
    /// Default hyper-parameters for `kind`.
    pub fn default_for(kind: LearnerKind) -> Self {
        match kind {
            LearnerKind::Smo => LearnerConfig::Smo(SmoConfig::default()),
            LearnerKind::Logistic => LearnerConfig::Logistic(LogisticConfig::default()),
            LearnerKind::Multiclass => LearnerConfig::Multiclass(LogisticConfig::default()),
            LearnerKind::Mlp => LearnerConfig::Mlp(MlpConfig::default()),
        }
    }

    pub fn kind(&self) -> LearnerKind {
        match self {
            LearnerConfig::Smo(_) => LearnerKind::Smo,
            LearnerConfig::Logistic(_) => LearnerKind::Logistic,
            LearnerConfig::Multiclass(_) => LearnerKind::Multiclass,
            LearnerConfig::Mlp(_) => LearnerKind::Mlp,
        }
    }

    pub fn label_scheme(&self) -> LabelScheme {
        match self {
            LearnerConfig::Smo(_) => LabelScheme::PlusMinusOne,
            _ => LabelScheme::ZeroOne,
        }
    }

    /// Replaces the seed of seeded learners; others are returned unchanged.
    pub fn with_seed(mut self, seed: u64) -> Self {
        if let LearnerConfig::Mlp(c) = &mut self {
            c.seed = seed;
        }
        self
    }

    /// Fits the learner on an already encoded matrix whose labels follow
    /// [`LearnerConfig::label_scheme`].
    pub fn fit_matrix(&self, m: &EncodedMatrix) -> Result<Model> {
        Ok(match self {
            LearnerConfig::Smo(c) => Model::Smo(fit_smo(m, c)?),
            LearnerConfig::Logistic(c) => Model::Logistic(fit_logistic(m, c)?),
            LearnerConfig::Multiclass(c) => Model::Multiclass(fit_multiclass(m, c)?),
            LearnerConfig::Mlp(c) => Model::Mlp(fit_mlp(m, c)?),
        })
    }
}

/// A fitted model of any of the four kinds, operating on encoded rows.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Model {
    Smo(SmoModel),
    Logistic(LogisticModel),
    Multiclass(MulticlassModel),
    Mlp(MlpModel),
}

impl Model {
    pub fn kind(&self) -> LearnerKind {
        match self {
            Model::Smo(_) => LearnerKind::Smo,
            Model::Logistic(_) => LearnerKind::Logistic,
            Model::Multiclass(_) => LearnerKind::Multiclass,
            Model::Mlp(_) => LearnerKind::Mlp,
        }
    }

    pub fn predict_row(&self, x: &[f64]) -> ClassLabel {
        match self {
            Model::Smo(m) => m.predict(x),
            Model::Logistic(m) => m.predict(x),
            Model::Multiclass(m) => m.predict(x),
            Model::Mlp(m) => m.predict(x),
        }
    }

    /// `P(yes | x)`; for SMO a squashed margin.
    pub fn proba_row(&self, x: &[f64]) -> f64 {
        match self {
            Model::Smo(m) => m.predict_proba(x),
            Model::Logistic(m) => m.predict_proba(x),
            Model::Multiclass(m) => m.predict_proba(x),
            Model::Mlp(m) => m.predict_proba(x),
        }
    }
}

/// Version written into saved model files.
pub const MODEL_FORMAT_VERSION: u32 = 1;

/// A model together with the encoder fitted alongside it, so that raw
/// records can be scored directly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainedModel {
    pub format_version: u32,
    pub encoder: Encoder,
    pub model: Model,
}

impl TrainedModel {
    /// Fits an encoder for `features` and the learner on `data`.
    pub fn fit<S: AsRef<str>>(data: &Dataset, features: &[S], config: &LearnerConfig) -> Result<Self> {
        let encoder = Encoder::fit(data, features)?;
        let matrix = encoder.transform(data, config.label_scheme())?;
        let model = config.fit_matrix(&matrix)?;
        Ok(TrainedModel {
            format_version: MODEL_FORMAT_VERSION,
            encoder,
            model,
        })
    }

    pub fn predict(&self, record: &Record) -> Result<ClassLabel> {
        Ok(self.model.predict_row(&self.encoder.encode_record(record)?))
    }

    pub fn predict_proba(&self, record: &Record) -> Result<f64> {
        Ok(self.model.proba_row(&self.encoder.encode_record(record)?))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let model: TrainedModel = serde_json::from_str(text)?;
        if model.format_version != MODEL_FORMAT_VERSION {
            return Err(Error::SchemaMismatch(format!(
                "model format version {} is not supported (expected {MODEL_FORMAT_VERSION})",
                model.format_version
            )));
        }
        Ok(model)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}
