use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tabular::ClassLabel;

/// Counts with `yes` as the positive class.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub tp: usize,
    pub tn: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

impl ConfusionMatrix {
    pub fn from_labels(predicted: &[ClassLabel], actual: &[ClassLabel]) -> Result<Self> {
        if predicted.len() != actual.len() {
            return Err(Error::LengthMismatch {
                left: predicted.len(),
                right: actual.len(),
            });
        }
        let mut cm = ConfusionMatrix::default();
        for (&p, &a) in predicted.iter().zip(actual) {
            cm.record(p, a);
        }
        Ok(cm)
    }

    pub fn record(&mut self, predicted: ClassLabel, actual: ClassLabel) {
        match (predicted, actual) {
            (ClassLabel::Yes, ClassLabel::Yes) => self.tp += 1,
            (ClassLabel::No, ClassLabel::No) => self.tn += 1,
            (ClassLabel::Yes, ClassLabel::No) => self.fp += 1,
            (ClassLabel::No, ClassLabel::Yes) => self.fn_ += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.tp + self.tn + self.fp + self.fn_
    }

    /// `(TP + TN) / N`
    pub fn accuracy(&self) -> Option<f64> {
        ratio(self.tp + self.tn, self.total())
    }

    /// `TP / (TP + FP)`
    pub fn precision(&self) -> Option<f64> {
        ratio(self.tp, self.tp + self.fp)
    }

    /// `TP / (TP + FN)`
    pub fn recall(&self) -> Option<f64> {
        ratio(self.tp, self.tp + self.fn_)
    }

    /// Harmonic mean `2 P R / (P + R)`; undefined when either input is, or
    /// when both are zero.
    pub fn f_measure(&self) -> Option<f64> {
        let (p, r) = (self.precision()?, self.recall()?);
        if p + r == 0.0 {
            None
        } else {
            Some(2.0 * p * r / (p + r))
        }
    }

    pub fn metrics(&self) -> Metrics {
        Metrics {
            accuracy: self.accuracy(),
            precision: self.precision(),
            recall: self.recall(),
            f_measure: self.f_measure(),
        }
    }
}

fn ratio(num: usize, den: usize) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

/// Confusion-matrix metrics; `None` marks a zero denominator.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Metrics {
    pub accuracy: Option<f64>,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub f_measure: Option<f64>,
}

pub fn metrics(cm: &ConfusionMatrix) -> Metrics {
    cm.metrics()
}

/// Normalizations for the relative error measures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorVariant {
    /// RAE as `sqrt(sum (P - A)^2) / sqrt(sum A^2)`; RRSE as
    /// `sqrt(sum (P - A)^2 / sum (A - mean A)^2)`.
    Paper,
    /// RAE as `sum |P - A| / sum |A - mean A|`; RRSE as above.
    Toolkit,
}

/// MAE, RMSE, RAE and RRSE of a prediction vector. Relative measures are
/// `None` when their normalizer is zero.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ErrorMetrics {
    pub mae: f64,
    pub rmse: f64,
    pub rae: Option<f64>,
    pub rrse: Option<f64>,
}

impl ErrorMetrics {
    /// Every field multiplied by 100, the scale of the published tables.
    pub fn percent(&self) -> ErrorMetrics {
        ErrorMetrics {
            mae: self.mae * 100.0,
            rmse: self.rmse * 100.0,
            rae: self.rae.map(|v| v * 100.0),
            rrse: self.rrse.map(|v| v * 100.0),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mae == 0.0
            && self.rmse == 0.0
            && self.rae.is_none_or(|v| v == 0.0)
            && self.rrse.is_none_or(|v| v == 0.0)
    }
}

pub fn error_metrics(predicted: &[f64], actual: &[f64], variant: ErrorVariant) -> Result<ErrorMetrics> {
    if predicted.len() != actual.len() {
        return Err(Error::LengthMismatch {
            left: predicted.len(),
            right: actual.len(),
        });
    }
    if predicted.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if let Some(v) = predicted.iter().chain(actual).find(|v| !v.is_finite()) {
        return Err(Error::NonFinite(format!("error metric input {v}")));
    }
    let n = predicted.len() as f64;
    let mean = actual.iter().sum::<f64>() / n;
    let mut abs_err = 0.0;
    let mut sq_err = 0.0;
    let mut abs_dev = 0.0;
    let mut sq_dev = 0.0;
    let mut sq_actual = 0.0;
    for (&p, &a) in predicted.iter().zip(actual) {
        abs_err += (p - a).abs();
        sq_err += (p - a) * (p - a);
        abs_dev += (a - mean).abs();
        sq_dev += (a - mean) * (a - mean);
        sq_actual += a * a;
    }
    let rae = match variant {
        ErrorVariant::Paper => (sq_actual > 0.0).then(|| sq_err.sqrt() / sq_actual.sqrt()),
        ErrorVariant::Toolkit => (abs_dev > 0.0).then(|| abs_err / abs_dev),
    };
    Ok(ErrorMetrics {
        mae: abs_err / n,
        rmse: (sq_err / n).sqrt(),
        rae,
        rrse: (sq_dev > 0.0).then(|| (sq_err / sq_dev).sqrt()),
    })
}
