//! One-vs-rest reduction over logistic base models.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tabular::{ClassLabel, EncodedMatrix};

use super::logistic::{fit_logistic, LogisticConfig, LogisticModel};

/// One logistic model per class, or a single model for two classes (whose
/// score is `P(class 1)`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MulticlassModel {
    pub class_count: usize,
    pub models: Vec<LogisticModel>,
}

impl MulticlassModel {
    /// One-vs-rest score per class.
    pub fn scores(&self, x: &[f64]) -> Vec<f64> {
        if self.class_count == 2 {
            let p = self.models[0].predict_proba(x);
            vec![1.0 - p, p]
        } else {
            self.models.iter().map(|m| m.predict_proba(x)).collect()
        }
    }

    /// Index of the highest score; ties go to the lower index.
    pub fn predict_class(&self, x: &[f64]) -> usize {
        if self.class_count == 2 {
            return usize::from(self.models[0].predict_proba(x) >= 0.5);
        }
        let scores = self.scores(x);
        let mut best = 0;
        for (i, &s) in scores.iter().enumerate() {
            if s > scores[best] {
                best = i;
            }
        }
        best
    }

    /// `P(yes | x)` for binary tasks.
    pub fn predict_proba(&self, x: &[f64]) -> f64 {
        self.scores(x)[1.min(self.class_count - 1)]
    }

    pub fn predict(&self, x: &[f64]) -> ClassLabel {
        if self.predict_class(x) == 1 {
            ClassLabel::Yes
        } else {
            ClassLabel::No
        }
    }
}

/// Binary entry point: labels in `{0, 1}`.
pub fn fit_multiclass(m: &EncodedMatrix, base: &LogisticConfig) -> Result<MulticlassModel> {
    let classes = m
        .labels
        .iter()
        .map(|&y| {
            if y == 0.0 || y == 1.0 {
                Ok(y as usize)
            } else {
                Err(Error::InvalidParameter(format!("binary labels must be 0 or 1, got {y}")))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    fit_one_vs_rest(&m.rows, &classes, base)
}

/// Fits one-vs-rest models for class indices `0..k`, where `k` is one more
/// than the largest index present. Every class in `0..k` must occur.
pub fn fit_one_vs_rest(
    x: &DMatrix<f64>,
    classes: &[usize],
    base: &LogisticConfig,
) -> Result<MulticlassModel> {
    if x.nrows() != classes.len() {
        return Err(Error::LengthMismatch {
            left: x.nrows(),
            right: classes.len(),
        });
    }
    let k = classes.iter().max().map_or(0, |&c| c + 1);
    if k < 2 || classes.iter().all(|&c| c == classes[0]) {
        return Err(Error::SingleClass);
    }
    if (0..k).any(|c| !classes.contains(&c)) {
        return Err(Error::InvalidParameter("class indices must be contiguous from 0".into()));
    }
    let binary = |target: usize| EncodedMatrix {
        rows: x.clone(),
        labels: classes.iter().map(|&c| f64::from(c == target)).collect(),
        column_map: Vec::new(),
    };
    let models = if k == 2 {
        vec![fit_logistic(&binary(1), base)?]
    } else {
        (0..k)
            .map(|c| fit_logistic(&binary(c), base))
            .collect::<Result<Vec<_>>>()?
    };
    Ok(MulticlassModel {
        class_count: k,
        models,
    })
}
