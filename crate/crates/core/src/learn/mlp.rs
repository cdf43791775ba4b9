//! Single-hidden-layer perceptron with sigmoid units, trained by online
//! back-propagation with momentum on the cross-entropy loss.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tabular::{ClassLabel, EncodedMatrix};

use super::sigmoid;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MlpConfig {
    /// Hidden units; `None` means `ceil((d + 2) / 2)`.
    pub hidden: Option<usize>,
    pub learning_rate: f64,
    pub momentum: f64,
    pub epochs: usize,
    pub seed: u64,
}

impl Default for MlpConfig {
    fn default() -> Self {
        MlpConfig {
            hidden: None,
            learning_rate: 0.3,
            momentum: 0.2,
            epochs: 500,
            seed: 1,
        }
    }
}

impl MlpConfig {
    pub fn hidden_units(&self, inputs: usize) -> usize {
        self.hidden.unwrap_or((inputs + 2).div_ceil(2))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MlpModel {
    pub inputs: usize,
    /// `h` rows of `inputs + 1` weights; the last entry of a row is its bias.
    pub hidden_weights: Vec<Vec<f64>>,
    /// `h + 1` weights; the last entry is the output bias.
    pub output_weights: Vec<f64>,
    /// Mean training cross-entropy after each epoch.
    #[serde(default)]
    pub loss_history: Vec<f64>,
}

/// `log(1 + e^z)` without overflow.
fn softplus(z: f64) -> f64 {
    z.max(0.0) + (-z.abs()).exp().ln_1p()
}

impl MlpModel {
    /// Weights drawn uniformly from `[-0.5, 0.5)`.
    pub fn init(inputs: usize, hidden: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut draw = || rng.random::<f64>() - 0.5;
        let hidden_weights = (0..hidden)
            .map(|_| (0..=inputs).map(|_| draw()).collect())
            .collect();
        let output_weights = (0..=hidden).map(|_| draw()).collect();
        MlpModel {
            inputs,
            hidden_weights,
            output_weights,
            loss_history: Vec::new(),
        }
    }

    pub fn hidden(&self) -> usize {
        self.hidden_weights.len()
    }

    /// Hidden activations and the output pre-activation.
    fn forward(&self, x: &[f64]) -> (Vec<f64>, f64) {
        let d = self.inputs;
        let act: Vec<f64> = self
            .hidden_weights
            .iter()
            .map(|w| sigmoid(w[..d].iter().zip(x).map(|(a, b)| a * b).sum::<f64>() + w[d]))
            .collect();
        let h = act.len();
        let z = self.output_weights[..h]
            .iter()
            .zip(&act)
            .map(|(a, b)| a * b)
            .sum::<f64>()
            + self.output_weights[h];
        (act, z)
    }

    pub fn predict_proba(&self, x: &[f64]) -> f64 {
        sigmoid(self.forward(x).1)
    }

    pub fn predict(&self, x: &[f64]) -> ClassLabel {
        if self.predict_proba(x) >= 0.5 {
            ClassLabel::Yes
        } else {
            ClassLabel::No
        }
    }

    /// All weights flattened: hidden rows in order, then the output layer.
    pub fn parameters(&self) -> Vec<f64> {
        let mut p: Vec<f64> = self.hidden_weights.iter().flatten().copied().collect();
        p.extend_from_slice(&self.output_weights);
        p
    }

    pub fn set_parameters(&mut self, p: &[f64]) -> Result<()> {
        let expected = self.hidden() * (self.inputs + 1) + self.hidden() + 1;
        if p.len() != expected {
            return Err(Error::LengthMismatch {
                left: expected,
                right: p.len(),
            });
        }
        let mut it = p.iter().copied();
        for row in &mut self.hidden_weights {
            for w in row.iter_mut() {
                *w = it.next().unwrap_or_default();
            }
        }
        for w in &mut self.output_weights {
            *w = it.next().unwrap_or_default();
        }
        Ok(())
    }

    /// Cross-entropy of one record and its gradient, laid out like
    /// [`MlpModel::parameters`], accumulated into `grad`.
    fn record_gradient(&self, x: &[f64], y: f64, grad: &mut [f64]) -> f64 {
        let (d, h) = (self.inputs, self.hidden());
        let (act, z) = self.forward(x);
        let delta_out = sigmoid(z) - y;
        let out_base = h * (d + 1);
        for j in 0..h {
            grad[out_base + j] += delta_out * act[j];
            let delta_hidden = delta_out * self.output_weights[j] * act[j] * (1.0 - act[j]);
            let row = j * (d + 1);
            for k in 0..d {
                grad[row + k] += delta_hidden * x[k];
            }
            grad[row + d] += delta_hidden;
        }
        grad[out_base + h] += delta_out;
        softplus(z) - y * z
    }

    /// Mean cross-entropy over `m` and its analytic gradient.
    pub fn loss_and_gradient(&self, m: &EncodedMatrix) -> Result<(f64, Vec<f64>)> {
        self.check_input(m)?;
        let n = m.nrows() as f64;
        let mut grad = vec![0.0; self.parameters().len()];
        let mut loss = 0.0;
        for i in 0..m.nrows() {
            loss += self.record_gradient(&m.row(i), m.labels[i], &mut grad);
        }
        grad.iter_mut().for_each(|g| *g /= n);
        Ok((loss / n, grad))
    }

    /// Mean cross-entropy over `m`.
    pub fn loss(&self, m: &EncodedMatrix) -> f64 {
        let total: f64 = (0..m.nrows())
            .map(|i| {
                let z = self.forward(&m.row(i)).1;
                softplus(z) - m.labels[i] * z
            })
            .sum();
        total / m.nrows() as f64
    }

    fn check_input(&self, m: &EncodedMatrix) -> Result<()> {
        if m.ncols() != self.inputs {
            return Err(Error::LengthMismatch {
                left: self.inputs,
                right: m.ncols(),
            });
        }
        if m.nrows() == 0 {
            return Err(Error::EmptyDataset);
        }
        Ok(())
    }
}

/// Trains on labels in `{0, 1}`, visiting records in matrix order each epoch.
pub fn fit_mlp(m: &EncodedMatrix, config: &MlpConfig) -> Result<MlpModel> {
    if let Some(bad) = m.labels.iter().find(|&&y| y != 0.0 && y != 1.0) {
        return Err(Error::InvalidParameter(format!("MLP labels must be 0 or 1, got {bad}")));
    }
    if m.rows.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("MLP input matrix".into()));
    }
    let h = config.hidden_units(m.ncols());
    if h == 0 {
        return Err(Error::InvalidParameter("MLP needs at least one hidden unit".into()));
    }
    if !(config.learning_rate > 0.0) || !(0.0..1.0).contains(&config.momentum) {
        return Err(Error::InvalidParameter(
            "learning rate must be positive and momentum in [0, 1)".into(),
        ));
    }
    let mut model = MlpModel::init(m.ncols(), h, config.seed);
    model.check_input(m)?;
    let rows: Vec<Vec<f64>> = (0..m.nrows()).map(|i| m.row(i)).collect();
    let mut params = model.parameters();
    let mut velocity = vec![0.0; params.len()];
    let mut grad = vec![0.0; params.len()];
    for epoch in 0..config.epochs {
        for (x, &y) in rows.iter().zip(&m.labels) {
            grad.iter_mut().for_each(|g| *g = 0.0);
            model.record_gradient(x, y, &mut grad);
            for ((p, v), g) in params.iter_mut().zip(&mut velocity).zip(&grad) {
                *v = config.momentum * *v - config.learning_rate * g;
                *p += *v;
            }
            model.set_parameters(&params)?;
        }
        if params.iter().any(|p| !p.is_finite()) {
            return Err(Error::Diverged { epoch });
        }
        let loss = model.loss(m);
        if !loss.is_finite() {
            return Err(Error::Diverged { epoch });
        }
        model.loss_history.push(loss);
    }
    Ok(model)
}
