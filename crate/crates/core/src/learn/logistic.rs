//! Ridge-penalized logistic regression fitted by damped Newton iterations.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tabular::{ClassLabel, EncodedMatrix};

use super::sigmoid;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LogisticConfig {
    /// Penalty `lambda / 2 * |w|^2`; the intercept is not penalized.
    pub ridge: f64,
    pub max_iter: usize,
    /// Stop when the gradient's infinity norm falls to this value.
    pub tol: f64,
}

impl Default for LogisticConfig {
    fn default() -> Self {
        LogisticConfig {
            ridge: 1e-8,
            max_iter: 100,
            tol: 1e-6,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogisticModel {
    pub weights: Vec<f64>,
    pub intercept: f64,
    pub ridge: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl LogisticModel {
    pub fn linear(&self, x: &[f64]) -> f64 {
        self.weights.iter().zip(x).map(|(w, v)| w * v).sum::<f64>() + self.intercept
    }

    /// `P(yes | x)`.
    pub fn predict_proba(&self, x: &[f64]) -> f64 {
        sigmoid(self.linear(x))
    }

    pub fn predict(&self, x: &[f64]) -> ClassLabel {
        if self.predict_proba(x) >= 0.5 {
            ClassLabel::Yes
        } else {
            ClassLabel::No
        }
    }
}

/// `log(1 + e^z)` without overflow.
fn softplus(z: f64) -> f64 {
    z.max(0.0) + (-z.abs()).exp().ln_1p()
}

/// Penalized negative log-likelihood of `theta = (w, b)`.
pub fn penalized_loss(x: &DMatrix<f64>, y: &[f64], theta: &[f64], ridge: f64) -> f64 {
    let d = x.ncols();
    let loss: f64 = y
        .iter()
        .enumerate()
        .map(|(i, &yi)| {
            let z = linear_row(x, i, theta);
            softplus(z) - yi * z
        })
        .sum();
    loss + 0.5 * ridge * theta[..d].iter().map(|w| w * w).sum::<f64>()
}

fn linear_row(x: &DMatrix<f64>, i: usize, theta: &[f64]) -> f64 {
    let d = x.ncols();
    (0..d).map(|j| x[(i, j)] * theta[j]).sum::<f64>() + theta[d]
}

fn gradient_and_hessian(
    x: &DMatrix<f64>,
    y: &[f64],
    theta: &[f64],
    ridge: f64,
) -> (DVector<f64>, DMatrix<f64>) {
    let (n, d) = (x.nrows(), x.ncols());
    let mut grad = DVector::zeros(d + 1);
    let mut hess = DMatrix::zeros(d + 1, d + 1);
    let mut row = vec![1.0; d + 1];
    for i in 0..n {
        for j in 0..d {
            row[j] = x[(i, j)];
        }
        let p = sigmoid(linear_row(x, i, theta));
        let s = p * (1.0 - p);
        for a in 0..=d {
            grad[a] += (p - y[i]) * row[a];
            if s > 0.0 {
                for b in a..=d {
                    hess[(a, b)] += s * row[a] * row[b];
                }
            }
        }
    }
    for a in 0..=d {
        for b in 0..a {
            hess[(a, b)] = hess[(b, a)];
        }
    }
    for j in 0..d {
        grad[j] += ridge * theta[j];
        hess[(j, j)] += ridge;
    }
    (grad, hess)
}

/// Solves `H step = g`, adding growing diagonal jitter when `H` is not
/// numerically positive definite.
fn newton_direction(hess: &DMatrix<f64>, grad: &DVector<f64>) -> DVector<f64> {
    let scale = hess.diagonal().amax().max(1.0);
    let mut jitter = 0.0;
    for _ in 0..20 {
        let mut h = hess.clone();
        for i in 0..h.nrows() {
            h[(i, i)] += jitter;
        }
        if let Some(chol) = h.cholesky() {
            let step = chol.solve(grad);
            if step.iter().all(|v| v.is_finite()) {
                return step;
            }
        }
        jitter = if jitter == 0.0 { 1e-10 * scale } else { jitter * 10.0 };
    }
    // fall back to plain gradient descent
    grad.clone()
}

/// Fits weights and intercept on labels in `{0, 1}`.
pub fn fit_logistic(m: &EncodedMatrix, config: &LogisticConfig) -> Result<LogisticModel> {
    if !(config.ridge >= 0.0 && config.ridge.is_finite()) {
        return Err(Error::InvalidParameter(format!("ridge must be >= 0, got {}", config.ridge)));
    }
    if let Some(bad) = m.labels.iter().find(|&&y| y != 0.0 && y != 1.0) {
        return Err(Error::InvalidParameter(format!("logistic labels must be 0 or 1, got {bad}")));
    }
    if m.nrows() == 0 {
        return Err(Error::EmptyDataset);
    }
    if m.rows.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("logistic input matrix".into()));
    }
    let d = m.ncols();
    let mut theta = vec![0.0; d + 1];
    let mut loss = penalized_loss(&m.rows, &m.labels, &theta, config.ridge);
    let mut iterations = 0;
    let mut converged = false;
    while iterations < config.max_iter {
        let (grad, hess) = gradient_and_hessian(&m.rows, &m.labels, &theta, config.ridge);
        if grad.amax() <= config.tol {
            converged = true;
            break;
        }
        iterations += 1;
        let step = newton_direction(&hess, &grad);
        let slope = grad.dot(&step);
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..60 {
            let trial: Vec<f64> = theta.iter().zip(step.iter()).map(|(a, s)| a - t * s).collect();
            let trial_loss = penalized_loss(&m.rows, &m.labels, &trial, config.ridge);
            if trial_loss.is_finite() && trial_loss <= loss - 1e-4 * t * slope {
                theta = trial;
                loss = trial_loss;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            // no further decrease representable in floating point
            let (grad, _) = gradient_and_hessian(&m.rows, &m.labels, &theta, config.ridge);
            converged = grad.amax() <= config.tol;
            break;
        }
    }
    if !converged && iterations == config.max_iter {
        let (grad, _) = gradient_and_hessian(&m.rows, &m.labels, &theta, config.ridge);
        converged = grad.amax() <= config.tol;
    }
    if theta.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("logistic weights".into()));
    }
    let intercept = theta[d];
    theta.truncate(d);
    Ok(LogisticModel {
        weights: theta,
        intercept,
        ridge: config.ridge,
        iterations,
        converged,
    })
}
