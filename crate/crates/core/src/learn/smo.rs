//! Support vector machine trained by sequential minimal optimization.
//!
//! The solver follows Platt's two-loop scheme (alternate full and non-bound
//! scans, second choice by maximal `|E1 - E2|`). Because that scheme can stall
//! on a near-tie without certifying the KKT conditions, it is followed by a
//! maximal-violating-pair phase that stops only when the conditions hold
//! within `tol`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tabular::{ClassLabel, EncodedMatrix};

use super::sigmoid;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Kernel {
    Linear,
    /// `(x . z + coef)^degree`
    Polynomial { degree: u32, coef: f64 },
}

impl Kernel {
    pub fn eval(&self, a: &[f64], b: &[f64]) -> f64 {
        let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
        match *self {
            Kernel::Linear => dot,
            Kernel::Polynomial { degree, coef } => (dot + coef).powi(degree as i32),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SmoConfig {
    pub c: f64,
    pub kernel: Kernel,
    pub tol: f64,
    /// Cap on Platt-phase passes over the data.
    pub max_passes: usize,
}

impl Default for SmoConfig {
    fn default() -> Self {
        SmoConfig {
            c: 1.0,
            kernel: Kernel::Linear,
            tol: 1e-3,
            max_passes: 1000,
        }
    }
}

impl SmoConfig {
    fn validate(&self) -> Result<()> {
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(Error::InvalidParameter(format!("C must be positive, got {}", self.c)));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidParameter(format!("tol must be positive, got {}", self.tol)));
        }
        if let Kernel::Polynomial { degree, coef } = self.kernel {
            if degree == 0 || !coef.is_finite() {
                return Err(Error::InvalidParameter("polynomial kernel needs degree >= 1".into()));
            }
        }
        Ok(())
    }
}

/// A fitted SVM. `alphas` has one entry per training row; only rows with
/// positive alpha are kept as support vectors.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmoModel {
    pub alphas: Vec<f64>,
    pub bias: f64,
    pub support_rows: Vec<usize>,
    pub kernel: Kernel,
    pub c: f64,
    /// Feature vectors of `support_rows`.
    pub support_vectors: Vec<Vec<f64>>,
    /// `alpha_i * y_i` for each support vector.
    pub coefficients: Vec<f64>,
    /// Primal weights, present for the linear kernel.
    pub weights: Option<Vec<f64>>,
    /// Accepted pair updates.
    pub updates: usize,
}

impl SmoModel {
    /// `f(x) = sum_i alpha_i y_i K(x_i, x) + b`.
    pub fn decision(&self, x: &[f64]) -> f64 {
        match &self.weights {
            Some(w) => w.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() + self.bias,
            None => {
                self.support_vectors
                    .iter()
                    .zip(&self.coefficients)
                    .map(|(sv, c)| c * self.kernel.eval(sv, x))
                    .sum::<f64>()
                    + self.bias
            }
        }
    }

    /// `yes` iff `f(x) > 0`; the boundary itself is labelled `no`.
    pub fn predict(&self, x: &[f64]) -> ClassLabel {
        if self.decision(x) > 0.0 {
            ClassLabel::Yes
        } else {
            ClassLabel::No
        }
    }

    /// `sigma(2 f(x))`: a monotone squashing of the margin, not a calibrated
    /// probability.
    pub fn predict_proba(&self, x: &[f64]) -> f64 {
        sigmoid(2.0 * self.decision(x))
    }

    /// Dual objective `sum a - 1/2 sum_ij a_i a_j y_i y_j K_ij` on the
    /// training matrix.
    pub fn dual_objective(&self, m: &EncodedMatrix) -> f64 {
        dual_objective(&self.alphas, &m.labels, &gram(m, &self.kernel))
    }

    /// Largest KKT violation over the training rows, in units of `y f(x)`.
    pub fn kkt_violation(&self, m: &EncodedMatrix) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, &a) in self.alphas.iter().enumerate() {
            let yf = m.labels[i] * self.decision(&m.row(i));
            let v = if a <= 0.0 {
                1.0 - yf
            } else if a >= self.c {
                yf - 1.0
            } else {
                (yf - 1.0).abs()
            };
            worst = worst.max(v);
        }
        worst
    }
}

pub fn dual_objective(alphas: &[f64], y: &[f64], k: &[Vec<f64>]) -> f64 {
    let n = alphas.len();
    let mut quad = 0.0;
    for i in 0..n {
        if alphas[i] == 0.0 {
            continue;
        }
        for j in 0..n {
            quad += alphas[i] * alphas[j] * y[i] * y[j] * k[i][j];
        }
    }
    alphas.iter().sum::<f64>() - 0.5 * quad
}

fn gram(m: &EncodedMatrix, kernel: &Kernel) -> Vec<Vec<f64>> {
    let rows: Vec<Vec<f64>> = (0..m.nrows()).map(|i| m.row(i)).collect();
    let n = rows.len();
    let mut k = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i..n {
            let v = kernel.eval(&rows[i], &rows[j]);
            k[i][j] = v;
            k[j][i] = v;
        }
    }
    k
}

struct Solver<'a> {
    y: &'a [f64],
    k: Vec<Vec<f64>>,
    c: f64,
    tol: f64,
    alpha: Vec<f64>,
    /// `sum_j alpha_j y_j K_ij`, i.e. `f(x_i)` without the bias.
    f: Vec<f64>,
    b: f64,
    updates: usize,
    cursor: usize,
    /// Dual objective after each accepted update, when requested.
    trace: Option<Vec<f64>>,
}

/// Relative size below which a multiplier change counts as no progress.
const STEP_EPS: f64 = 1e-12;
/// Multipliers within this fraction of `C` of a bound are moved onto it.
const BOUND_EPS: f64 = 1e-12;

impl<'a> Solver<'a> {
    fn error(&self, i: usize) -> f64 {
        self.f[i] + self.b - self.y[i]
    }

    /// `sum a - 1/2 sum_i a_i y_i f_i`, using the cached `f`.
    fn objective(&self) -> f64 {
        let quad: f64 = (0..self.alpha.len())
            .map(|i| self.alpha[i] * self.y[i] * self.f[i])
            .sum();
        self.alpha.iter().sum::<f64>() - 0.5 * quad
    }

    fn is_free(&self, i: usize) -> bool {
        self.alpha[i] > 0.0 && self.alpha[i] < self.c
    }

    fn take_step(&mut self, i1: usize, i2: usize) -> bool {
        if i1 == i2 {
            return false;
        }
        let (a1, a2) = (self.alpha[i1], self.alpha[i2]);
        let (y1, y2) = (self.y[i1], self.y[i2]);
        let (e1, e2) = (self.error(i1), self.error(i2));
        let s = y1 * y2;
        let c = self.c;
        let (lo, hi) = if y1 != y2 {
            ((a2 - a1).max(0.0), (c + a2 - a1).min(c))
        } else {
            ((a1 + a2 - c).max(0.0), (a1 + a2).min(c))
        };
        if lo >= hi {
            return false;
        }
        let (k11, k12, k22) = (self.k[i1][i1], self.k[i1][i2], self.k[i2][i2]);
        let eta = k11 + k22 - 2.0 * k12;
        let mut a2_new = if eta > 0.0 {
            (a2 + y2 * (e1 - e2) / eta).clamp(lo, hi)
        } else {
            // objective is linear (or concave) along the segment: pick the
            // better endpoint
            let v1 = self.f[i1] - y1 * a1 * k11 - y2 * a2 * k12;
            let v2 = self.f[i2] - y1 * a1 * k12 - y2 * a2 * k22;
            let objective = |a2x: f64| {
                let a1x = a1 + s * (a2 - a2x);
                a1x + a2x
                    - 0.5 * k11 * a1x * a1x
                    - 0.5 * k22 * a2x * a2x
                    - s * k12 * a1x * a2x
                    - y1 * a1x * v1
                    - y2 * a2x * v2
            };
            let (obj_lo, obj_hi) = (objective(lo), objective(hi));
            if obj_lo > obj_hi + STEP_EPS {
                lo
            } else if obj_hi > obj_lo + STEP_EPS {
                hi
            } else {
                a2
            }
        };
        if (a2_new - a2).abs() < STEP_EPS * (a2_new + a2 + STEP_EPS) {
            return false;
        }
        let snap = |a: f64| {
            if a < BOUND_EPS * c {
                0.0
            } else if a > c * (1.0 - BOUND_EPS) {
                c
            } else {
                a
            }
        };
        a2_new = snap(a2_new);
        let mut a1_new = a1 + s * (a2 - a2_new);
        // keep sum alpha_i y_i exact under roundoff at the box edges
        let a1_snapped = snap(a1_new);
        if a1_snapped != a1_new {
            a2_new += s * (a1_new - a1_snapped);
            a1_new = a1_snapped;
        }
        a2_new = snap(a2_new.clamp(0.0, c));
        let (d1, d2) = (y1 * (a1_new - a1), y2 * (a2_new - a2));
        let b1 = self.b - e1 - d1 * k11 - d2 * k12;
        let b2 = self.b - e2 - d1 * k12 - d2 * k22;
        self.b = if a1_new > 0.0 && a1_new < c {
            b1
        } else if a2_new > 0.0 && a2_new < c {
            b2
        } else {
            0.5 * (b1 + b2)
        };
        for j in 0..self.f.len() {
            self.f[j] += d1 * self.k[i1][j] + d2 * self.k[i2][j];
        }
        self.alpha[i1] = a1_new;
        self.alpha[i2] = a2_new;
        self.updates += 1;
        if self.trace.is_some() {
            let w = self.objective();
            if let Some(t) = self.trace.as_mut() {
                t.push(w);
            }
        }
        true
    }

    fn examine(&mut self, i2: usize) -> bool {
        let n = self.alpha.len();
        let e2 = self.error(i2);
        let r2 = e2 * self.y[i2];
        let a2 = self.alpha[i2];
        if !((r2 < -self.tol && a2 < self.c) || (r2 > self.tol && a2 > 0.0)) {
            return false;
        }
        let free: Vec<usize> = (0..n).filter(|&i| self.is_free(i)).collect();
        if free.len() > 1 {
            let mut best = None;
            let mut gap = -1.0;
            for &i in &free {
                let g = (self.error(i) - e2).abs();
                if g > gap {
                    gap = g;
                    best = Some(i);
                }
            }
            if let Some(i1) = best {
                if self.take_step(i1, i2) {
                    return true;
                }
            }
        }
        // deterministic rotating start in place of a random one
        self.cursor = (self.cursor + 1) % n;
        let start = self.cursor;
        for off in 0..free.len() {
            let i1 = free[(start + off) % free.len()];
            if self.take_step(i1, i2) {
                return true;
            }
        }
        for off in 0..n {
            let i1 = (start + off) % n;
            if self.take_step(i1, i2) {
                return true;
            }
        }
        false
    }

    fn platt(&mut self, max_passes: usize) {
        let n = self.alpha.len();
        let mut examine_all = true;
        let mut changed = 0;
        let mut passes = 0;
        while (changed > 0 || examine_all) && passes < max_passes {
            changed = 0;
            for i in 0..n {
                if examine_all || self.is_free(i) {
                    changed += usize::from(self.examine(i));
                }
            }
            passes += 1;
            if examine_all {
                examine_all = false;
            } else if changed == 0 {
                examine_all = true;
            }
        }
    }

    /// Bounds on `b` implied by the KKT conditions: every `i` in the "up" set
    /// needs `b >= v_i` and every `i` in the "low" set needs `b <= v_i`, with
    /// `v_i = y_i - f_i`. Returns the maximal violating pair and the gap.
    fn violating_pair(&self) -> Option<(usize, usize, f64, f64)> {
        let mut up = (f64::NEG_INFINITY, usize::MAX);
        let mut low = (f64::INFINITY, usize::MAX);
        for i in 0..self.alpha.len() {
            let v = self.y[i] - self.f[i];
            let (pos, a) = (self.y[i] > 0.0, self.alpha[i]);
            let in_up = (pos && a < self.c) || (!pos && a > 0.0);
            let in_low = (pos && a > 0.0) || (!pos && a < self.c);
            if in_up && v > up.0 {
                up = (v, i);
            }
            if in_low && v < low.0 {
                low = (v, i);
            }
        }
        if up.1 == usize::MAX || low.1 == usize::MAX {
            return None;
        }
        Some((up.1, low.1, up.0, low.0))
    }

    fn polish(&mut self) {
        let limit = 100 * self.alpha.len() + 10_000;
        for _ in 0..limit {
            let Some((i, j, m, big_m)) = self.violating_pair() else {
                return;
            };
            if m - big_m <= self.tol || !self.take_step(i, j) {
                return;
            }
        }
    }

    fn settle_bias(&mut self) {
        let free: Vec<f64> = (0..self.alpha.len())
            .filter(|&i| self.is_free(i))
            .map(|i| self.y[i] - self.f[i])
            .collect();
        if !free.is_empty() {
            self.b = free.iter().sum::<f64>() / free.len() as f64;
        } else if let Some((_, _, m, big_m)) = self.violating_pair() {
            self.b = 0.5 * (m + big_m);
        }
    }
}

/// Trains a soft-margin SVM on labels in `{-1, +1}`.
pub fn fit_smo(m: &EncodedMatrix, config: &SmoConfig) -> Result<SmoModel> {
    solve(m, config, false).map(|(model, _)| model)
}

/// Like [`fit_smo`], also returning the dual objective after every accepted
/// pair update.
pub fn fit_smo_traced(m: &EncodedMatrix, config: &SmoConfig) -> Result<(SmoModel, Vec<f64>)> {
    solve(m, config, true).map(|(model, trace)| (model, trace.unwrap_or_default()))
}

fn solve(m: &EncodedMatrix, config: &SmoConfig, traced: bool) -> Result<(SmoModel, Option<Vec<f64>>)> {
    config.validate()?;
    let n = m.nrows();
    if let Some(bad) = m.labels.iter().find(|&&y| y != 1.0 && y != -1.0) {
        return Err(Error::InvalidParameter(format!("SMO labels must be -1 or +1, got {bad}")));
    }
    if n < 2 || m.labels.iter().all(|&y| y == m.labels[0]) {
        return Err(Error::SingleClass);
    }
    if m.rows.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("SMO input matrix".into()));
    }
    let mut solver = Solver {
        y: &m.labels,
        k: gram(m, &config.kernel),
        c: config.c,
        tol: config.tol,
        alpha: vec![0.0; n],
        f: vec![0.0; n],
        b: 0.0,
        updates: 0,
        cursor: 0,
        trace: traced.then(Vec::new),
    };
    solver.platt(config.max_passes);
    solver.polish();
    solver.settle_bias();

    let support_rows: Vec<usize> = (0..n).filter(|&i| solver.alpha[i] > 0.0).collect();
    let support_vectors: Vec<Vec<f64>> = support_rows.iter().map(|&i| m.row(i)).collect();
    let coefficients: Vec<f64> = support_rows
        .iter()
        .map(|&i| solver.alpha[i] * m.labels[i])
        .collect();
    let weights = match config.kernel {
        Kernel::Linear => {
            let mut w = vec![0.0; m.ncols()];
            for (sv, c) in support_vectors.iter().zip(&coefficients) {
                for (wj, xj) in w.iter_mut().zip(sv) {
                    *wj += c * xj;
                }
            }
            Some(w)
        }
        Kernel::Polynomial { .. } => None,
    };
    let trace = solver.trace.take();
    let model = SmoModel {
        alphas: solver.alpha,
        bias: solver.b,
        support_rows,
        kernel: config.kernel,
        c: config.c,
        support_vectors,
        coefficients,
        weights,
        updates: solver.updates,
    };
    Ok((model, trace))
}
