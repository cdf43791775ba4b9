//! Pearson correlation with two-tailed p-values, Shannon entropy and the
//! chi-squared independence statistic.

use std::f64::consts::PI;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::screening::Role;
use crate::tabular::{Dataset, Value};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Γ(x)` for `x > 0` (Lanczos, g = 7).
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // reflection
        return (PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

/// Regularized incomplete beta `I_x(a, b)`, via the continued fraction with
/// the symmetry swap for fast convergence.
pub fn regularized_incomplete_beta(x: f64, a: f64, b: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let ln_front = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * x.ln() + b * (1.0 - x).ln();
    let front = ln_front.exp();
    if x < (a + 1.0) / (a + b + 2.0) {
        front * beta_continued_fraction(x, a, b) / a
    } else {
        1.0 - front * beta_continued_fraction(1.0 - x, b, a) / b
    }
}

// Modified Lentz evaluation.
fn beta_continued_fraction(x: f64, a: f64, b: f64) -> f64 {
    const TINY: f64 = 1e-300;
    const EPS: f64 = 1e-16;
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=500 {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

/// `P(|T| >= |t|)` for Student's t with `df` degrees of freedom.
pub fn student_t_two_tailed(t: f64, df: f64) -> f64 {
    if !t.is_finite() {
        return 0.0;
    }
    regularized_incomplete_beta(df / (df + t * t), df / 2.0, 0.5).clamp(0.0, 1.0)
}

/// One Pearson test: coefficient, two-tailed p-value and sample size.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CorrelationResult {
    pub r: f64,
    pub p: f64,
    pub n: usize,
}

fn check_pair(x: &[f64], y: &[f64], min_len: usize) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < min_len {
        return Err(Error::TooFewSamples {
            needed: min_len,
            got: x.len(),
        });
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("correlation input".into()));
    }
    Ok(())
}

/// Product-moment coefficient alone; needs only two points.
pub fn pearson_r(x: &[f64], y: &[f64]) -> Result<f64> {
    check_pair(x, y, 2)?;
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(Error::ConstantInput("first vector".into()));
    }
    if syy == 0.0 {
        return Err(Error::ConstantInput("second vector".into()));
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Pearson correlation with the two-tailed p-value of
/// `t = r * sqrt((n - 2) / (1 - r^2))` under Student's t with `n - 2` degrees
/// of freedom.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<CorrelationResult> {
    check_pair(x, y, 3)?;
    let r = pearson_r(x, y)?;
    let df = (x.len() - 2) as f64;
    // I_{df/(df+t^2)} with df/(df+t^2) = 1 - r^2
    let p = regularized_incomplete_beta(1.0 - r * r, df / 2.0, 0.5).clamp(0.0, 1.0);
    Ok(CorrelationResult { r, p, n: x.len() })
}

/// Shannon entropy in bits, with `0 log 0 = 0`.
pub fn entropy(counts: &[usize]) -> Result<f64> {
    let total: usize = counts.iter().sum();
    if total == 0 {
        return Err(Error::ZeroCounts);
    }
    let total = total as f64;
    Ok(counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / total;
            -p * p.log2()
        })
        .sum())
}

/// Pearson chi-squared statistic of a two-way contingency table against the
/// independence model.
pub fn chi_squared(table: &[Vec<usize>]) -> Result<f64> {
    let cols = table.first().map_or(0, Vec::len);
    if table.is_empty() || cols == 0 {
        return Err(Error::ZeroMarginal);
    }
    if let Some(row) = table.iter().find(|r| r.len() != cols) {
        return Err(Error::LengthMismatch {
            left: cols,
            right: row.len(),
        });
    }
    let row_sums: Vec<f64> = table.iter().map(|r| r.iter().sum::<usize>() as f64).collect();
    let col_sums: Vec<f64> = (0..cols)
        .map(|j| table.iter().map(|r| r[j]).sum::<usize>() as f64)
        .collect();
    if row_sums.iter().chain(&col_sums).any(|&s| s == 0.0) {
        return Err(Error::ZeroMarginal);
    }
    let total: f64 = row_sums.iter().sum();
    let mut stat = 0.0;
    for (row, rs) in table.iter().zip(&row_sums) {
        for (&observed, cs) in row.iter().zip(&col_sums) {
            let expected = rs * cs / total;
            let diff = observed as f64 - expected;
            stat += diff * diff / expected;
        }
    }
    Ok(stat)
}

/// Strength legend for a demographic-vs-class correlation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Strength {
    /// `p >= .05`
    NoSignificant,
    /// significant, `|r| <= .25`
    Negligible,
    /// significant, `|r| > .25`
    NonNegligible,
}

impl Strength {
    pub fn classify(r: f64, p: f64) -> Self {
        if p >= 0.05 {
            Strength::NoSignificant
        } else if r.abs() <= 0.25 {
            Strength::Negligible
        } else {
            Strength::NonNegligible
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Strength::NoSignificant => "no significant",
            Strength::Negligible => "negligible",
            Strength::NonNegligible => "non-negligible",
        }
    }
}

impl fmt::Display for Strength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorrelationRow {
    pub variable: &'static str,
    pub result: CorrelationResult,
    pub strength: Strength,
}

/// Integer coding of a nominal column: yes/no columns become 0/1 regardless
/// of declared order, anything else uses the declared category index.
fn coded_column(data: &Dataset, col: usize) -> Result<Vec<f64>> {
    let attr = &data.schema()[col];
    let yes = (0..attr.level_count()).find(|&i| {
        attr.level_name(i)
            .is_some_and(|n| n.eq_ignore_ascii_case("yes"))
    });
    let yes_no = attr.level_count() == 2 && yes.is_some();
    data.records()
        .iter()
        .enumerate()
        .map(|(row, r)| match r.values[col] {
            Value::Missing => Err(Error::MissingValue {
                attribute: attr.name.clone(),
                record: row,
            }),
            Value::Nominal(i) if yes_no => Ok(f64::from(Some(i) == yes)),
            v => Ok(v.as_f64().unwrap_or_default()),
        })
        .collect()
}

/// Jaundice, family history and ethnicity each correlated with the class.
/// Variables absent from the schema are skipped.
pub fn correlation_table(data: &Dataset) -> Result<Vec<CorrelationRow>> {
    let class = coded_column(data, data.class_index()?)?;
    let variables = [
        ("Jaundice", Role::Jaundice),
        ("Family_ASD", Role::FamilyAsd),
        ("Ethnicity", Role::Ethnicity),
    ];
    let mut rows = Vec::new();
    for (variable, role) in variables {
        let Some(col) = role.locate(data.schema()) else {
            continue;
        };
        let x = coded_column(data, col)?;
        let result = pearson(&x, &class)?;
        rows.push(CorrelationRow {
            variable,
            result,
            strength: Strength::classify(result.r, result.p),
        });
    }
    Ok(rows)
}
