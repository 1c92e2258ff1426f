//! Descriptive statistics, t-tests, correlation, OLS and within-subject
//! confidence intervals.

pub mod dist;
mod ols;
mod within;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use ols::{ols, OlsFit};
pub use within::{within_ci, Correction, WithinCI};

use dist::{t_quantile, t_two_sided_p, Z_975};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StatsError {
    #[error("need at least {needed} observations, got {got}")]
    SampleSize { needed: usize, got: usize },
    #[error("inputs differ in length: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("correlation undefined: zero variance in {0}")]
    ZeroVariance(&'static str),
    #[error("collinear predictors: {}", .0.join(", "))]
    Collinear(Vec<String>),
    #[error("incomplete design; missing cells for passages: {}", .0.join(", "))]
    IncompleteDesign(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatResult {
    /// Mean difference, r, or regression coefficient.
    pub estimate: f64,
    pub standardized: Option<f64>,
    pub se: f64,
    /// Signed: `estimate / se` (or the correlation t).
    pub t: f64,
    pub df: f64,
    pub p: f64,
    pub n: usize,
    pub ci95: (f64, f64),
    /// Set for degenerate cases such as zero-variance differences.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

pub fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

/// Sample variance (n − 1 denominator).
pub fn variance(x: &[f64]) -> f64 {
    let m = mean(x);
    x.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (x.len() as f64 - 1.0)
}

pub fn sd(x: &[f64]) -> f64 {
    variance(x).sqrt()
}

pub fn sem(x: &[f64]) -> f64 {
    sd(x) / (x.len() as f64).sqrt()
}

fn t_result(estimate: f64, se: f64, df: f64, n: usize) -> StatResult {
    let tq = t_quantile(0.975, df);
    if se == 0.0 {
        let (t, p, note) = if estimate == 0.0 {
            (0.0, 1.0, None)
        } else {
            (f64::INFINITY.copysign(estimate), 0.0, Some("zero variance; t is infinite".to_string()))
        };
        return StatResult { estimate, standardized: None, se, t, df, p, n, ci95: (estimate, estimate), note };
    }
    let t = estimate / se;
    StatResult {
        estimate,
        standardized: None,
        se,
        t,
        df,
        p: t_two_sided_p(t, df),
        n,
        ci95: (estimate - tq * se, estimate + tq * se),
        note: None,
    }
}

pub fn one_sample_t(x: &[f64], mu: f64) -> Result<StatResult, StatsError> {
    if x.len() < 2 {
        return Err(StatsError::SampleSize { needed: 2, got: x.len() });
    }
    Ok(t_result(mean(x) - mu, sem(x), x.len() as f64 - 1.0, x.len()))
}

/// Paired t on `d = x − y`, df = n − 1.
pub fn paired_t(x: &[f64], y: &[f64]) -> Result<StatResult, StatsError> {
    if x.len() != y.len() {
        return Err(StatsError::LengthMismatch(x.len(), y.len()));
    }
    let d: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
    one_sample_t(&d, 0.0)
}

/// Welch's unequal-variance two-sample t; estimate is `mean(x) − mean(y)`.
pub fn welch_t(x: &[f64], y: &[f64]) -> Result<StatResult, StatsError> {
    for s in [x, y] {
        if s.len() < 2 {
            return Err(StatsError::SampleSize { needed: 2, got: s.len() });
        }
    }
    let (nx, ny) = (x.len() as f64, y.len() as f64);
    let (vx, vy) = (variance(x) / nx, variance(y) / ny);
    let se = (vx + vy).sqrt();
    let df = if se == 0.0 { nx + ny - 2.0 } else { (vx + vy).powi(2) / (vx * vx / (nx - 1.0) + vy * vy / (ny - 1.0)) };
    Ok(t_result(mean(x) - mean(y), se, df, x.len() + y.len()))
}

/// Sample correlation with `t = r √((n−2)/(1−r²))` and a Fisher-z CI.
pub fn pearson_r(x: &[f64], y: &[f64]) -> Result<StatResult, StatsError> {
    if x.len() != y.len() {
        return Err(StatsError::LengthMismatch(x.len(), y.len()));
    }
    let n = x.len();
    if n < 3 {
        return Err(StatsError::SampleSize { needed: 3, got: n });
    }
    let (mx, my) = (mean(x), mean(y));
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    let syy: f64 = y.iter().map(|v| (v - my) * (v - my)).sum();
    if sxx == 0.0 {
        return Err(StatsError::ZeroVariance("x"));
    }
    if syy == 0.0 {
        return Err(StatsError::ZeroVariance("y"));
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let r = (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0);
    let df = n as f64 - 2.0;
    let (t, p) = if r.abs() == 1.0 {
        (f64::INFINITY.copysign(r), 0.0)
    } else {
        let t = r * (df / (1.0 - r * r)).sqrt();
        (t, t_two_sided_p(t, df))
    };
    let ci95 = if n > 3 {
        let z = r.atanh();
        let h = Z_975 / (n as f64 - 3.0).sqrt();
        ((z - h).tanh(), (z + h).tanh())
    } else {
        (-1.0, 1.0)
    };
    let se = ((1.0 - r * r) / df).sqrt();
    Ok(StatResult { estimate: r, standardized: Some(r), se, t, df, p, n, ci95, note: None })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignTest {
    pub positive: usize,
    pub negative: usize,
    pub ties: usize,
    /// `P(#positive ≥ observed)` under p = 1/2, ties dropped.
    pub p_greater: f64,
    pub p_two_sided: f64,
}

/// Exact binomial sign test on paired differences.
pub fn sign_test(diffs: &[f64]) -> SignTest {
    let positive = diffs.iter().filter(|d| **d > 0.0).count();
    let negative = diffs.iter().filter(|d| **d < 0.0).count();
    let ties = diffs.len() - positive - negative;
    let n = (positive + negative) as u64;
    let p_greater = dist::binom_half_upper(n, positive as u64);
    let p_less = dist::binom_half_upper(n, negative as u64);
    SignTest { positive, negative, ties, p_greater, p_two_sided: (2.0 * p_greater.min(p_less)).min(1.0) }
}
