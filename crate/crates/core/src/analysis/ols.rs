use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::dist::{t_quantile, t_two_sided_p};
use super::{mean, sd, StatResult, StatsError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OlsFit {
    /// `"intercept"` followed by the predictor names.
    pub terms: Vec<String>,
    pub coefficients: Vec<StatResult>,
    pub fitted: Vec<f64>,
    pub residuals: Vec<f64>,
    pub r_squared: f64,
    pub standardized: bool,
}

impl OlsFit {
    pub fn coefficient(&self, term: &str) -> Option<&StatResult> {
        self.terms.iter().position(|t| t == term).map(|i| &self.coefficients[i])
    }
}

fn zscore(x: &[f64]) -> Vec<f64> {
    let (m, s) = (mean(x), sd(x));
    x.iter().map(|v| (v - m) / s).collect()
}

/// Least squares with an intercept, solved by Householder QR.
///
/// `columns[j]` holds predictor `j`. With `standardize`, the outcome and
/// every predictor are z-scored first so slopes are β; otherwise β is still
/// reported in `standardized` as `b · sd(x) / sd(y)`.
pub fn ols(y: &[f64], columns: &[Vec<f64>], names: &[&str], standardize: bool) -> Result<OlsFit, StatsError> {
    let n = y.len();
    let k = columns.len();
    for c in columns {
        if c.len() != n {
            return Err(StatsError::LengthMismatch(c.len(), n));
        }
    }
    if n <= k + 1 {
        return Err(StatsError::SampleSize { needed: k + 2, got: n });
    }
    let mut terms = vec!["intercept".to_string()];
    terms.extend((0..k).map(|j| names.get(j).map(|s| s.to_string()).unwrap_or_else(|| format!("x{}", j + 1))));

    let constant: Vec<String> = (0..k).filter(|&j| sd(&columns[j]) == 0.0).map(|j| terms[j + 1].clone()).collect();
    if !constant.is_empty() {
        let mut named = vec!["intercept".to_string()];
        named.extend(constant);
        return Err(StatsError::Collinear(named));
    }
    let (yv, cols): (Vec<f64>, Vec<Vec<f64>>) = if standardize {
        (zscore(y), columns.iter().map(|c| zscore(c)).collect())
    } else {
        (y.to_vec(), columns.to_vec())
    };

    let p = k + 1;
    let x = DMatrix::from_fn(n, p, |i, j| if j == 0 { 1.0 } else { cols[j - 1][i] });
    let qr = x.clone().qr();
    let r = qr.r();
    let scale = (0..p).map(|j| x.column(j).norm()).fold(0.0, f64::max);
    let dependent: Vec<String> =
        (0..p).filter(|&j| r[(j, j)].abs() <= 1e-10 * scale.max(1.0)).map(|j| terms[j].clone()).collect();
    if !dependent.is_empty() {
        return Err(StatsError::Collinear(dependent));
    }
    let yvec = DVector::from_column_slice(&yv);
    let qty = qr.q().transpose() * &yvec;
    let b = r.solve_upper_triangular(&qty).expect("full rank");
    let fitted = &x * &b;
    let resid = &yvec - &fitted;
    let rss = resid.norm_squared();
    let df = (n - p) as f64;
    let sigma2 = rss / df;
    let r_inv = r.solve_upper_triangular(&DMatrix::identity(p, p)).expect("full rank");
    let cov_diag: Vec<f64> = (0..p).map(|j| r_inv.row(j).norm_squared() * sigma2).collect();
    let ym = mean(&yv);
    let tss: f64 = yv.iter().map(|v| (v - ym) * (v - ym)).sum();
    let tq = t_quantile(0.975, df);
    let sd_y = sd(y);

    let coefficients = (0..p)
        .map(|j| {
            let est = b[j];
            let se = cov_diag[j].sqrt();
            let (t, pv) = if se == 0.0 {
                (if est == 0.0 { 0.0 } else { f64::INFINITY.copysign(est) }, if est == 0.0 { 1.0 } else { 0.0 })
            } else {
                (est / se, t_two_sided_p(est / se, df))
            };
            let standardized = match (j, standardize) {
                (0, _) => None,
                (_, true) => Some(est),
                (_, false) => Some(est * sd(&columns[j - 1]) / sd_y),
            };
            StatResult {
                estimate: est,
                standardized,
                se,
                t,
                df,
                p: pv,
                n,
                ci95: (est - tq * se, est + tq * se),
                note: None,
            }
        })
        .collect();
    Ok(OlsFit {
        terms,
        coefficients,
        fitted: fitted.iter().copied().collect(),
        residuals: resid.iter().copied().collect(),
        r_squared: if tss == 0.0 { 1.0 } else { 1.0 - rss / tss },
        standardized: standardize,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::pearson_r;

    #[test]
    fn exact_line() {
        let x: Vec<f64> = (0..10).map(f64::from).collect();
        let y: Vec<f64> = x.iter().map(|v| 3.0 - 2.5 * v).collect();
        let fit = ols(&y, &[x], &["x"], false).unwrap();
        assert!((fit.coefficients[1].estimate + 2.5).abs() < 1e-12);
        assert!((fit.coefficients[0].estimate - 3.0).abs() < 1e-12);
        assert!(fit.residuals.iter().all(|r| r.abs() < 1e-12));
    }

    #[test]
    fn standardized_slope_is_r() {
        let x = vec![1.0, 2.0, 4.0, 3.0, 7.0, 5.0];
        let y = vec![2.0, 1.5, 3.0, 5.0, 6.5, 4.0];
        let fit = ols(&y, std::slice::from_ref(&x), &[], true).unwrap();
        let r = pearson_r(&x, &y).unwrap();
        assert!((fit.coefficients[1].estimate - r.estimate).abs() < 1e-12);
        assert!((fit.coefficients[1].t - r.t).abs() < 1e-9);
        assert_eq!(fit.terms, ["intercept", "x1"]);
    }

    #[test]
    fn collinearity_is_named() {
        let a = vec![1.0, 2.0, 3.0, 4.0, 5.0];
        let b: Vec<f64> = a.iter().map(|v| 2.0 * v + 1.0).collect();
        let y = vec![1.0, 0.0, 2.0, 1.0, 3.0];
        match ols(&y, &[a.clone(), b], &["freq", "freq2"], false) {
            Err(StatsError::Collinear(cols)) => assert_eq!(cols, ["freq2"]),
            other => panic!("{other:?}"),
        }
        match ols(&y, &[a, vec![2.0; 5]], &["freq", "const"], false) {
            Err(StatsError::Collinear(cols)) => assert_eq!(cols, ["intercept", "const"]),
            other => panic!("{other:?}"),
        }
    }
}
