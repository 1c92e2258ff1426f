//! Reference computations for the statistics routines, written with plain
//! loops and normal equations. Shared with the acceptance suite.

#![allow(dead_code, clippy::needless_range_loop)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ContinuousCDF, StudentsT};

pub struct Reference {
    pub estimate: f64,
    pub se: f64,
    pub t: f64,
    pub df: f64,
    pub p: f64,
}

fn two_sided(t: f64, df: f64) -> f64 {
    let dist = StudentsT::new(0.0, 1.0, df).unwrap();
    2.0 * (1.0 - dist.cdf(t.abs()))
}

pub fn t_crit(df: f64) -> f64 {
    StudentsT::new(0.0, 1.0, df).unwrap().inverse_cdf(0.975)
}

fn mean(x: &[f64]) -> f64 {
    let mut s = 0.0;
    for v in x {
        s += v;
    }
    s / x.len() as f64
}

fn ss(x: &[f64]) -> f64 {
    let m = mean(x);
    let mut s = 0.0;
    for v in x {
        s += (v - m) * (v - m);
    }
    s
}

pub fn paired(x: &[f64], y: &[f64]) -> Reference {
    let d: Vec<f64> = (0..x.len()).map(|i| x[i] - y[i]).collect();
    let n = d.len() as f64;
    let se = (ss(&d) / (n - 1.0)).sqrt() / n.sqrt();
    let t = mean(&d) / se;
    Reference { estimate: mean(&d), se, t, df: n - 1.0, p: two_sided(t, n - 1.0) }
}

pub fn welch(x: &[f64], y: &[f64]) -> Reference {
    let (nx, ny) = (x.len() as f64, y.len() as f64);
    let (a, b) = (ss(x) / (nx - 1.0) / nx, ss(y) / (ny - 1.0) / ny);
    let se = (a + b).sqrt();
    let df = (a + b) * (a + b) / (a * a / (nx - 1.0) + b * b / (ny - 1.0));
    let t = (mean(x) - mean(y)) / se;
    Reference { estimate: mean(x) - mean(y), se, t, df, p: two_sided(t, df) }
}

pub fn pearson(x: &[f64], y: &[f64]) -> Reference {
    let n = x.len() as f64;
    // Raw-moment formula, deliberately different from the centered one.
    let (mut sx, mut sy, mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for i in 0..x.len() {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        syy += y[i] * y[i];
        sxy += x[i] * y[i];
    }
    let r = (n * sxy - sx * sy) / ((n * sxx - sx * sx).sqrt() * (n * syy - sy * sy).sqrt());
    let t = r * ((n - 2.0) / (1.0 - r * r)).sqrt();
    Reference { estimate: r, se: ((1.0 - r * r) / (n - 2.0)).sqrt(), t, df: n - 2.0, p: two_sided(t, n - 2.0) }
}

/// Solves `a · x = b` by Gaussian elimination with partial pivoting.
pub fn gauss_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = b[i];
        for k in i + 1..n {
            s -= a[i][k] * x[k];
        }
        x[i] = s / a[i][i];
    }
    x
}

/// OLS with intercept via the normal equations. Returns one reference per
/// term, intercept first.
pub fn normal_equations(y: &[f64], columns: &[Vec<f64>]) -> Vec<Reference> {
    let n = y.len();
    let p = columns.len() + 1;
    let row = |i: usize| -> Vec<f64> { std::iter::once(1.0).chain(columns.iter().map(|c| c[i])).collect() };
    let mut xtx = vec![vec![0.0; p]; p];
    let mut xty = vec![0.0; p];
    for i in 0..n {
        let r = row(i);
        for a in 0..p {
            xty[a] += r[a] * y[i];
            for b in 0..p {
                xtx[a][b] += r[a] * r[b];
            }
        }
    }
    let beta = gauss_solve(xtx.clone(), xty);
    let mut rss = 0.0;
    for i in 0..n {
        let r = row(i);
        let fit: f64 = (0..p).map(|j| r[j] * beta[j]).sum();
        rss += (y[i] - fit).powi(2);
    }
    let df = (n - p) as f64;
    let sigma2 = rss / df;
    (0..p)
        .map(|j| {
            let mut e = vec![0.0; p];
            e[j] = 1.0;
            let inv_col = gauss_solve(xtx.clone(), e);
            let se = (inv_col[j] * sigma2).sqrt();
            let t = beta[j] / se;
            Reference { estimate: beta[j], se, t, df, p: two_sided(t, df) }
        })
        .collect()
}

/// Within-subject CI, computed cell by cell: per condition mean, half width.
pub fn within(scores: &[Vec<f64>]) -> Vec<(f64, f64)> {
    let n = scores.len();
    let c = scores[0].len();
    let mut grand = 0.0;
    for row in scores {
        for v in row {
            grand += v;
        }
    }
    grand /= (n * c) as f64;
    let mut out = Vec::new();
    for j in 0..c {
        let mut raw = Vec::new();
        let mut norm = Vec::new();
        for row in scores {
            let pm = row.iter().sum::<f64>() / c as f64;
            raw.push(row[j]);
            norm.push(row[j] - pm + grand);
        }
        let var = ss(&norm) / (n as f64 - 1.0);
        let corrected = var * c as f64 / (c as f64 - 1.0);
        out.push((mean(&raw), t_crit(n as f64 - 1.0) * (corrected / n as f64).sqrt()));
    }
    out
}

pub fn normal(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.random::<f64>().max(f64::MIN_POSITIVE);
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}
