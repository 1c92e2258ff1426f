#[path = "support/oracles.rs"]
mod oracles;

use jabberwock_core::analysis::dist::t_two_sided_p;
use jabberwock_core::analysis::{ols, paired_t, pearson_r, sign_test, welch_t, within_ci, StatResult, StatsError};
use oracles::{close, normal, rng, Reference};
use proptest::prelude::*;

const TOL: f64 = 1e-9;

fn assert_matches(got: &StatResult, want: &Reference, what: &str) {
    assert!(close(got.estimate, want.estimate, TOL), "{what} estimate {} vs {}", got.estimate, want.estimate);
    assert!(close(got.se, want.se, TOL), "{what} se {} vs {}", got.se, want.se);
    assert!(close(got.t, want.t, TOL), "{what} t {} vs {}", got.t, want.t);
    assert!(close(got.df, want.df, TOL), "{what} df {} vs {}", got.df, want.df);
    assert!((got.p - want.p).abs() <= TOL, "{what} p {} vs {}", got.p, want.p);
}

fn sample(seed: u64, n: usize, mu: f64, sigma: f64) -> Vec<f64> {
    let mut r = rng(seed);
    (0..n).map(|_| mu + sigma * normal(&mut r)).collect()
}

#[test]
fn paired_t_matches_reference() {
    for seed in 0..5 {
        let x = sample(seed, 30, 0.6, 0.15);
        let y = sample(seed + 100, 30, 0.45, 0.1);
        assert_matches(&paired_t(&x, &y).unwrap(), &oracles::paired(&x, &y), "paired");
    }
}

#[test]
fn paired_t_hand_values() {
    let r = paired_t(&[1.0, 2.0, 3.0], &[0.0, 0.0, 0.0]).unwrap();
    assert!((r.t - 2.0 * 3f64.sqrt()).abs() < 1e-12);
    assert_eq!(r.df, 2.0);
    let same = paired_t(&[0.3, 0.5, 0.9], &[0.3, 0.5, 0.9]).unwrap();
    assert_eq!((same.t, same.p), (0.0, 1.0));
    assert!(matches!(paired_t(&[1.0], &[2.0]), Err(StatsError::SampleSize { .. })));
}

#[test]
fn welch_t_matches_reference() {
    for seed in 0..5 {
        let x = sample(seed, 30, 0.5, 0.1);
        let y = sample(seed + 7, 45, 0.55, 0.2);
        assert_matches(&welch_t(&x, &y).unwrap(), &oracles::welch(&x, &y), "welch");
    }
}

#[test]
fn pearson_r_matches_reference() {
    let r = pearson_r(&[1.0, 2.0, 3.0, 4.0], &[2.0, 1.0, 4.0, 3.0]).unwrap();
    assert!((r.estimate - 0.6).abs() < 1e-12);
    for seed in 0..5 {
        let x = sample(seed, 50, 4.0, 1.0);
        let noise = sample(seed + 1, 50, 0.0, 1.0);
        let y: Vec<f64> = x.iter().zip(&noise).map(|(a, e)| 0.3 * a + e).collect();
        assert_matches(&pearson_r(&x, &y).unwrap(), &oracles::pearson(&x, &y), "pearson");
    }
}

fn design(seed: u64, n: usize) -> (Vec<f64>, Vec<Vec<f64>>) {
    let cols: Vec<Vec<f64>> = (0..3).map(|j| sample(seed * 10 + j, n, j as f64, 1.0 + j as f64)).collect();
    let e = sample(seed * 10 + 9, n, 0.0, 0.5);
    let y = (0..n).map(|i| 1.5 + 0.7 * cols[0][i] - 0.2 * cols[1][i] + 0.05 * cols[2][i] + e[i]).collect();
    (y, cols)
}

#[test]
fn ols_matches_normal_equations() {
    for seed in 0..5 {
        let (y, cols) = design(seed, 50);
        let fit = ols(&y, &cols, &["a", "b", "c"], false).unwrap();
        let want = oracles::normal_equations(&y, &cols);
        for (j, (got, want)) in fit.coefficients.iter().zip(&want).enumerate() {
            assert_matches(got, want, &format!("ols term {j}"));
        }
        // Residuals are orthogonal to every column of the design.
        let sum: f64 = fit.residuals.iter().sum();
        assert!(sum.abs() < 1e-9);
        for c in &cols {
            let dot: f64 = c.iter().zip(&fit.residuals).map(|(a, r)| a * r).sum();
            assert!(dot.abs() < 1e-9, "{dot}");
        }
    }
}

#[test]
fn standardized_single_predictor_is_r() {
    let (y, cols) = design(3, 40);
    let fit = ols(&y, &cols[..1], &["a"], true).unwrap();
    let r = pearson_r(&cols[0], &y).unwrap().estimate;
    assert!((fit.coefficient("a").unwrap().estimate - r).abs() < 1e-12);
    let raw = ols(&y, &cols[..1], &["a"], false).unwrap();
    assert!((raw.coefficient("a").unwrap().standardized.unwrap() - r).abs() < 1e-12);
}

#[test]
fn exact_line_and_collinearity() {
    let x: Vec<f64> = (0..10).map(f64::from).collect();
    let y: Vec<f64> = x.iter().map(|v| 2.0 + 3.0 * v).collect();
    let fit = ols(&y, std::slice::from_ref(&x), &["x"], false).unwrap();
    assert!((fit.coefficient("x").unwrap().estimate - 3.0).abs() < 1e-12);
    assert!(fit.residuals.iter().all(|r| r.abs() < 1e-12));
    let doubled: Vec<f64> = x.iter().map(|v| 2.0 * v).collect();
    match ols(&y, &[x, doubled], &["x", "x2"], false) {
        Err(StatsError::Collinear(names)) => assert!(names.contains(&"x2".to_string())),
        other => panic!("{other:?}"),
    }
}

#[test]
fn within_ci_matches_scripted_computation() {
    let conditions: Vec<String> = ["standard", "no_modals", "no_verbs_preps", "lowercase_no_numbers", "no_punct", "blanks"]
        .map(String::from)
        .to_vec();
    for seed in 0..3 {
        let passage_effect = sample(seed, 50, 0.5, 0.15);
        let scores: Vec<Vec<f64>> = passage_effect
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let e = sample(seed * 1000 + i as u64, 6, 0.0, 0.05);
                (0..6).map(|j| p - 0.03 * j as f64 + e[j]).collect()
            })
            .collect();
        let rows: Vec<(String, Vec<Option<f64>>)> =
            scores.iter().enumerate().map(|(i, r)| (format!("p{i:02}"), r.iter().map(|v| Some(*v)).collect())).collect();
        let got = within_ci(&rows, &conditions).unwrap();
        let want = oracles::within(&scores);
        for (c, (m, h)) in conditions.iter().zip(want) {
            assert!(close(got.condition_means[c], m, TOL), "{c} mean");
            assert!(close(got.half_widths[c], h, TOL), "{c} half width {} vs {h}", got.half_widths[c]);
        }
    }
}

#[test]
fn p_values_behave() {
    assert_eq!(t_two_sided_p(0.0, 5.0), 1.0);
    let mut last = 1.0;
    for k in 1..200 {
        let p = t_two_sided_p(k as f64 * 0.25, 7.0);
        assert!(p < last && (0.0..=1.0).contains(&p));
        last = p;
    }
}

#[test]
fn sign_test_counts() {
    let s = sign_test(&[1.0, 2.0, 0.5, -1.0, 0.0, 3.0, 4.0, 5.0, 6.0, 7.0]);
    assert_eq!((s.positive, s.negative, s.ties), (8, 1, 1));
    // P(X ≥ 8 | n = 9, p = ½) = (9 + 1) / 512
    assert!((s.p_greater - 10.0 / 512.0).abs() < 1e-15);
}

fn dyadic() -> impl Strategy<Value = f64> {
    (-4096i32..4096).prop_map(|k| f64::from(k) / 64.0)
}

proptest! {
    #[test]
    fn paired_t_is_shift_invariant(
        xy in prop::collection::vec((dyadic(), dyadic()), 3..30),
        c in dyadic(),
    ) {
        let (x, y): (Vec<f64>, Vec<f64>) = xy.into_iter().unzip();
        let xs: Vec<f64> = x.iter().map(|v| v + c).collect();
        let ys: Vec<f64> = y.iter().map(|v| v + c).collect();
        prop_assert_eq!(paired_t(&x, &y).unwrap(), paired_t(&xs, &ys).unwrap());
    }

    #[test]
    fn pearson_is_affine_invariant(
        xy in prop::collection::vec((-100.0f64..100.0, -100.0f64..100.0), 4..40),
        a in 0.1f64..10.0, b in -50.0f64..50.0,
    ) {
        let (x, y): (Vec<f64>, Vec<f64>) = xy.into_iter().unzip();
        if let Ok(r) = pearson_r(&x, &y) {
            let xt: Vec<f64> = x.iter().map(|v| a * v + b).collect();
            let r2 = pearson_r(&xt, &y).unwrap();
            prop_assert!((r.estimate - r2.estimate).abs() < 1e-9);
        }
    }
}
