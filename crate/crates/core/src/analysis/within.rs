use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::dist::t_quantile;
use super::{mean, sd, StatsError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Correction {
    Morey,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WithinCI {
    pub conditions: Vec<String>,
    pub condition_means: BTreeMap<String, f64>,
    pub half_widths: BTreeMap<String, f64>,
    /// Passage-normalized scores before the correction factor.
    pub normalized: Vec<Vec<f64>>,
    pub correction: Correction,
    pub n_passages: usize,
}

/// Cousineau normalization (subtract each passage's mean, add the grand
/// mean), then `t(.975, n−1) · sd / √n · √(C/(C−1))` per condition.
///
/// `rows` are `(passage_id, scores)` with one score per condition.
pub fn within_ci(rows: &[(String, Vec<Option<f64>>)], conditions: &[String]) -> Result<WithinCI, StatsError> {
    let c = conditions.len();
    let incomplete: Vec<String> = rows
        .iter()
        .filter(|(_, s)| s.len() != c || s.iter().any(|v| v.is_none_or(|x| !x.is_finite())))
        .map(|(id, _)| id.clone())
        .collect();
    if !incomplete.is_empty() {
        return Err(StatsError::IncompleteDesign(incomplete));
    }
    if c < 2 {
        return Err(StatsError::SampleSize { needed: 2, got: c });
    }
    let n = rows.len();
    if n < 2 {
        return Err(StatsError::SampleSize { needed: 2, got: n });
    }
    let scores: Vec<Vec<f64>> = rows.iter().map(|(_, s)| s.iter().map(|v| v.unwrap()).collect()).collect();
    let grand = scores.iter().flatten().sum::<f64>() / (n * c) as f64;
    let normalized: Vec<Vec<f64>> = scores
        .iter()
        .map(|row| {
            let m = mean(row);
            row.iter().map(|v| v - m + grand).collect()
        })
        .collect();
    let morey = (c as f64 / (c as f64 - 1.0)).sqrt();
    let tq = t_quantile(0.975, n as f64 - 1.0);
    let mut condition_means = BTreeMap::new();
    let mut half_widths = BTreeMap::new();
    for (j, name) in conditions.iter().enumerate() {
        let raw: Vec<f64> = scores.iter().map(|r| r[j]).collect();
        let col: Vec<f64> = normalized.iter().map(|r| r[j]).collect();
        condition_means.insert(name.clone(), mean(&raw));
        half_widths.insert(name.clone(), tq * sd(&col) / (n as f64).sqrt() * morey);
    }
    Ok(WithinCI {
        conditions: conditions.to_vec(),
        condition_means,
        half_widths,
        normalized,
        correction: Correction::Morey,
        n_passages: n,
    })
}
