use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::wordstream::{is_eps_k_normal, Alphabet, DigitOrder};

/// Number of `m <= x` that are not `(eps, k)`-normal.
pub fn classify_range(eps: f64, k: usize, alphabet: Alphabet, order: DigitOrder, x: u64) -> u64 {
    classify_interval(eps, k, alphabet, order, 1, x)
}

/// Number of `m` in `[lo, hi]` that are not `(eps, k)`-normal.
pub fn classify_interval(eps: f64, k: usize, alphabet: Alphabet, order: DigitOrder, lo: u64, hi: u64) -> u64 {
    if hi < lo.max(1) {
        return 0;
    }
    (lo.max(1)..=hi).into_par_iter().filter(|&m| !is_eps_k_normal(m, eps, k, alphabet, order)).count() as u64
}

/// Cumulative non-normal counts at each checkpoint (which must increase strictly).
pub fn non_normal_census(
    eps: f64,
    k: usize,
    alphabet: Alphabet,
    order: DigitOrder,
    checkpoints: &[u64],
) -> Result<Vec<(u64, u64)>> {
    crate::experiments::validate_checkpoints(checkpoints)?;
    let mut total = 0u64;
    let mut prev = 0u64;
    let mut out = Vec::with_capacity(checkpoints.len());
    for &x in checkpoints {
        total += classify_interval(eps, k, alphabet, order, prev + 1, x);
        out.push((x, total));
        prev = x;
    }
    Ok(out)
}

/// Least-squares fit of `log(count) = delta * log(x) + c`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeagerFit {
    pub delta: f64,
    pub intercept: f64,
    /// `log(count) - fitted` at each point used.
    pub residuals: Vec<f64>,
    pub points_used: usize,
}

/// Fits the exponent `delta` of a census `#E ∩ [1, x] ≈ C x^delta`.
/// Points with a zero count are skipped.
pub fn fit_meager_exponent(census: &[(u64, u64)]) -> Result<MeagerFit> {
    let pts: Vec<(f64, f64)> =
        census.iter().filter(|&&(x, c)| c > 0 && x > 0).map(|&(x, c)| ((x as f64).ln(), (c as f64).ln())).collect();
    if pts.len() < 2 {
        return Err(Error::DegenerateInput(format!(
            "need at least two checkpoints with a positive count, got {}",
            pts.len()
        )));
    }
    let n = pts.len() as f64;
    let mean_x = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateInput("all checkpoints share the same x".into()));
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let delta = sxy / sxx;
    let intercept = mean_y - delta * mean_x;
    let residuals = pts.iter().map(|p| p.1 - (delta * p.0 + intercept)).collect();
    Ok(MeagerFit { delta, intercept, residuals, points_used: pts.len() })
}

/// Non-normal census at each checkpoint with its fitted growth exponent.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeagerReport {
    pub schema: u32,
    pub eps: f64,
    pub k: usize,
    pub g: u32,
    pub order: DigitOrder,
    pub rows: Vec<MeagerRow>,
    /// Absent when fewer than two checkpoints have a positive count.
    pub fit: Option<MeagerFit>,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeagerRow {
    pub x: u64,
    pub non_normal: u64,
    pub fraction: f64,
}

impl MeagerReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,non_normal,fraction\n");
        for r in &self.rows {
            out.push_str(&format!("{},{},{}\n", r.x, r.non_normal, r.fraction));
        }
        out
    }
}

pub fn meager_report(
    eps: f64,
    k: usize,
    alphabet: Alphabet,
    order: DigitOrder,
    checkpoints: &[u64],
) -> Result<MeagerReport> {
    let census = non_normal_census(eps, k, alphabet, order, checkpoints)?;
    let fit = fit_meager_exponent(&census).ok();
    Ok(MeagerReport {
        schema: crate::report::SCHEMA_VERSION,
        eps,
        k,
        g: alphabet.base(),
        order,
        rows: census.iter().map(|&(x, c)| MeagerRow { x, non_normal: c, fraction: c as f64 / x as f64 }).collect(),
        fit,
        note: crate::report::DETERMINISM_NOTE.to_string(),
    })
}
