//! Desk-scale experiments: exact censuses of the exceptional sets the
//! normality argument needs to be small, printed next to the closed-form
//! bounds they are compared against.

mod census;
mod extremal;
mod growth;
mod lemmas;
mod repetition;

pub use census::{CensusReport, CensusRow};
pub use extremal::{extremal_ratio_report, ExtremalReport, EULER_GAMMA};
pub use growth::{growth_hypothesis_check, GrowthReport, GrowthRow};
pub use lemmas::{
    divisor_preimage_census, lemma_fps_census, omega_tail_census, restricted_domain_density, small_value_census,
    thin_preimage_census, ThinSetSpec,
};
pub use repetition::{non_normality_demo, RepetitionReport};

use rayon::prelude::*;

use crate::error::{Error, Result};

const CHUNK: u64 = 1 << 14;

/// `log x = max(1, ln x)`.
pub fn log1(x: f64) -> f64 {
    if x > 0.0 {
        x.ln().max(1.0)
    } else {
        1.0
    }
}

/// `log_k x`: `log1` applied `k` times (always at least 1).
pub fn iterated_log(x: f64, k: usize) -> f64 {
    (0..k).fold(x, |acc, _| log1(acc))
}

/// `x / exp((log x)^theta)`, the thin-set envelope.
pub fn thin_bound(x: u64, theta: f64) -> f64 {
    x as f64 / log1(x as f64).powf(theta).exp()
}

/// Powers of ten from `10^2` up to `limit`, plus `limit` itself when it is
/// not a power of ten.
pub fn default_checkpoints(limit: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut x = 100u64;
    while x <= limit {
        out.push(x);
        match x.checked_mul(10) {
            Some(next) => x = next,
            None => break,
        }
    }
    if out.last() != Some(&limit) && limit >= 1 {
        out.push(limit);
    }
    out
}

pub fn validate_checkpoints(checkpoints: &[u64]) -> Result<()> {
    if checkpoints.is_empty() {
        return Err(Error::InvalidInput("at least one checkpoint is required".into()));
    }
    if checkpoints[0] == 0 || checkpoints.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput("checkpoints must be positive and strictly increasing".into()));
    }
    Ok(())
}

/// Cumulative counts of `n <= x` satisfying `pred`, one per checkpoint.
/// Work is split into fixed chunks, so the result is independent of the
/// number of worker threads.
pub(crate) fn cumulative_counts<P>(checkpoints: &[u64], pred: P) -> Result<Vec<u64>>
where
    P: Fn(u64) -> Result<bool> + Sync,
{
    validate_checkpoints(checkpoints)?;
    let mut jobs = Vec::new();
    let mut prev = 0u64;
    for (slot, &x) in checkpoints.iter().enumerate() {
        let mut lo = prev + 1;
        while lo <= x {
            let hi = (lo + CHUNK - 1).min(x);
            jobs.push((slot, lo, hi));
            lo = hi + 1;
        }
        prev = x;
    }
    let partial: Vec<(usize, u64)> = jobs
        .par_iter()
        .map(|&(slot, lo, hi)| {
            let mut c = 0u64;
            for n in lo..=hi {
                if pred(n)? {
                    c += 1;
                }
            }
            Ok((slot, c))
        })
        .collect::<Result<_>>()?;
    let mut per_slot = vec![0u64; checkpoints.len()];
    for (slot, c) in partial {
        per_slot[slot] += c;
    }
    let mut running = 0;
    Ok(per_slot
        .into_iter()
        .map(|c| {
            running += c;
            running
        })
        .collect())
}

/// Runs `job` over `[1, max]` in fixed chunks and returns the per-chunk
/// outputs in order.
pub(crate) fn chunked<T, J>(max: u64, job: J) -> Result<Vec<T>>
where
    T: Send,
    J: Fn(u64, u64) -> Result<T> + Sync,
{
    let ranges: Vec<(u64, u64)> =
        (0..max.div_ceil(CHUNK)).map(|i| (i * CHUNK + 1, ((i + 1) * CHUNK).min(max))).collect();
    ranges.par_iter().map(|&(lo, hi)| job(lo, hi)).collect()
}
