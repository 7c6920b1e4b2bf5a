use serde::{Deserialize, Serialize};

use crate::arith::{phi, sigma, Arith, Factorize};
use crate::error::{Error, Result};
use crate::experiments::{chunked, iterated_log};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Extremes of `phi(m) log_2 m / m` and `sigma(m) / (m log_2 m)` over
/// `2 <= m <= x`, where `log_2` is the floored double logarithm.
///
/// The limits `e^-gamma` and `e^gamma` are printed for comparison only;
/// finite-range extremes need not be close to them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtremalReport {
    pub schema: u32,
    pub x: u64,
    pub phi_min: f64,
    pub phi_argmin: u64,
    pub sigma_max: f64,
    pub sigma_argmax: u64,
    pub exp_neg_gamma: f64,
    pub exp_gamma: f64,
    pub note: String,
}

impl ExtremalReport {
    pub fn to_csv(&self) -> String {
        format!(
            "x,phi_min,phi_argmin,exp_neg_gamma,sigma_max,sigma_argmax,exp_gamma\n{},{},{},{},{},{},{}\n",
            self.x,
            self.phi_min,
            self.phi_argmin,
            self.exp_neg_gamma,
            self.sigma_max,
            self.sigma_argmax,
            self.exp_gamma
        )
    }
}

// (ratio, m) pairs; ties keep the smaller m
fn better_min(a: (f64, u64), b: (f64, u64)) -> (f64, u64) {
    if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) {
        b
    } else {
        a
    }
}

fn better_max(a: (f64, u64), b: (f64, u64)) -> (f64, u64) {
    if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
        b
    } else {
        a
    }
}

pub fn extremal_ratio_report(x: u64, arith: &Arith) -> Result<ExtremalReport> {
    if x < 10 {
        return Err(Error::InvalidInput(format!("x must be at least 10, got {x}")));
    }
    let parts = chunked(x, |lo, hi| {
        let mut lo_best = (f64::INFINITY, 0u64);
        let mut hi_best = (f64::NEG_INFINITY, 0u64);
        for m in lo.max(2)..=hi {
            let fac = arith.factorize(m);
            let ll = iterated_log(m as f64, 2);
            let mf = m as f64;
            lo_best = better_min(lo_best, (phi(&fac) as f64 * ll / mf, m));
            hi_best = better_max(hi_best, (sigma(&fac)? as f64 / (mf * ll), m));
        }
        Ok((lo_best, hi_best))
    })?;
    let (lo, hi) = parts.into_iter().fold(((f64::INFINITY, 0u64), (f64::NEG_INFINITY, 0u64)), |(l, h), (pl, ph)| {
        (better_min(l, pl), better_max(h, ph))
    });
    Ok(ExtremalReport {
        schema: crate::report::SCHEMA_VERSION,
        x,
        phi_min: lo.0,
        phi_argmin: lo.1,
        sigma_max: hi.0,
        sigma_argmax: hi.1,
        exp_neg_gamma: (-EULER_GAMMA).exp(),
        exp_gamma: EULER_GAMMA.exp(),
        note: crate::report::DETERMINISM_NOTE.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_checked_at_ten() {
        // log_2 m is floored to 1 for m <= 15, so these are phi(m)/m and sigma(m)/m
        let r = extremal_ratio_report(10, &Arith::with_limit(100).unwrap()).unwrap();
        assert_eq!(r.phi_argmin, 6);
        assert!((r.phi_min - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(r.sigma_argmax, 6);
        assert!((r.sigma_max - 2.0).abs() < 1e-15);
    }

    #[test]
    fn constants() {
        let r = extremal_ratio_report(1000, &Arith::with_limit(1000).unwrap()).unwrap();
        assert_eq!(format!("{:.4}", r.exp_neg_gamma), "0.5615");
        assert_eq!(format!("{:.4}", r.exp_gamma), "1.7811");
        assert!(r.phi_min > 0.0 && r.sigma_max > 1.0);
    }

    #[test]
    fn rejects_small_range() {
        assert!(extremal_ratio_report(9, &Arith::with_limit(100).unwrap()).is_err());
    }
}
