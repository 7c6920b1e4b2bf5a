use std::collections::BTreeMap;

use crate::arith::{big_omega, carmichael_lambda, Arith, BaseFn, CompositionSpec, Domain, Factorize, SetPredicate};
use crate::error::{Error, Result};
use crate::experiments::census::{CensusReport, CensusRow};
use crate::experiments::{chunked, cumulative_counts, log1, thin_bound, validate_checkpoints};

fn eval(a: &BaseFn, n: u64, arith: &Arith) -> Result<u64> {
    a.eval(&arith.factorize(n))
}

/// `#{n <= x : lambda(n) < sqrt(n)}` against `x / exp((log x)^(1/3))`.
pub fn lemma_fps_census(checkpoints: &[u64], arith: &Arith) -> Result<CensusReport> {
    let counts = cumulative_counts(checkpoints, |n| {
        let l = carmichael_lambda(&arith.factorize(n)) as u128;
        Ok(l * l < n as u128)
    })?;
    let mut report = CensusReport::new(
        "fps",
        "lambda(n) < n^(1/2)".into(),
        "x / exp((log x)^(1/3)), log x = max(1, ln x)",
        "observed <= bound",
    );
    for (&x, &observed) in checkpoints.iter().zip(&counts) {
        let bound = thin_bound(x, 1.0 / 3.0);
        report.rows.push(CensusRow {
            x,
            observed,
            bound: Some(bound),
            ratio: Some(observed as f64 / bound),
            verdict: Some(observed as f64 <= bound),
            breakdown: BTreeMap::new(),
        });
    }
    Ok(report)
}

/// `#{n <= x : d | a(n)}` against `(x/d) (8 l log^2 x)^l` with `l = Omega(d)`.
pub fn divisor_preimage_census(a: &BaseFn, d: u64, checkpoints: &[u64], arith: &Arith) -> Result<CensusReport> {
    if d == 0 {
        return Err(Error::InvalidInput("d must be >= 1".into()));
    }
    let ell = big_omega(&arith.factorize(d));
    let counts = cumulative_counts(checkpoints, |n| Ok(eval(a, n, arith)? % d == 0))?;
    let mut report = CensusReport::new(
        "divisor",
        format!("{a}(n) divisible by {d}"),
        "(x/d) * (8 l (log x)^2)^l, l = Omega(d), log x = max(1, ln x)",
        "observed <= bound",
    )
    .param("a", a)
    .param("d", d)
    .param("l", ell);
    for (&x, &observed) in checkpoints.iter().zip(&counts) {
        let lx = log1(x as f64);
        let bound = (x as f64 / d as f64) * (8.0 * ell as f64 * lx * lx).powi(ell as i32);
        report.rows.push(CensusRow {
            x,
            observed,
            bound: bound.is_finite().then_some(bound),
            ratio: None,
            verdict: Some(observed as f64 <= bound),
            breakdown: BTreeMap::new(),
        });
    }
    Ok(report)
}

/// `#{n <= x : Omega(a(n)) > K^2}`, reported as a ratio to `K 2^-K x (log x)^3`
/// because the bound carries an unspecified constant.
pub fn omega_tail_census(a: &BaseFn, big_k: u32, checkpoints: &[u64], arith: &Arith) -> Result<CensusReport> {
    if big_k == 0 {
        return Err(Error::InvalidInput("K must be >= 1".into()));
    }
    let threshold = big_k.checked_mul(big_k).ok_or(Error::Overflow("K^2"))?;
    let counts = cumulative_counts(checkpoints, |n| {
        let v = eval(a, n, arith)?;
        Ok(big_omega(&arith.factorize(v)) > threshold)
    })?;
    let mut report = CensusReport::new(
        "omega-tail",
        format!("Omega({a}(n)) > {threshold}"),
        "K * 2^-K * x * (log x)^3 (implied constant unknown)",
        "ratio only",
    )
    .param("a", a)
    .param("K", big_k);
    for (&x, &observed) in checkpoints.iter().zip(&counts) {
        let scale = big_k as f64 * 2f64.powi(-(big_k as i32)) * x as f64 * log1(x as f64).powi(3);
        report.rows.push(CensusRow {
            x,
            observed,
            bound: Some(scale),
            ratio: Some(observed as f64 / scale),
            verdict: None,
            breakdown: BTreeMap::new(),
        });
    }
    Ok(report)
}

/// `true` when `value^(2^j) < n`.
fn below_root(value: u64, n: u64, j: usize) -> bool {
    let n = n as u128;
    let mut v = value as u128;
    for _ in 0..j {
        if v >= n {
            return false;
        }
        v *= v;
    }
    v < n
}

/// `#{n <= x : f(n) < n^(1/2^j)}` for a chain of depth `j` over the naturals,
/// certified thin at `x` when below `x / exp((log x)^theta)`.
pub fn small_value_census(
    spec: &CompositionSpec,
    theta: f64,
    checkpoints: &[u64],
    arith: &Arith,
) -> Result<CensusReport> {
    if spec.domain() != &Domain::Naturals {
        return Err(Error::InvalidInput("small-value census needs a chain over the naturals".into()));
    }
    if !(theta > 0.0 && theta <= 1.0) {
        return Err(Error::InvalidInput(format!("theta must lie in (0, 1], got {theta}")));
    }
    let j = spec.depth();
    let counts = cumulative_counts(checkpoints, |n| Ok(below_root(spec.apply_chain(n, arith)?, n, j)))?;
    let mut report = CensusReport::new(
        "small-value",
        format!("{}(n) < n^(1/2^{j})", spec.chain_name()),
        "x / exp((log x)^theta)",
        "observed < bound (thin at x)",
    )
    .param("f", spec.chain_name())
    .param("j", j)
    .param("theta", theta);
    for (&x, &observed) in checkpoints.iter().zip(&counts) {
        let bound = thin_bound(x, theta);
        report.rows.push(CensusRow {
            x,
            observed,
            bound: Some(bound),
            ratio: None,
            verdict: Some((observed as f64) < bound),
            breakdown: BTreeMap::new(),
        });
    }
    Ok(report)
}

/// A set of naturals together with the exponent `theta` it is claimed to be thin for.
#[derive(Clone, Debug)]
pub struct ThinSetSpec {
    pub theta: f64,
    pub set: SetPredicate,
}

impl ThinSetSpec {
    pub fn new(theta: f64, set: SetPredicate) -> Result<Self> {
        if !(theta > 0.0 && theta <= 1.0) {
            return Err(Error::InvalidInput(format!("theta must lie in (0, 1], got {theta}")));
        }
        Ok(ThinSetSpec { theta, set })
    }

    /// Exponent used to certify the preimage: half of `min(1/4, theta/7, 4 theta/5)`.
    pub fn preimage_exponent(&self) -> f64 {
        0.5 * (0.25f64).min(self.theta / 7.0).min(4.0 * self.theta / 5.0)
    }
}

/// `#{n <= x : a(n) in E}`, split by which part of `E` the value lands in:
/// `e1` (value `<= x^(1/3)`), `e2` (larger, with `Omega > (log x)^(theta/3)`),
/// and `e3` (the rest). Also records `#E ∩ [1, x]`.
pub fn thin_preimage_census(a: &BaseFn, set: &ThinSetSpec, checkpoints: &[u64], arith: &Arith) -> Result<CensusReport> {
    validate_checkpoints(checkpoints)?;
    let max = *checkpoints.last().expect("validated nonempty");
    let omega_cut: Vec<f64> = checkpoints.iter().map(|&x| log1(x as f64).powf(set.theta / 3.0)).collect();

    // per chunk, per checkpoint: [e1, e2, e3]
    let parts = chunked(max, |lo, hi| {
        let mut acc = vec![[0u64; 3]; checkpoints.len()];
        for n in lo..=hi {
            let v = eval(a, n, arith)?;
            if !set.set.contains(v) {
                continue;
            }
            let omega = big_omega(&arith.factorize(v)) as f64;
            for (slot, &x) in checkpoints.iter().enumerate() {
                if n > x {
                    continue;
                }
                let cube = (v as u128).pow(3);
                let part = if cube <= x as u128 {
                    0
                } else if omega > omega_cut[slot] {
                    1
                } else {
                    2
                };
                acc[slot][part] += 1;
            }
        }
        Ok(acc)
    })?;
    let mut totals = vec![[0u64; 3]; checkpoints.len()];
    for chunk in parts {
        for (t, c) in totals.iter_mut().zip(chunk) {
            for i in 0..3 {
                t[i] += c[i];
            }
        }
    }
    let set_counts = cumulative_counts(checkpoints, |m| Ok(set.set.contains(m)))?;

    let eta = set.preimage_exponent();
    let mut report = CensusReport::new(
        "thin-preimage",
        format!("{a}(n) in {}", set.set.label()),
        "x / exp((log x)^eta), eta = min(1/4, theta/7, 4 theta/5) / 2",
        "observed < bound (preimage thin at x)",
    )
    .param("a", a)
    .param("set", set.set.label())
    .param("theta", set.theta)
    .param("eta", eta);
    for (slot, &x) in checkpoints.iter().enumerate() {
        let [e1, e2, e3] = totals[slot];
        let observed = e1 + e2 + e3;
        let bound = thin_bound(x, eta);
        let mut breakdown = BTreeMap::new();
        breakdown.insert("e1".to_string(), e1);
        breakdown.insert("e2".to_string(), e2);
        breakdown.insert("e3".to_string(), e3);
        breakdown.insert("set_count".to_string(), set_counts[slot]);
        report.rows.push(CensusRow {
            x,
            observed,
            bound: Some(bound),
            ratio: None,
            verdict: Some((observed as f64) < bound),
            breakdown,
        });
    }
    Ok(report)
}

/// `#S ∩ [1, x]` against the floor `x / (log x)^B` that lets `S` serve as a
/// stream domain.
pub fn restricted_domain_density(set: &SetPredicate, b: f64, checkpoints: &[u64]) -> Result<CensusReport> {
    let counts = cumulative_counts(checkpoints, |m| Ok(set.contains(m)))?;
    let domain = Domain::Restricted(set.clone());
    let mut report =
        CensusReport::new("domain-density", format!("#{} ∩ [1, x]", set.label()), "x / (log x)^B", "observed > bound")
            .param("set", set.label())
            .param("B", b)
            .param("domain", domain);
    for (&x, &observed) in checkpoints.iter().zip(&counts) {
        let bound = x as f64 / log1(x as f64).powf(b);
        report.rows.push(CensusRow {
            x,
            observed,
            bound: Some(bound),
            ratio: None,
            verdict: Some(observed as f64 > bound),
            breakdown: BTreeMap::new(),
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{factorize, phi, sigma};

    fn arith() -> Arith {
        Arith::with_limit(20_000).unwrap()
    }

    #[test]
    fn below_root_exact() {
        assert!(below_root(3, 10, 1));
        assert!(!below_root(3, 9, 1));
        assert!(below_root(1, 2, 3));
        assert!(!below_root(2, 16, 2));
        assert!(below_root(2, 17, 2));
        assert!(!below_root(u64::MAX, u64::MAX, 4));
    }

    #[test]
    fn fps_small_scan() {
        let r = lemma_fps_census(&[10, 100, 1000], &arith()).unwrap();
        for row in &r.rows {
            let scan = (1..=row.x)
                .filter(|&n| {
                    let l = carmichael_lambda(&factorize(n));
                    l * l < n
                })
                .count() as u64;
            assert_eq!(row.observed, scan);
        }
    }

    #[test]
    fn divisor_census_examples() {
        let r = divisor_preimage_census(&BaseFn::Phi, 1, &[100, 1000], &arith()).unwrap();
        assert_eq!(r.rows[0].observed, 100);
        assert_eq!(r.rows[1].observed, 1000);
        assert!(r.all_pass());
        let r = divisor_preimage_census(&BaseFn::Phi, 2, &[100], &arith()).unwrap();
        assert_eq!(r.rows[0].observed, 98);
        let r = divisor_preimage_census(&BaseFn::Sigma, 12, &[10_000], &arith()).unwrap();
        let scan = (1..=10_000u64).filter(|&n| sigma(&factorize(n)).unwrap() % 12 == 0).count() as u64;
        assert_eq!(r.rows[0].observed, scan);
    }

    #[test]
    fn omega_tail_is_ratio_only() {
        let r = omega_tail_census(&BaseFn::Phi, 1, &[100], &arith()).unwrap();
        let scan = (1..=100u64).filter(|&n| big_omega(&factorize(phi(&factorize(n)))) > 1).count() as u64;
        assert_eq!(r.rows[0].observed, scan);
        assert!(r.rows.iter().all(|row| row.verdict.is_none() && row.ratio.is_some()));
        // Omega of phi(n) <= log2(n) < 9 for n <= 100
        let r = omega_tail_census(&BaseFn::Phi, 3, &[100], &arith()).unwrap();
        assert_eq!(r.rows[0].observed, 0);
    }

    #[test]
    fn small_values() {
        let sigma_spec = CompositionSpec::new(vec![BaseFn::Sigma], Domain::Naturals);
        let r = small_value_census(&sigma_spec, 0.5, &[100, 1000, 10_000], &arith()).unwrap();
        assert!(r.rows.iter().all(|row| row.observed == 0));
        let primes = CompositionSpec::new(vec![BaseFn::Phi], Domain::Primes);
        assert!(small_value_census(&primes, 0.5, &[100], &arith()).is_err());
    }

    #[test]
    fn thin_preimage_partitions() {
        let pow2 = ThinSetSpec::new(0.5, SetPredicate::powers_of_two()).unwrap();
        let r = thin_preimage_census(&BaseFn::Phi, &pow2, &[100, 1000], &arith()).unwrap();
        let scan = (1..=1000u64).filter(|&n| phi(&factorize(n)).is_power_of_two()).count() as u64;
        let row = r.row(1000).unwrap();
        assert_eq!(row.observed, scan);
        assert_eq!(row.breakdown["e1"] + row.breakdown["e2"] + row.breakdown["e3"], scan);
        assert_eq!(row.breakdown["set_count"], 10);

        let empty = ThinSetSpec::new(0.5, SetPredicate::empty()).unwrap();
        let r = thin_preimage_census(&BaseFn::Phi, &empty, &[1000], &arith()).unwrap();
        assert_eq!(r.rows[0].observed, 0);

        let all = ThinSetSpec::new(0.5, SetPredicate::naturals()).unwrap();
        let r = thin_preimage_census(&BaseFn::Phi, &all, &[1000], &arith()).unwrap();
        assert_eq!(r.rows[0].observed, 1000);
        assert_eq!(r.rows[0].verdict, Some(false));
    }

    #[test]
    fn density_floor() {
        let r = restricted_domain_density(&SetPredicate::naturals(), 3.0, &[100, 1000]).unwrap();
        assert!(r.all_pass());
        let r = restricted_domain_density(&SetPredicate::primes(), 1.1, &[1_000_000]).unwrap();
        assert_eq!(r.rows[0].observed, 78_498);
        assert!(r.all_pass());
        let r = restricted_domain_density(&SetPredicate::squares(), 2.0, &[1_000_000]).unwrap();
        assert_eq!(r.rows[0].observed, 1000);
        assert!(!r.all_pass());
    }
}
