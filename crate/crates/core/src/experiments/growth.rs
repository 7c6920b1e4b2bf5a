use serde::{Deserialize, Serialize};

use crate::arith::{Arith, CompositionSpec};
use crate::error::Result;
use crate::experiments::{chunked, log1, validate_checkpoints};

const SIEVE_CAP: u64 = 1 << 24;

/// Growth profile of a stream at one checkpoint `x` (a count of stream indices).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthRow {
    pub x: u64,
    /// `sum_{i <= x} log f(a_i) / (x log x)`.
    pub lower_ratio: f64,
    /// `max_{i <= x} log f(a_i) / log a_i`.
    pub upper_ratio: f64,
    /// Argument `a_i` attaining `upper_ratio`.
    pub argmax: u64,
    /// The same maximum restricted to `a_i > sqrt(x)`, which drops the
    /// handful of tiny arguments where floored logs inflate the ratio.
    pub tail_upper_ratio: f64,
    pub verdict: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub schema: u32,
    pub spec: String,
    pub depth: usize,
    /// `1 / 2^(j+1)`.
    pub lower_floor: f64,
    pub upper_ceiling: f64,
    pub verdict_rule: String,
    pub rows: Vec<GrowthRow>,
    pub note: String,
}

impl GrowthReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.verdict)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,lower_ratio,upper_ratio,argmax,tail_upper_ratio,verdict\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.x, r.lower_ratio, r.upper_ratio, r.argmax, r.tail_upper_ratio, r.verdict
            ));
        }
        out
    }
}

#[derive(Clone, Copy)]
struct Acc {
    sum: f64,
    max: f64,
    argmax: u64,
}

/// Checks that `f` grows like a power of its argument: the mean of `log f`
/// against `log x`, and the largest `log f(a) / log a`.
pub fn growth_hypothesis_check(spec: &CompositionSpec, checkpoints: &[u64], arith: &Arith) -> Result<GrowthReport> {
    validate_checkpoints(checkpoints)?;
    let max = *checkpoints.last().expect("validated nonempty");
    let args: Vec<u64> = spec.sources().take(max as usize).collect();
    let mut arith = arith.clone();
    if let Some(&top) = args.last() {
        arith.ensure(top.min(SIEVE_CAP))?;
    }

    // per chunk, per checkpoint slot: partial sum and maximum
    let parts = chunked(max, |lo, hi| {
        let mut acc: Vec<Option<Acc>> = vec![None; checkpoints.len()];
        for i in lo..=hi {
            let a = args[(i - 1) as usize];
            let v = spec.eval_argument(a, &arith)?;
            let lv = log1(v as f64);
            let ratio = lv / log1(a as f64);
            let slot = checkpoints.partition_point(|&x| x < i);
            let e = acc[slot].get_or_insert(Acc { sum: 0.0, max: f64::MIN, argmax: a });
            e.sum += lv;
            if ratio > e.max {
                e.max = ratio;
                e.argmax = a;
            }
        }
        Ok(acc)
    })?;

    let j = spec.depth();
    let lower_floor = 0.5f64.powi(j as i32 + 1);
    let upper_ceiling = 2.0;
    let mut rows = Vec::with_capacity(checkpoints.len());
    let mut sum = 0.0;
    let mut best = (f64::MIN, 0u64);
    let mut per_slot: Vec<Vec<Acc>> = vec![Vec::new(); checkpoints.len()];
    for chunk in parts {
        for (slot, a) in chunk.into_iter().enumerate() {
            if let Some(a) = a {
                per_slot[slot].push(a);
            }
        }
    }
    for (slot, &x) in checkpoints.iter().enumerate() {
        for a in &per_slot[slot] {
            sum += a.sum;
            if a.max > best.0 {
                best = (a.max, a.argmax);
            }
        }
        let tail_upper_ratio = tail_max(spec, &args[..x as usize], x, &arith)?;
        let lower_ratio = sum / (x as f64 * log1(x as f64));
        rows.push(GrowthRow {
            x,
            lower_ratio,
            upper_ratio: best.0,
            argmax: best.1,
            tail_upper_ratio,
            verdict: lower_ratio >= lower_floor && tail_upper_ratio <= upper_ceiling,
        });
    }

    Ok(GrowthReport {
        schema: crate::report::SCHEMA_VERSION,
        spec: spec.to_string(),
        depth: j,
        lower_floor,
        upper_ceiling,
        verdict_rule: "lower_ratio >= 1/2^(j+1) and tail_upper_ratio <= 2".into(),
        rows,
        note: crate::report::DETERMINISM_NOTE.to_string(),
    })
}

fn tail_max(spec: &CompositionSpec, args: &[u64], x: u64, arith: &Arith) -> Result<f64> {
    let cut = (x as f64).sqrt();
    let parts = chunked(args.len() as u64, |lo, hi| {
        let mut m = 0.0f64;
        for &a in &args[(lo - 1) as usize..hi as usize] {
            if (a as f64) > cut {
                let v = spec.eval_argument(a, arith)?;
                m = m.max(log1(v as f64) / log1(a as f64));
            }
        }
        Ok(m)
    })?;
    Ok(parts.into_iter().fold(0.0, f64::max))
}
