use serde::{Deserialize, Serialize};

use crate::arith::{Arith, BaseFn, CompositionSpec, Domain, PrimeSet};
use crate::error::{Error, Result};
use crate::wordstream::{count_occurrences, push_digits, render_digits, Alphabet, DigitOrder, StreamCursor};

/// Largest block index range `2^k - 1` the demo accepts.
const MAX_BLOCK_WORDS: u64 = 1 << 20;

/// Outcome of the block-repetition demonstration for the stream of `f = G*`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepetitionReport {
    pub schema: u32,
    pub spec: String,
    pub primes: Vec<u64>,
    /// `M`, the product of the primes in `G`.
    pub modulus: u64,
    pub k: u32,
    pub g: u32,
    pub order: DigitOrder,
    #[serde(rename = "N")]
    pub digits: u64,
    /// Digits of `f(1) f(2) ... f(2^k - 1)`.
    pub block: String,
    pub block_len: usize,
    /// Overlapping occurrences of the block in the first `N` digits.
    pub observed: u64,
    /// `N g^-len(B)`, the expected count for a normal number.
    pub normal_ceiling: f64,
    /// `M^k`: the block reappears at every index `j M^k + 1`.
    pub period: u64,
    /// Digits written by one period `f(1) ... f(M^k)`.
    pub period_digits: u64,
    /// `N / period_digits`, the shape of the guaranteed lower bound.
    pub lower_shape: f64,
    /// Periods that started inside the prefix and were checked word by word.
    pub periods_checked: u64,
    /// Of those, periods whose first `2^k - 1` words equal the block.
    pub periods_repeating: u64,
    /// `observed / normal_ceiling`.
    pub separation: f64,
    pub note: String,
}

impl RepetitionReport {
    /// True when the observed count is at least `factor` times the normal ceiling.
    pub fn meets_separation(&self, factor: f64) -> bool {
        self.observed as f64 >= factor * self.normal_ceiling
    }

    pub fn to_csv(&self) -> String {
        format!(
            "block,block_len,N,observed,normal_ceiling,lower_shape,period,periods_checked,periods_repeating,separation\n\
             {},{},{},{},{},{},{},{},{},{}\n",
            self.block,
            self.block_len,
            self.digits,
            self.observed,
            self.normal_ceiling,
            self.lower_shape,
            self.period,
            self.periods_checked,
            self.periods_repeating,
            self.separation
        )
    }
}

/// Counts how often the opening block `f(1) ... f(2^k - 1)` of the stream
/// of `f(n) = prod_{p in G} p^{v_p(n)}` recurs in its first `len` digits.
///
/// Because `v_p(i) < k` for `i < 2^k`, every index shift by a multiple of
/// `M^k` leaves those values unchanged, so the block recurs once per period.
pub fn non_normality_demo(
    set: &PrimeSet,
    k: u32,
    alphabet: Alphabet,
    order: DigitOrder,
    len: u64,
    arith: &Arith,
) -> Result<RepetitionReport> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be >= 1".into()));
    }
    let block_words = 1u64
        .checked_shl(k)
        .filter(|&b| b <= MAX_BLOCK_WORDS + 1)
        .ok_or_else(|| Error::InvalidInput(format!("2^{k} - 1 block words exceed the limit")))?
        - 1;
    let modulus = set.modulus()?;
    let period = modulus.checked_pow(k).ok_or(Error::Overflow("M^k"))?;

    let spec = CompositionSpec::new(vec![BaseFn::GStar(set.clone())], Domain::Naturals);
    let mut cursor = StreamCursor::new(spec.clone(), alphabet, order, arith.clone());
    let mut digits: Vec<u8> = Vec::with_capacity(len as usize);
    let mut block_values: Vec<u64> = Vec::with_capacity(block_words as usize);
    let mut block: Vec<u8> = Vec::new();
    let mut period_digits = 0u64;
    let mut periods_checked = 0u64;
    let mut periods_repeating = 0u64;
    // whether the period currently being compared still matches the block
    let mut active: Option<bool> = None;
    let mut emitted = 0u64;

    // Walk whole words until the prefix is full, the first period is
    // measured, and the last period that started inside the prefix is checked.
    loop {
        let word = cursor.next_word()?;
        let i = word.index;
        let in_period = (i - 1) % period + 1;
        if i <= block_words {
            block_values.push(word.value);
            push_digits(word.value, alphabet, order, &mut block);
        }
        if i <= period {
            period_digits += word.digits.len() as u64;
        }
        if in_period == 1 && i > 1 && emitted < len {
            periods_checked += 1;
            active = Some(true);
        }
        if let Some(ok) = active.as_mut() {
            if in_period <= block_words {
                *ok &= word.value == block_values[(in_period - 1) as usize];
            }
            if in_period == block_words {
                periods_repeating += u64::from(*ok);
                active = None;
            }
        }
        let room = (len - digits.len() as u64).min(word.digits.len() as u64) as usize;
        digits.extend_from_slice(&word.digits[..room]);
        emitted += word.digits.len() as u64;
        if emitted >= len && i >= period.max(block_words) && active.is_none() {
            break;
        }
    }

    let observed = count_occurrences(&digits, &block);
    let normal_ceiling = len as f64 * (alphabet.base() as f64).powi(-(block.len() as i32));
    Ok(RepetitionReport {
        schema: crate::report::SCHEMA_VERSION,
        spec: spec.to_string(),
        primes: set.primes().to_vec(),
        modulus,
        k,
        g: alphabet.base(),
        order,
        digits: len,
        block: render_digits(&block, alphabet),
        block_len: block.len(),
        observed,
        normal_ceiling,
        period,
        period_digits,
        lower_shape: len as f64 / period_digits as f64,
        periods_checked,
        periods_repeating,
        separation: if normal_ceiling > 0.0 { observed as f64 / normal_ceiling } else { f64::INFINITY },
        note: crate::report::DETERMINISM_NOTE.to_string(),
    })
}
