use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Digit alphabet `{0, ..., g-1}`. Digits are stored as bytes, so `g <= 256`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Alphabet(u32);

impl Alphabet {
    pub fn new(g: u32) -> Result<Self> {
        if !(2..=256).contains(&g) {
            return Err(Error::InvalidInput(format!("base must lie in 2..=256, got {g}")));
        }
        Ok(Alphabet(g))
    }

    pub fn base(self) -> u32 {
        self.0
    }

    /// Number of words of length `k`, if it fits in a `u64`.
    pub fn words_of_length(self, k: usize) -> Option<u64> {
        (self.0 as u64).checked_pow(k as u32)
    }
}

impl TryFrom<u32> for Alphabet {
    type Error = Error;
    fn try_from(g: u32) -> Result<Self> {
        Alphabet::new(g)
    }
}

impl From<Alphabet> for u32 {
    fn from(a: Alphabet) -> u32 {
        a.0
    }
}

/// Order in which the digits of one integer are written out.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DigitOrder {
    /// Usual positional notation, leading digit first.
    #[default]
    #[serde(rename = "msf")]
    MostSignificantFirst,
    /// `d_0 d_1 ... d_t`, least significant digit first.
    #[serde(rename = "paper")]
    PaperOrder,
}

impl DigitOrder {
    pub fn name(self) -> &'static str {
        match self {
            DigitOrder::MostSignificantFirst => "msf",
            DigitOrder::PaperOrder => "paper",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "msf" => Some(DigitOrder::MostSignificantFirst),
            "paper" | "lsf" => Some(DigitOrder::PaperOrder),
            _ => None,
        }
    }
}

impl fmt::Display for DigitOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A finite digit sequence with its declared order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word {
    digits: Vec<u8>,
    order: DigitOrder,
}

impl Word {
    pub fn new(digits: Vec<u8>, alphabet: Alphabet, order: DigitOrder) -> Result<Self> {
        if let Some(&d) = digits.iter().find(|&&d| d as u32 >= alphabet.base()) {
            return Err(Error::InvalidDigit { digit: d as u32, base: alphabet.base() });
        }
        Ok(Word { digits, order })
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn order(&self) -> DigitOrder {
        self.order
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// The same digits read in the opposite order.
    pub fn reversed(&self) -> Word {
        let order = match self.order {
            DigitOrder::MostSignificantFirst => DigitOrder::PaperOrder,
            DigitOrder::PaperOrder => DigitOrder::MostSignificantFirst,
        };
        Word { digits: self.digits.iter().rev().copied().collect(), order }
    }

    /// Integer value of the digits read in the declared order.
    pub fn value(&self, alphabet: Alphabet) -> Option<u64> {
        let g = alphabet.base() as u64;
        let fold = |acc: Option<u64>, &d: &u8| acc?.checked_mul(g)?.checked_add(d as u64);
        match self.order {
            DigitOrder::MostSignificantFirst => self.digits.iter().fold(Some(0), fold),
            DigitOrder::PaperOrder => self.digits.iter().rev().fold(Some(0), fold),
        }
    }
}

/// Renders digits compactly: `0-9a-z` for bases up to 36, dotted decimals otherwise.
pub fn render_digits(digits: &[u8], alphabet: Alphabet) -> String {
    if alphabet.base() <= 36 {
        digits.iter().map(|&d| char::from_digit(d as u32, 36).expect("digit below base")).collect()
    } else {
        digits.iter().map(u8::to_string).collect::<Vec<_>>().join(".")
    }
}

/// Digits of `n >= 1` in base `g`, appended to `out` in the requested order.
pub fn push_digits(n: u64, alphabet: Alphabet, order: DigitOrder, out: &mut Vec<u8>) {
    assert!(n >= 1, "words are defined for n >= 1");
    let g = alphabet.base() as u64;
    let start = out.len();
    let mut rest = n;
    while rest > 0 {
        out.push((rest % g) as u8);
        rest /= g;
    }
    if order == DigitOrder::MostSignificantFirst {
        out[start..].reverse();
    }
}

/// The base-`g` word of `n >= 1`.
pub fn to_word(n: u64, alphabet: Alphabet, order: DigitOrder) -> Word {
    let mut digits = Vec::with_capacity(word_length(n, alphabet) as usize);
    push_digits(n, alphabet, order, &mut digits);
    Word { digits, order }
}

/// `L(n)`: the number of base-`g` digits of `n >= 1`.
pub fn word_length(n: u64, alphabet: Alphabet) -> u32 {
    assert!(n >= 1, "words are defined for n >= 1");
    let g = alphabet.base() as u64;
    let mut len = 1;
    let mut rest = n / g;
    while rest > 0 {
        rest /= g;
        len += 1;
    }
    len
}

/// Rank of a k-digit window read left to right as a base-`g` number.
pub fn window_index(window: &[u8], alphabet: Alphabet) -> u64 {
    let g = alphabet.base() as u64;
    window.iter().fold(0, |acc, &d| acc * g + d as u64)
}

/// Inverse of [`window_index`] for a window of length `k`.
pub fn index_to_window(mut index: u64, k: usize, alphabet: Alphabet) -> Vec<u8> {
    let g = alphabet.base() as u64;
    let mut out = vec![0u8; k];
    for slot in out.iter_mut().rev() {
        *slot = (index % g) as u8;
        index /= g;
    }
    out
}

/// Indices of every length-`k` window of `digits`, sorted ascending
/// (one entry per occurrence).
pub fn kgram_indices(digits: &[u8], k: usize, alphabet: Alphabet) -> Vec<u64> {
    if k == 0 || digits.len() < k {
        return Vec::new();
    }
    let mut out: Vec<u64> = digits.windows(k).map(|w| window_index(w, alphabet)).collect();
    out.sort_unstable();
    out
}

/// Number of overlapping occurrences of `pattern` in `digits`.
pub fn count_occurrences(digits: &[u8], pattern: &[u8]) -> u64 {
    if pattern.is_empty() || digits.len() < pattern.len() {
        return 0;
    }
    digits.windows(pattern.len()).filter(|w| *w == pattern).count() as u64
}

/// `nu(n; w)`: overlapping occurrences of `w` in the word of `n`, with `n`
/// written in `w`'s declared order.
pub fn nu(n: u64, w: &Word, alphabet: Alphabet) -> u64 {
    let word = to_word(n, alphabet, w.order());
    count_occurrences(word.digits(), w.digits())
}

/// Whether `n` is `(eps, k)`-normal: every `w` in `A^k` satisfies
/// `(g^-k - eps) L(n) < nu(n; w) < (g^-k + eps) L(n)`, strictly.
pub fn is_eps_k_normal(n: u64, eps: f64, k: usize, alphabet: Alphabet, order: DigitOrder) -> bool {
    assert!(k >= 1, "k must be positive");
    let word = to_word(n, alphabet, order);
    digits_are_eps_k_normal(word.digits(), eps, k, alphabet)
}

/// The `(eps, k)` test applied to an explicit digit word of length `L`.
pub fn digits_are_eps_k_normal(digits: &[u8], eps: f64, k: usize, alphabet: Alphabet) -> bool {
    let len = digits.len() as f64;
    let target = (alphabet.base() as f64).powi(-(k as i32));
    let lower = (target - eps) * len;
    let upper = (target + eps) * len;
    let within = |count: u64| lower < count as f64 && (count as f64) < upper;

    let tally = kgram_indices(digits, k, alphabet);
    let mut distinct = 0u64;
    for run in tally.chunk_by(|a, b| a == b) {
        distinct += 1;
        if !within(run.len() as u64) {
            return false;
        }
    }
    // words absent from the tally have nu = 0
    let total = alphabet.words_of_length(k);
    let some_absent = total.is_none_or(|t| distinct < t);
    !some_absent || within(0)
}
