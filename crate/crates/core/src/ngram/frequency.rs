//! Frequency of k-blocks in a stream prefix, with the exact split of each
//! count into per-word occurrences, cross-word occurrences, and the
//! correction for the final, partially visible word.

use serde::{Deserialize, Serialize};

use crate::arith::{Arith, CompositionSpec};
use crate::error::{Error, Result};
use crate::ngram::counter::KGramCounter;
use crate::ngram::table::WordTable;
use crate::report::SCHEMA_VERSION;
use crate::wordstream::{
    digits_are_eps_k_normal, index_to_window, kgram_indices, render_digits, window_index, Alphabet, Cut, DigitOrder,
    StreamCursor,
};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CountOptions {
    /// Tolerance used to classify each `f(m)` as `(eps, k)`-normal or not.
    pub eps: f64,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions { eps: 0.05 }
    }
}

/// Per-block line of a [`FrequencyReport`].
///
/// `count == nu_sum + boundary + tail` always holds: `nu_sum` adds the
/// occurrences inside each word `f(1), ..., f(n)` (the last one in full),
/// `boundary` the occurrences straddling two or more words, and `tail`
/// (never positive) removes the occurrences of `f(n)` cut off by the truncation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WordFrequency {
    pub word: String,
    pub count: u64,
    pub freq: f64,
    pub nu_sum: u64,
    pub boundary: u64,
    pub tail: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrequencyReport {
    pub schema: u32,
    pub spec: String,
    #[serde(rename = "N")]
    pub digits: u64,
    pub n: u64,
    pub g: u32,
    pub k: usize,
    pub order: DigitOrder,
    pub eps: f64,
    pub positions: u64,
    pub cut: Cut,
    /// Every block of `A^k` when the table is dense, otherwise the blocks seen.
    pub freqs: Vec<WordFrequency>,
    pub max_dev: f64,
    pub boundary: u64,
    pub tail: i64,
    pub bad_count: u64,
    pub note: String,
}

impl FrequencyReport {
    pub fn entry(&self, word: &str) -> Option<&WordFrequency> {
        self.freqs.iter().find(|w| w.word == word)
    }

    /// Checks `count = nu_sum + boundary + tail` for every listed block and
    /// that the counts add up to the number of windows.
    pub fn accounting_holds(&self) -> bool {
        let split_ok =
            self.freqs.iter().all(|w| w.count as i128 == w.nu_sum as i128 + w.boundary as i128 + w.tail as i128);
        let total: u64 = self.freqs.iter().map(|w| w.count).sum();
        split_ok && total == self.positions
    }

    /// CSV projection: one row per block. Header fields are dropped.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("word,count,freq,nu_sum,boundary,tail\n");
        for w in &self.freqs {
            out.push_str(&format!("{},{},{},{},{},{}\n", w.word, w.count, w.freq, w.nu_sum, w.boundary, w.tail));
        }
        out
    }
}

/// Counts every k-block in the first `len` digits of the stream of `spec`.
pub fn count_stream(
    spec: &CompositionSpec,
    alphabet: Alphabet,
    order: DigitOrder,
    k: usize,
    len: u64,
    options: CountOptions,
    arith: &Arith,
) -> Result<FrequencyReport> {
    if k == 0 || len < k as u64 {
        return Err(Error::InvalidInput(format!("need N >= k >= 1, got N={len}, k={k}")));
    }
    let cells = alphabet.words_of_length(k).ok_or_else(|| Error::InvalidInput("g^k does not fit in 64 bits".into()))?;
    let mut counter = KGramCounter::new(alphabet, k)?;
    let mut nu_sum: WordTable<u64> = WordTable::new(cells);
    let mut boundary: WordTable<u64> = WordTable::new(cells);
    let mut tail: WordTable<i64> = WordTable::new(cells);
    let mut recent: Vec<u8> = Vec::with_capacity(k);
    let mut bad_count = 0u64;
    let mut remaining = len;

    let mut cursor = StreamCursor::new(spec.clone(), alphabet, order, arith.clone());
    let (final_index, cut) = loop {
        let word = cursor.next_word()?;
        let digits = &word.digits;
        let visible = (digits.len() as u64).min(remaining) as usize;

        // windows ending at digit j of this word and starting in an earlier word
        for j in 0..visible.min(k - 1) {
            let from_before = k - 1 - j;
            if recent.len() >= from_before {
                let mut window = recent[recent.len() - from_before..].to_vec();
                window.extend_from_slice(&digits[..=j]);
                boundary.add(window_index(&window, alphabet), 1);
            }
        }

        counter.feed_all(&digits[..visible])?;

        for idx in kgram_indices(digits, k, alphabet) {
            nu_sum.add(idx, 1);
        }
        if visible < digits.len() {
            for idx in kgram_indices(&digits[..visible], k, alphabet) {
                tail.add(idx, 1);
            }
            for idx in kgram_indices(digits, k, alphabet) {
                tail.add(idx, -1);
            }
        }
        if !digits_are_eps_k_normal(digits, options.eps, k, alphabet) {
            bad_count += 1;
        }

        recent.extend_from_slice(&digits[..visible]);
        if recent.len() > k - 1 {
            recent.drain(..recent.len() - (k - 1));
        }
        remaining -= visible as u64;
        if remaining == 0 {
            let cut =
                if visible == digits.len() { Cut::Flush } else { Cut::MidWord { visible, word_len: digits.len() } };
            break (word.index, cut);
        }
    };

    let positions = counter.positions();
    let target = (alphabet.base() as f64).powi(-(k as i32));
    let freq_of = |count: u64| if positions > 0 { count as f64 / positions as f64 } else { 0.0 };

    let indices: Vec<u64> = if counter.is_dense() {
        (0..cells).collect()
    } else {
        let mut all: Vec<u64> = counter
            .nonzero()
            .into_iter()
            .map(|(i, _)| i)
            .chain(nu_sum.nonzero().into_iter().map(|(i, _)| i))
            .chain(boundary.nonzero().into_iter().map(|(i, _)| i))
            .chain(tail.nonzero().into_iter().map(|(i, _)| i))
            .collect();
        all.sort_unstable();
        all.dedup();
        all
    };
    let freqs: Vec<WordFrequency> = indices
        .iter()
        .map(|&i| {
            let count = counter.count_index(i);
            WordFrequency {
                word: render_digits(&index_to_window(i, k, alphabet), alphabet),
                count,
                freq: freq_of(count),
                nu_sum: nu_sum.get(i),
                boundary: boundary.get(i),
                tail: tail.get(i),
            }
        })
        .collect();
    let mut max_dev = freqs.iter().map(|w| (w.freq - target).abs()).fold(0.0, f64::max);
    let seen = freqs.iter().filter(|w| w.count > 0).count() as u64;
    if seen < cells {
        max_dev = max_dev.max(target);
    }

    Ok(FrequencyReport {
        schema: SCHEMA_VERSION,
        spec: spec.to_string(),
        digits: len,
        n: final_index,
        g: alphabet.base(),
        k,
        order,
        eps: options.eps,
        positions,
        cut,
        boundary: freqs.iter().map(|w| w.boundary).sum(),
        tail: freqs.iter().map(|w| w.tail).sum(),
        freqs,
        max_dev,
        bad_count,
        note: crate::report::DETERMINISM_NOTE.to_string(),
    })
}
