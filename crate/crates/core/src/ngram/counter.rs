use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ngram::table::WordTable;
use crate::wordstream::{index_to_window, window_index, Alphabet};

/// Sliding-window counter of the length-`k` blocks of a digit stream.
///
/// Counters for consecutive pieces of a stream can be merged, provided each
/// piece's counter was seeded with the carry (last `k - 1` digits) of the
/// piece before it.
#[derive(Clone, Debug, PartialEq)]
pub struct KGramCounter {
    alphabet: Alphabet,
    k: usize,
    counts: WordTable<u64>,
    positions: u64,
    fed: u64,
    seed: Vec<u8>,
    // rank of the last min(filled, k) digits
    window: u64,
    filled: usize,
    // g^(k-1)
    carry_modulus: u64,
}

impl KGramCounter {
    pub fn new(alphabet: Alphabet, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidInput("k must be >= 1".into()));
        }
        let cells = alphabet
            .words_of_length(k)
            .ok_or_else(|| Error::InvalidInput(format!("g^k overflows for g={}, k={k}", alphabet.base())))?;
        Ok(KGramCounter {
            alphabet,
            k,
            counts: WordTable::new(cells),
            positions: 0,
            fed: 0,
            seed: Vec::new(),
            window: 0,
            filled: 0,
            carry_modulus: cells / alphabet.base() as u64,
        })
    }

    /// A counter for a piece of stream preceded by `seed`. Only the last
    /// `k - 1` seed digits matter; they fill the window but are not counted.
    pub fn with_seed(alphabet: Alphabet, k: usize, seed: &[u8]) -> Result<Self> {
        let mut c = Self::new(alphabet, k)?;
        let seed = &seed[seed.len().saturating_sub(k - 1)..];
        for &d in seed {
            c.check_digit(d)?;
            c.push_window(d);
        }
        c.seed = seed.to_vec();
        Ok(c)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of complete windows counted so far.
    pub fn positions(&self) -> u64 {
        self.positions
    }

    /// Digits fed, not counting the seed.
    pub fn fed(&self) -> u64 {
        self.fed
    }

    pub fn seed(&self) -> &[u8] {
        &self.seed
    }

    pub fn is_dense(&self) -> bool {
        self.counts.is_dense()
    }

    #[inline]
    fn check_digit(&self, digit: u8) -> Result<()> {
        if digit as u32 >= self.alphabet.base() {
            return Err(Error::InvalidDigit { digit: digit as u32, base: self.alphabet.base() });
        }
        Ok(())
    }

    #[inline]
    fn push_window(&mut self, digit: u8) {
        self.window = (self.window % self.carry_modulus) * self.alphabet.base() as u64 + digit as u64;
        if self.filled < self.k {
            self.filled += 1;
        }
    }

    #[inline]
    pub fn feed(&mut self, digit: u8) -> Result<()> {
        self.check_digit(digit)?;
        self.push_window(digit);
        self.fed += 1;
        if self.filled == self.k {
            self.counts.add(self.window, 1);
            self.positions += 1;
        }
        Ok(())
    }

    pub fn feed_all(&mut self, digits: &[u8]) -> Result<()> {
        digits.iter().try_for_each(|&d| self.feed(d))
    }

    /// The last `min(k - 1, digits seen)` digits, seed included.
    pub fn carry(&self) -> Vec<u8> {
        let len = self.filled.min(self.k - 1);
        let modulus = (self.alphabet.base() as u64).pow(len as u32);
        index_to_window(self.window % modulus, len, self.alphabet)
    }

    /// Occurrences of the block with rank `index`.
    pub fn count_index(&self, index: u64) -> u64 {
        self.counts.get(index)
    }

    /// Occurrences of `word` (which must have length `k`).
    pub fn count(&self, word: &[u8]) -> u64 {
        assert_eq!(word.len(), self.k, "word length must equal k");
        self.counts.get(window_index(word, self.alphabet))
    }

    /// Blocks with a nonzero count, by rank.
    pub fn nonzero(&self) -> Vec<(u64, u64)> {
        self.counts.nonzero()
    }

    /// Combines `left` with a counter for the digits that follow it.
    pub fn merge(left: &KGramCounter, right: &KGramCounter) -> Result<KGramCounter> {
        if left.alphabet != right.alphabet || left.k != right.k {
            return Err(Error::ShapeMismatch {
                g1: left.alphabet.base(),
                k1: left.k,
                g2: right.alphabet.base(),
                k2: right.k,
            });
        }
        if left.carry() != right.seed {
            return Err(Error::CarryMismatch);
        }
        let mut out = right.clone();
        out.counts.absorb(&left.counts);
        out.positions += left.positions;
        out.fed += left.fed;
        out.seed.clone_from(&left.seed);
        // the window keeps right's digits; if right saw nothing it equals left's carry
        out.filled = if right.fed == 0 { left.filled } else { right.filled };
        if right.fed == 0 {
            out.window = left.window;
        }
        Ok(out)
    }
}

/// Counts `digits` by splitting them into `pieces` contiguous segments,
/// counting each in parallel with its seed, and merging in order.
pub fn count_digits_parallel(digits: &[u8], alphabet: Alphabet, k: usize, pieces: usize) -> Result<KGramCounter> {
    let pieces = pieces.max(1);
    let step = digits.len().div_ceil(pieces).max(1);
    let bounds: Vec<(usize, usize)> =
        (0..digits.len()).step_by(step).map(|s| (s, (s + step).min(digits.len()))).collect();
    counts_for_splits(digits, alphabet, k, &bounds)
}

/// Same as [`count_digits_parallel`] but with explicit cut points.
pub fn count_with_cuts(digits: &[u8], alphabet: Alphabet, k: usize, cuts: &[usize]) -> Result<KGramCounter> {
    let mut edges: Vec<usize> = cuts.iter().copied().filter(|&c| c > 0 && c < digits.len()).collect();
    edges.sort_unstable();
    edges.dedup();
    let mut bounds = Vec::new();
    let mut start = 0;
    for e in edges.into_iter().chain(std::iter::once(digits.len())) {
        bounds.push((start, e));
        start = e;
    }
    counts_for_splits(digits, alphabet, k, &bounds)
}

fn counts_for_splits(digits: &[u8], alphabet: Alphabet, k: usize, bounds: &[(usize, usize)]) -> Result<KGramCounter> {
    let parts: Vec<KGramCounter> = bounds
        .par_iter()
        .map(|&(s, e)| {
            let mut c = KGramCounter::with_seed(alphabet, k, &digits[s.saturating_sub(k - 1)..s])?;
            c.feed_all(&digits[s..e])?;
            Ok(c)
        })
        .collect::<Result<_>>()?;
    parts.iter().try_fold(KGramCounter::new(alphabet, k)?, |acc, part| KGramCounter::merge(&acc, part))
}
