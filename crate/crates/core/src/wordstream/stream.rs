use std::collections::VecDeque;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{Arith, CompositionSpec, DomainSource};
use crate::error::{Error, Result};
use crate::wordstream::word::{push_digits, Alphabet, DigitOrder};

/// Largest SPF table a stream grows on its own; beyond it values are
/// factored by trial division.
const AUTO_SIEVE_CAP: u64 = 1 << 24;
const MAX_BATCH: usize = 4096;

/// Resumable position inside a concatenation stream: `offset` digits of
/// the word for `index` have already been emitted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CursorPosition {
    pub index: u64,
    pub offset: usize,
}

impl CursorPosition {
    pub const START: CursorPosition = CursorPosition { index: 1, offset: 0 };
}

/// One whole word of the stream.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StreamWord {
    pub index: u64,
    pub value: u64,
    pub digits: Vec<u8>,
}

/// Pull-based generator of the digits of `0.f(1)f(2)f(3)...`.
///
/// Values are evaluated in batches (in parallel on the current rayon pool)
/// and consumed in index order, so output never depends on thread count.
pub struct StreamCursor {
    spec: CompositionSpec,
    alphabet: Alphabet,
    order: DigitOrder,
    arith: Arith,
    source: DomainSource,
    pending: VecDeque<Result<u64>>,
    batch: usize,
    // word currently being emitted, with `offset` digits already handed out
    word: Vec<u8>,
    word_index: u64,
    offset: usize,
}

impl StreamCursor {
    pub fn new(spec: CompositionSpec, alphabet: Alphabet, order: DigitOrder, arith: Arith) -> Self {
        Self::resume(spec, alphabet, order, arith, CursorPosition::START).expect("the start position is always valid")
    }

    /// Reopens a stream at a saved position.
    pub fn resume(
        spec: CompositionSpec,
        alphabet: Alphabet,
        order: DigitOrder,
        arith: Arith,
        pos: CursorPosition,
    ) -> Result<Self> {
        if pos.index == 0 {
            return Err(Error::InvalidInput("stream indices start at 1".into()));
        }
        let source = spec.sources_from(pos.index);
        let mut cursor = StreamCursor {
            spec,
            alphabet,
            order,
            arith,
            source,
            pending: VecDeque::new(),
            batch: 64,
            word: Vec::new(),
            word_index: pos.index - 1,
            offset: 0,
        };
        if pos.offset > 0 {
            let w = cursor.next_word()?;
            if pos.offset >= w.digits.len() {
                return Err(Error::InvalidInput(format!(
                    "offset {} is past the end of word {} ({} digits)",
                    pos.offset,
                    pos.index,
                    w.digits.len()
                )));
            }
            cursor.word = w.digits;
            cursor.offset = pos.offset;
        }
        Ok(cursor)
    }

    pub fn spec(&self) -> &CompositionSpec {
        &self.spec
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn order(&self) -> DigitOrder {
        self.order
    }

    pub fn position(&self) -> CursorPosition {
        if self.offset < self.word.len() {
            CursorPosition { index: self.word_index, offset: self.offset }
        } else {
            CursorPosition { index: self.word_index + 1, offset: 0 }
        }
    }

    fn refill(&mut self) -> Result<()> {
        let args: Vec<u64> = self.source.by_ref().take(self.batch).collect();
        if args.is_empty() {
            return Err(Error::Overflow("domain exhausted u64"));
        }
        let max_arg = args.iter().copied().max().unwrap_or(1);
        if max_arg <= AUTO_SIEVE_CAP {
            self.arith.ensure(max_arg)?;
        }
        let spec = &self.spec;
        let arith = &self.arith;
        let values: Vec<Result<u64>> = args.par_iter().map(|&a| spec.eval_argument(a, arith)).collect();
        self.pending.extend(values);
        self.batch = (self.batch * 2).min(MAX_BATCH);
        Ok(())
    }

    /// Evaluates the next value `f(index)`, skipping any digits of the
    /// current word that were not yet emitted.
    pub fn next_value(&mut self) -> Result<(u64, u64)> {
        if self.pending.is_empty() {
            self.refill()?;
        }
        let value = self.pending.pop_front().expect("refill produced values")?;
        self.word_index += 1;
        self.word.clear();
        self.offset = 0;
        Ok((self.word_index, value))
    }

    /// The next whole word. Any unemitted remainder of the current word is skipped.
    pub fn next_word(&mut self) -> Result<StreamWord> {
        let (index, value) = self.next_value()?;
        if value == 0 {
            return Err(Error::InvalidInput(format!("f({index}) = 0 has no digit word")));
        }
        let mut digits = Vec::new();
        push_digits(value, self.alphabet, self.order, &mut digits);
        self.word.clone_from(&digits);
        self.offset = digits.len();
        Ok(StreamWord { index, value, digits })
    }

    pub fn next_digit(&mut self) -> Result<u8> {
        while self.offset >= self.word.len() {
            let w = self.next_word()?;
            self.word = w.digits;
            self.offset = 0;
        }
        let d = self.word[self.offset];
        self.offset += 1;
        Ok(d)
    }

    /// The next `count` digits.
    pub fn take_digits(&mut self, count: usize) -> Result<Vec<u8>> {
        let mut out = Vec::with_capacity(count);
        while out.len() < count {
            if self.offset >= self.word.len() {
                let w = self.next_word()?;
                self.word = w.digits;
                self.offset = 0;
            }
            let take = (count - out.len()).min(self.word.len() - self.offset);
            out.extend_from_slice(&self.word[self.offset..self.offset + take]);
            self.offset += take;
        }
        Ok(out)
    }
}

impl Iterator for StreamCursor {
    type Item = Result<u8>;

    fn next(&mut self) -> Option<Result<u8>> {
        Some(self.next_digit())
    }
}

/// Digit stream of the spec with a default factorization context.
pub fn stream_digits(spec: &CompositionSpec, alphabet: Alphabet, order: DigitOrder) -> Result<StreamCursor> {
    Ok(StreamCursor::new(spec.clone(), alphabet, order, Arith::with_limit(1 << 16)?))
}

/// Where a truncation falls relative to the last word it touches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "cut", rename_all = "kebab-case")]
pub enum Cut {
    /// The prefix ends exactly at the end of word `n`.
    Flush,
    /// Only the first `visible` of `word_len` digits of word `n` are kept.
    MidWord { visible: usize, word_len: usize },
}

/// The length-`N` prefix `a_{f,N}` and the index `n` of the word it ends in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Truncation {
    pub digits: Vec<u8>,
    pub final_index: u64,
    pub cut: Cut,
}

pub fn truncate(
    spec: &CompositionSpec,
    alphabet: Alphabet,
    order: DigitOrder,
    len: usize,
    arith: &Arith,
) -> Result<Truncation> {
    if len == 0 {
        return Err(Error::InvalidInput("truncation length must be >= 1".into()));
    }
    let mut cursor = StreamCursor::new(spec.clone(), alphabet, order, arith.clone());
    let mut digits = Vec::with_capacity(len);
    loop {
        let w = cursor.next_word()?;
        let room = len - digits.len();
        if w.digits.len() >= room {
            digits.extend_from_slice(&w.digits[..room]);
            let cut = if w.digits.len() == room {
                Cut::Flush
            } else {
                Cut::MidWord { visible: room, word_len: w.digits.len() }
            };
            return Ok(Truncation { digits, final_index: w.index, cut });
        }
        digits.extend_from_slice(&w.digits);
    }
}

/// Digits of the words with indices in `[start, end)`, for stitching
/// independently generated ranges.
pub fn range_digits(
    spec: &CompositionSpec,
    alphabet: Alphabet,
    order: DigitOrder,
    start: u64,
    end: u64,
    arith: &Arith,
) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    if end <= start {
        return Ok(out);
    }
    let mut cursor =
        StreamCursor::resume(spec.clone(), alphabet, order, arith.clone(), CursorPosition { index: start, offset: 0 })?;
    for _ in start..end {
        out.extend_from_slice(&cursor.next_word()?.digits);
    }
    Ok(out)
}
