//! Raw digit dump.
//!
//! Header: the four bytes `NFDG`, the base as a little-endian `u16`, one
//! order byte (`0` = most significant first, `1` = least significant first),
//! and the digit count as a little-endian `u64`. The body is one byte per digit.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::wordstream::word::{Alphabet, DigitOrder};

pub const DIGIT_MAGIC: &[u8; 4] = b"NFDG";
pub const DIGIT_HEADER_LEN: usize = 4 + 2 + 1 + 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigitDump {
    pub alphabet: Alphabet,
    pub order: DigitOrder,
    pub digits: Vec<u8>,
}

pub fn write_digit_header<W: Write>(out: &mut W, alphabet: Alphabet, order: DigitOrder, count: u64) -> Result<()> {
    out.write_all(DIGIT_MAGIC)?;
    out.write_all(&(alphabet.base() as u16).to_le_bytes())?;
    out.write_all(&[match order {
        DigitOrder::MostSignificantFirst => 0,
        DigitOrder::PaperOrder => 1,
    }])?;
    out.write_all(&count.to_le_bytes())?;
    Ok(())
}

pub fn write_digit_dump<W: Write>(mut out: W, alphabet: Alphabet, order: DigitOrder, digits: &[u8]) -> Result<()> {
    write_digit_header(&mut out, alphabet, order, digits.len() as u64)?;
    out.write_all(digits)?;
    out.flush()?;
    Ok(())
}

pub fn read_digit_dump<R: Read>(mut input: R) -> Result<DigitDump> {
    let bad = |reason: String| Error::Format { what: "digit dump", reason };
    let mut header = [0u8; DIGIT_HEADER_LEN];
    input.read_exact(&mut header).map_err(|_| bad("truncated header".into()))?;
    if &header[..4] != DIGIT_MAGIC {
        return Err(bad("bad magic".into()));
    }
    let g = u16::from_le_bytes([header[4], header[5]]) as u32;
    let alphabet = Alphabet::new(g).map_err(|e| bad(e.to_string()))?;
    let order = match header[6] {
        0 => DigitOrder::MostSignificantFirst,
        1 => DigitOrder::PaperOrder,
        other => return Err(bad(format!("unknown order flag {other}"))),
    };
    let count = u64::from_le_bytes(header[7..15].try_into().expect("8 header bytes"));
    let mut digits = Vec::new();
    input.read_to_end(&mut digits)?;
    if digits.len() as u64 != count {
        return Err(bad(format!("header declares {count} digits, body has {}", digits.len())));
    }
    if let Some(&d) = digits.iter().find(|&&d| d as u32 >= g) {
        return Err(Error::InvalidDigit { digit: d as u32, base: g });
    }
    Ok(DigitDump { alphabet, order, digits })
}
