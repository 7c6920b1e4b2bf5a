//! Digit streams `0.f(1)f(2)f(3)...` built from compositions of arithmetic
//! functions, together with the machinery for measuring how normal they look:
//! occurrence counts of digit blocks, `(eps, k)`-normality of integers,
//! streaming k-gram counters, and censuses of the exceptional sets that the
//! normality argument has to keep small.

pub mod arith;
pub mod error;
pub mod experiments;
pub mod ngram;
pub mod report;
pub mod wordstream;

pub use error::{Error, Result};
