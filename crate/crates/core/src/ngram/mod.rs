//! Streaming k-block statistics of concatenation streams.

pub mod classify;
pub mod counter;
pub mod frequency;
pub mod table;

pub use classify::{
    classify_interval, classify_range, fit_meager_exponent, meager_report, non_normal_census, MeagerFit, MeagerReport,
    MeagerRow,
};
pub use counter::{count_digits_parallel, count_with_cuts, KGramCounter};
pub use frequency::{count_stream, CountOptions, FrequencyReport, WordFrequency};
