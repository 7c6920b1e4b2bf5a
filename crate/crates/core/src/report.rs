//! Serialized report envelope shared by the library and the CLI.
//!
//! JSON is the full record. CSV is a lossy projection that keeps only the
//! tabular part of each report (rows, or per-block counts) and drops the
//! header fields.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiments::{CensusReport, ExtremalReport, GrowthReport, RepetitionReport};
use crate::ngram::{FrequencyReport, MeagerReport};

pub const SCHEMA_VERSION: u32 = 1;

pub const DETERMINISM_NOTE: &str =
    "seed-free and deterministic: output depends only on the parameters, not on the thread count";

/// Any report the toolkit writes, tagged by `kind`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Report {
    Frequency(FrequencyReport),
    Census(CensusReport),
    Growth(GrowthReport),
    Repetition(RepetitionReport),
    Extremal(ExtremalReport),
    Meager(MeagerReport),
}

impl Report {
    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> Result<String> {
        let mut s =
            serde_json::to_string_pretty(self).map_err(|e| Error::Format { what: "report", reason: e.to_string() })?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let report: Report =
            serde_json::from_str(text).map_err(|e| Error::Format { what: "report", reason: e.to_string() })?;
        if report.schema() != SCHEMA_VERSION {
            return Err(Error::Format {
                what: "report",
                reason: format!("schema {} is not supported (expected {SCHEMA_VERSION})", report.schema()),
            });
        }
        Ok(report)
    }

    pub fn schema(&self) -> u32 {
        match self {
            Report::Frequency(r) => r.schema,
            Report::Census(r) => r.schema,
            Report::Growth(r) => r.schema,
            Report::Repetition(r) => r.schema,
            Report::Extremal(r) => r.schema,
            Report::Meager(r) => r.schema,
        }
    }

    pub fn to_csv(&self) -> String {
        match self {
            Report::Frequency(r) => r.to_csv(),
            Report::Census(r) => r.to_csv(),
            Report::Growth(r) => r.to_csv(),
            Report::Repetition(r) => r.to_csv(),
            Report::Extremal(r) => r.to_csv(),
            Report::Meager(r) => r.to_csv(),
        }
    }
}

impl From<FrequencyReport> for Report {
    fn from(r: FrequencyReport) -> Self {
        Report::Frequency(r)
    }
}

impl From<CensusReport> for Report {
    fn from(r: CensusReport) -> Self {
        Report::Census(r)
    }
}

impl From<GrowthReport> for Report {
    fn from(r: GrowthReport) -> Self {
        Report::Growth(r)
    }
}

impl From<RepetitionReport> for Report {
    fn from(r: RepetitionReport) -> Self {
        Report::Repetition(r)
    }
}

impl From<ExtremalReport> for Report {
    fn from(r: ExtremalReport) -> Self {
        Report::Extremal(r)
    }
}

impl From<MeagerReport> for Report {
    fn from(r: MeagerReport) -> Self {
        Report::Meager(r)
    }
}
