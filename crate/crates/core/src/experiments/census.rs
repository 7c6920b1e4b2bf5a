use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// One checkpoint of a census.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusRow {
    pub x: u64,
    pub observed: u64,
    /// Closed-form comparison value at `x`; `null` when it does not fit in a double.
    pub bound: Option<f64>,
    /// `observed / bound` for bounds with an unknown implied constant.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ratio: Option<f64>,
    /// Whether the observation satisfies the report's verdict rule; absent
    /// for ratio-only reports.
    pub verdict: Option<bool>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub breakdown: BTreeMap<String, u64>,
}

/// Result of one census experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusReport {
    pub schema: u32,
    pub experiment: String,
    pub spec: String,
    pub parameters: BTreeMap<String, String>,
    pub bound_formula: String,
    pub verdict_rule: String,
    pub rows: Vec<CensusRow>,
    pub note: String,
}

impl CensusReport {
    pub(crate) fn new(experiment: &str, spec: String, bound_formula: &str, verdict_rule: &str) -> Self {
        CensusReport {
            schema: crate::report::SCHEMA_VERSION,
            experiment: experiment.to_string(),
            spec,
            parameters: BTreeMap::new(),
            bound_formula: bound_formula.to_string(),
            verdict_rule: verdict_rule.to_string(),
            rows: Vec::new(),
            note: crate::report::DETERMINISM_NOTE.to_string(),
        }
    }

    pub(crate) fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }

    pub fn row(&self, x: u64) -> Option<&CensusRow> {
        self.rows.iter().find(|r| r.x == x)
    }

    /// True when every row with a verdict passes.
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.verdict != Some(false))
    }

    pub fn to_csv(&self) -> String {
        let keys: Vec<&String> = self.rows.first().map(|r| r.breakdown.keys().collect()).unwrap_or_default();
        let mut out = String::from("x,observed,bound,ratio,verdict");
        for k in &keys {
            out.push(',');
            out.push_str(k);
        }
        out.push('\n');
        let opt = |v: Option<f64>| v.map(|f| f.to_string()).unwrap_or_default();
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{}",
                r.x,
                r.observed,
                opt(r.bound),
                opt(r.ratio),
                r.verdict.map(|v| v.to_string()).unwrap_or_default()
            ));
            for k in &keys {
                out.push_str(&format!(",{}", r.breakdown.get(*k).copied().unwrap_or(0)));
            }
            out.push('\n');
        }
        out
    }
}
