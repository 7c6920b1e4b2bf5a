//! `key=value` run configuration files. Each key mirrors a command-line
//! flag of the same name; flags given on the command line win.

use std::fmt;

use normcat::wordstream::DigitOrder;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunConfig {
    pub base: Option<u32>,
    pub k: Option<usize>,
    pub order: Option<DigitOrder>,
    pub digits: Option<u64>,
    pub limit: Option<u64>,
    /// Chain string, e.g. `phi.sigma`.
    pub f: Option<String>,
    pub domain: Option<String>,
    pub eps: Option<f64>,
    /// Output path for the JSON report.
    pub report: Option<String>,
    /// SPF cache path.
    pub cache: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigError {
    pub line: usize,
    pub reason: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config line {}: {}", self.line, self.reason)
    }
}

impl std::error::Error for ConfigError {}

impl RunConfig {
    /// Key/value pairs in canonical order, unset keys omitted.
    pub fn entries(&self) -> Vec<(&'static str, String)> {
        let mut out = Vec::new();
        let mut put = |key, value: Option<String>| {
            if let Some(v) = value {
                out.push((key, v));
            }
        };
        put("base", self.base.map(|v| v.to_string()));
        put("k", self.k.map(|v| v.to_string()));
        put("order", self.order.map(|v| v.name().to_string()));
        put("digits", self.digits.map(|v| v.to_string()));
        put("limit", self.limit.map(|v| v.to_string()));
        put("f", self.f.clone());
        put("domain", self.domain.clone());
        put("eps", self.eps.map(|v| v.to_string()));
        put("report", self.report.clone());
        put("cache", self.cache.clone());
        out
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = RunConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |reason: String| ConfigError { line: i + 1, reason };
            let (key, value) = line.split_once('=').ok_or_else(|| err(format!("expected key=value, got `{line}`")))?;
            let (key, value) = (key.trim(), value.trim());
            let num = |what: &str| err(format!("`{value}` is not a valid {what}"));
            match key {
                "base" => cfg.base = Some(value.parse().map_err(|_| num("base"))?),
                "k" => cfg.k = Some(value.parse().map_err(|_| num("k"))?),
                "order" => cfg.order = Some(DigitOrder::parse(value).ok_or_else(|| num("order"))?),
                "digits" => cfg.digits = Some(value.parse().map_err(|_| num("digit count"))?),
                "limit" => cfg.limit = Some(value.parse().map_err(|_| num("limit"))?),
                "f" => cfg.f = Some(value.to_string()),
                "domain" => cfg.domain = Some(value.to_string()),
                "eps" => cfg.eps = Some(value.parse().map_err(|_| num("epsilon"))?),
                "report" => cfg.report = Some(value.to_string()),
                "cache" => cfg.cache = Some(value.to_string()),
                _ => return Err(err(format!("unknown key `{key}`"))),
            }
        }
        Ok(cfg)
    }

    /// The configuration as `--key value` flags.
    pub fn to_args(&self) -> Vec<String> {
        self.entries().into_iter().flat_map(|(k, v)| [format!("--{k}"), v]).collect()
    }
}

impl fmt::Display for RunConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.entries() {
            writeln!(f, "{k}={v}")?;
        }
        Ok(())
    }
}
