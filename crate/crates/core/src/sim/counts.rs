use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CountsError {
    #[error("counts document is not valid JSON for the schema: {0}")]
    Schema(String),
    #[error("shots must be at least 1")]
    NoShots,
    #[error("counts sum to {sum} but shots is {shots}")]
    ShotsMismatch { sum: u64, shots: u64 },
    #[error("bitstring `{0}` must contain only 0 and 1")]
    BadBitstring(String),
    #[error("bitstrings have different lengths ({0} and {1})")]
    MixedWidths(usize, usize),
    #[error("no outcomes recorded")]
    Empty,
}

/// Aggregated measurement outcomes of `shots` runs of one circuit.
///
/// Keys put classical bit 0 in the rightmost character. The JSON form is
/// also the ingestion format for counts taken on external hardware.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountsTable {
    pub backend: String,
    /// `YYYY-MM-DDTHH:MM:SSZ`.
    pub date: String,
    pub shots: u64,
    pub seed: Option<u64>,
    pub counts: BTreeMap<String, u64>,
    pub circuit_name: String,
}

/// Placeholder date for tables whose run time is not known.
pub const UNDATED: &str = "1970-01-01T00:00:00Z";

impl CountsTable {
    /// Builds and validates a table; `shots` is the sum of the counts.
    pub fn new(
        backend: impl Into<String>,
        circuit_name: impl Into<String>,
        seed: Option<u64>,
        counts: BTreeMap<String, u64>,
    ) -> Result<Self, CountsError> {
        let table = CountsTable {
            backend: backend.into(),
            date: UNDATED.to_string(),
            shots: counts.values().sum(),
            seed,
            counts,
            circuit_name: circuit_name.into(),
        };
        table.validate()?;
        Ok(table)
    }

    /// Convenience constructor from `(bitstring, count)` pairs.
    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, u64)>) -> Result<Self, CountsError> {
        let mut counts = BTreeMap::new();
        for (k, v) in pairs {
            *counts.entry(k.to_string()).or_insert(0) += v;
        }
        CountsTable::new("fixture", "", None, counts)
    }

    pub fn validate(&self) -> Result<(), CountsError> {
        if self.shots == 0 {
            return Err(CountsError::NoShots);
        }
        if self.counts.is_empty() {
            return Err(CountsError::Empty);
        }
        let mut width = None;
        for k in self.counts.keys() {
            if k.is_empty() || !k.chars().all(|c| c == '0' || c == '1') {
                return Err(CountsError::BadBitstring(k.clone()));
            }
            match width {
                None => width = Some(k.len()),
                Some(w) if w != k.len() => return Err(CountsError::MixedWidths(w, k.len())),
                _ => {}
            }
        }
        let sum: u64 = self.counts.values().sum();
        if sum != self.shots {
            return Err(CountsError::ShotsMismatch {
                sum,
                shots: self.shots,
            });
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self, CountsError> {
        let table: CountsTable = serde_json::from_str(text).map_err(|e| CountsError::Schema(e.to_string()))?;
        table.validate()?;
        Ok(table)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    /// Number of measured bits (length of every key).
    pub fn width(&self) -> usize {
        self.counts.keys().next().map_or(0, String::len)
    }

    pub fn count(&self, bitstring: &str) -> u64 {
        self.counts.get(bitstring).copied().unwrap_or(0)
    }

    /// Same table with every count multiplied by `factor`.
    pub fn scaled(&self, factor: u64) -> CountsTable {
        let mut t = self.clone();
        for v in t.counts.values_mut() {
            *v *= factor;
        }
        t.shots *= factor;
        t
    }
}
