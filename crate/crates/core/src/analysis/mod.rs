//! Turning counts into judgements.
//!
//! Frequencies fluctuate by at most `SE = 1/sqrt(N)` for `N` shots, and two
//! frequencies closer than `k · SE` (default `k = 5`) are treated as equal.

mod fit;

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::bench::Oracle;
use crate::sim::CountsTable;

pub use fit::{fit_pure_state, model_correlators, FitError, FitPoint, PureStateFit};

/// Default multiplier of the standard-error bound.
pub const DEFAULT_K_SE: f64 = 5.0;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("counts table has no shots")]
    Empty,
    #[error("stationarity needs runs of one circuit: {0}")]
    MismatchedRuns(String),
}

/// A frequency kept as the exact ratio `count / shots`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Frequency {
    pub count: u64,
    pub shots: u64,
}

impl Frequency {
    pub fn value(self) -> f64 {
        self.count as f64 / self.shots as f64
    }
}

/// Relative frequency of every recorded outcome. The ratios share one
/// denominator and their numerators sum to it, so the total is exactly 1.
pub fn rel_freqs(counts: &CountsTable) -> Result<BTreeMap<String, Frequency>, AnalysisError> {
    let shots: u64 = counts.counts.values().sum();
    if shots == 0 || counts.shots == 0 {
        return Err(AnalysisError::Empty);
    }
    Ok(counts
        .counts
        .iter()
        .map(|(k, &count)| (k.clone(), Frequency { count, shots }))
        .collect())
}

/// `1/sqrt(N)`.
pub fn se_bound(shots: u64) -> f64 {
    1.0 / (shots as f64).sqrt()
}

/// [`se_bound`] rounded up to three decimals, as quoted in reports.
pub fn reported_se_bound(shots: u64) -> f64 {
    (se_bound(shots) * 1000.0).ceil() / 1000.0
}

/// `|f1 - f2| <= k / sqrt(N)`.
pub fn equal_within(f1: f64, f2: f64, shots: u64, k: f64) -> bool {
    (f1 - f2).abs() <= k * se_bound(shots)
}

/// `p_C^m`: chance that `m` gates with per-gate success `p_C` all succeed.
pub fn predict_success(p_correct: f64, m: u32) -> f64 {
    p_correct.powi(m as i32)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictClass {
    Correct,
    Wrong,
    UnexpectedSuperposition,
    Inconclusive,
}

impl VerdictClass {
    pub fn color(self) -> &'static str {
        match self {
            VerdictClass::Correct => "green",
            VerdictClass::Wrong => "red",
            VerdictClass::UnexpectedSuperposition => "magenta",
            VerdictClass::Inconclusive => "gray",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub class: VerdictClass,
    pub color: &'static str,
    /// Every observed state, most frequent first; equal frequencies in string order.
    pub top_states: Vec<(String, f64)>,
    /// States the oracle singles out, in string order.
    pub expected: Vec<String>,
    /// Top frequency minus runner-up frequency.
    pub margin: f64,
    pub se: f64,
    pub k_se: f64,
    pub shots: u64,
}

impl Verdict {
    fn new(class: VerdictClass, top: Vec<(String, f64)>, expected: Vec<String>, shots: u64, k: f64) -> Self {
        let margin = match top.as_slice() {
            [a, b, ..] => a.1 - b.1,
            [a] => a.1,
            [] => 0.0,
        };
        Verdict {
            class,
            color: class.color(),
            top_states: top,
            expected,
            margin,
            se: if shots > 0 { se_bound(shots) } else { f64::NAN },
            k_se: k,
            shots,
        }
    }

    pub fn is_correct(&self) -> bool {
        self.class == VerdictClass::Correct
    }
}

/// States the oracle expects: those within `k · SE` of its largest probability.
pub fn expected_states(oracle: &Oracle, shots: u64, k: f64) -> Vec<String> {
    let max = oracle.expected.values().cloned().fold(0.0, f64::max);
    let tol = k * se_bound(shots.max(1));
    oracle
        .expected
        .iter()
        .filter(|(_, &p)| p > 0.0 && p >= max - tol)
        .map(|(s, _)| s.clone())
        .collect()
}

/// Classifies counts against an oracle.
///
/// With one expected state: `Correct` when it is the strict top state;
/// `UnexpectedSuperposition` when another state leads but the expected one
/// is within `k · SE` of it, or when the top two are exactly tied;
/// `Wrong` otherwise. With several expected states, `Correct` iff the
/// top-|expected| observed states are exactly those.
pub fn verdict(counts: &CountsTable, oracle: &Oracle, k: f64) -> Verdict {
    let shots: u64 = counts.counts.values().sum();
    let expected = expected_states(oracle, shots, k);
    let mut top: Vec<(String, f64)> = if shots == 0 {
        Vec::new()
    } else {
        counts
            .counts
            .iter()
            .filter(|(_, &c)| c > 0)
            .map(|(s, &c)| (s.clone(), c as f64 / shots as f64))
            .collect()
    };
    top.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));

    if top.is_empty() || expected.is_empty() {
        return Verdict::new(VerdictClass::Inconclusive, top, expected, shots, k);
    }
    let class = if expected.len() == 1 {
        let e = &expected[0];
        let f_top = top[0].1;
        let tied = top.len() > 1 && top[1].1 == f_top;
        let f_e = top.iter().find(|(s, _)| s == e).map_or(0.0, |t| t.1);
        if tied && f_e == f_top {
            VerdictClass::UnexpectedSuperposition
        } else if &top[0].0 == e {
            VerdictClass::Correct
        } else if equal_within(f_e, f_top, shots, k) {
            VerdictClass::UnexpectedSuperposition
        } else {
            VerdictClass::Wrong
        }
    } else {
        let leaders: Vec<&String> = top.iter().take(expected.len()).map(|t| &t.0).collect();
        let mut leaders: Vec<String> = leaders.into_iter().cloned().collect();
        leaders.sort();
        if leaders == expected {
            VerdictClass::Correct
        } else {
            VerdictClass::Wrong
        }
    };
    Verdict::new(class, top, expected, shots, k)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StationarityVerdict {
    Stationary,
    NonStationary,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub date: String,
    pub top_state: String,
    pub top_frequency: f64,
    pub shots: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StationarityReport {
    pub runs: Vec<RunSummary>,
    /// `(i, j, |f_i - f_j|)` over top-state frequencies, `i < j`.
    pub deltas: Vec<(usize, usize, f64)>,
    pub max_delta: f64,
    pub threshold: f64,
    pub same_top_state: bool,
    pub verdict: StationarityVerdict,
    pub k_se: f64,
}

fn top_of(t: &CountsTable) -> (String, f64) {
    let shots: u64 = t.counts.values().sum();
    t.counts
        .iter()
        .max_by(|a, b| a.1.cmp(b.1).then_with(|| b.0.cmp(a.0)))
        .map(|(s, &c)| (s.clone(), c as f64 / shots.max(1) as f64))
        .unwrap_or_default()
}

/// Checks that repeated runs agree: the same top state, and top-state
/// frequencies pairwise within `k · SE` for the smallest shot count.
pub fn stationarity(records: &[CountsTable], k: f64) -> Result<StationarityReport, AnalysisError> {
    if let Some(first) = records.first() {
        for r in records {
            if r.width() != first.width() {
                return Err(AnalysisError::MismatchedRuns(format!(
                    "widths {} and {}",
                    first.width(),
                    r.width()
                )));
            }
            if !r.circuit_name.is_empty() && !first.circuit_name.is_empty() && r.circuit_name != first.circuit_name {
                return Err(AnalysisError::MismatchedRuns(format!(
                    "`{}` and `{}`",
                    first.circuit_name, r.circuit_name
                )));
            }
        }
    }
    let runs: Vec<RunSummary> = records
        .iter()
        .map(|r| {
            let (top_state, top_frequency) = top_of(r);
            RunSummary {
                date: r.date.clone(),
                top_state,
                top_frequency,
                shots: r.shots,
            }
        })
        .collect();
    let mut deltas = Vec::new();
    for i in 0..runs.len() {
        for j in i + 1..runs.len() {
            deltas.push((i, j, (runs[i].top_frequency - runs[j].top_frequency).abs()));
        }
    }
    let max_delta = deltas.iter().map(|d| d.2).fold(0.0, f64::max);
    let min_shots = runs.iter().map(|r| r.shots).min().unwrap_or(1).max(1);
    let threshold = k * se_bound(min_shots);
    let same_top_state = runs.windows(2).all(|w| w[0].top_state == w[1].top_state);
    let verdict = if runs.len() < 2 {
        StationarityVerdict::Inconclusive
    } else if same_top_state && max_delta <= threshold {
        StationarityVerdict::Stationary
    } else {
        StationarityVerdict::NonStationary
    };
    Ok(StationarityReport {
        runs,
        deltas,
        max_delta,
        threshold,
        same_top_state,
        verdict,
        k_se: k,
    })
}
