use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Args;
use qbench_core::analysis::{stationarity, StationarityReport, StationarityVerdict, DEFAULT_K_SE};
use qbench_core::sim::{CountsTable, UNDATED};
use serde::Serialize;

use crate::store::{self, RunRecord};

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// History directory written by `run` or `ingest`; defaults to `--out`.
    pub history: Option<PathBuf>,
    #[arg(long, env = "QBENCH_OUT", default_value = "qbench-out")]
    pub out: PathBuf,
    /// Check that repeated runs of each case agree.
    #[arg(long)]
    pub stationarity: bool,
    /// Print the report as JSON.
    #[arg(long)]
    pub json: bool,
    #[arg(long, default_value_t = DEFAULT_K_SE)]
    pub k_se: f64,
}

#[derive(Debug, Serialize)]
struct HistoryRow {
    run: String,
    date: String,
    verdict: String,
    top_state: String,
    top_frequency: f64,
    shots: u64,
}

#[derive(Debug, Serialize)]
struct CaseHistory {
    suite: String,
    case: String,
    backend: String,
    runs: Vec<HistoryRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    stationarity: Option<StationarityReport>,
}

fn top(counts: &CountsTable) -> (String, f64) {
    counts
        .counts
        .iter()
        .max_by(|a, b| a.1.cmp(b.1).then_with(|| b.0.cmp(a.0)))
        .map(|(k, &n)| (k.clone(), n as f64 / counts.shots as f64))
        .unwrap_or_default()
}

/// Returns `Ok(false)` when some case is non-stationary.
pub fn cmd_report(args: &ReportArgs) -> Result<bool> {
    let root = args.history.as_ref().unwrap_or(&args.out);
    let history = store::load_history(root)?;
    if history.is_empty() {
        bail!("no run records under {}", root.display());
    }
    let mut groups: BTreeMap<(String, String, String), Vec<(PathBuf, RunRecord, CountsTable)>> = BTreeMap::new();
    for (dir, record) in history {
        let path = dir.join(&record.counts_file);
        let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
        let mut counts = CountsTable::from_json(&text).with_context(|| format!("parsing {}", path.display()))?;
        if counts.date == UNDATED {
            counts.date = record.meta.started.clone();
        }
        let key = (record.suite.clone(), record.case.clone(), record.backend.clone());
        groups.entry(key).or_default().push((dir, record, counts));
    }

    let mut all_stationary = true;
    let mut report = Vec::new();
    for ((suite, case, backend), mut runs) in groups {
        runs.sort_by(|a, b| a.2.date.cmp(&b.2.date).then_with(|| a.0.cmp(&b.0)));
        let rows = runs
            .iter()
            .map(|(dir, record, counts)| {
                let (top_state, top_frequency) = top(counts);
                HistoryRow {
                    run: dir.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default(),
                    date: counts.date.clone(),
                    verdict: record.verdict.clone(),
                    top_state,
                    top_frequency,
                    shots: counts.shots,
                }
            })
            .collect();
        let stationarity = if args.stationarity {
            let tables: Vec<CountsTable> = runs.iter().map(|r| r.2.clone()).collect();
            let s = stationarity(&tables, args.k_se)?;
            all_stationary &= s.verdict != StationarityVerdict::NonStationary;
            Some(s)
        } else {
            None
        };
        report.push(CaseHistory { suite, case, backend, runs: rows, stationarity });
    }

    if args.json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        for h in &report {
            println!("{}/{} [{}]", h.suite, h.case, h.backend);
            for r in &h.runs {
                println!(
                    "  {:<28} {:<24} top={} f={:.4} N={}",
                    r.date, r.verdict, r.top_state, r.top_frequency, r.shots
                );
            }
            if let Some(s) = &h.stationarity {
                let verdict = serde_json::to_value(s.verdict)?;
                println!(
                    "  stationarity: {} (max delta {:.4}, bound {:.4}, same top state: {})",
                    verdict.as_str().unwrap_or_default(),
                    s.max_delta,
                    s.threshold,
                    s.same_top_state
                );
            }
        }
    }
    Ok(all_stationary)
}
