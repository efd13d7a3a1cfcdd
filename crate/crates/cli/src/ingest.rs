use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Args;
use qbench_core::analysis::{reported_se_bound, se_bound, verdict, VerdictClass, DEFAULT_K_SE};
use qbench_core::bench::Oracle;
use qbench_core::sim::CountsTable;
use serde::Serialize;

use crate::cases::find_case;
use crate::store::{self, RunMeta, RunRecord};

#[derive(Debug, Args)]
pub struct IngestArgs {
    /// Counts table in the JSON counts schema.
    pub counts: PathBuf,
    /// Judge against a generated case by name.
    #[arg(long, conflicts_with = "oracle", required_unless_present = "oracle")]
    pub case: Option<String>,
    /// Judge against an oracle JSON document instead of a named case.
    #[arg(long)]
    pub oracle: Option<PathBuf>,
    /// Name to file the run under when `--oracle` is used.
    #[arg(long, requires = "oracle")]
    pub name: Option<String>,
    #[arg(long, env = "QBENCH_OUT", default_value = "qbench-out")]
    pub out: PathBuf,
    #[arg(long, default_value_t = DEFAULT_K_SE)]
    pub k_se: f64,
}

#[derive(Debug, Serialize)]
struct IngestReport<'a> {
    case: &'a str,
    backend: &'a str,
    date: &'a str,
    shots: u64,
    verdict: &'a qbench_core::analysis::Verdict,
    frequencies: BTreeMap<&'a str, f64>,
    se: f64,
    reported_se: f64,
    /// Top minus runner-up frequency in units of SE.
    margin_se: f64,
}

pub fn cmd_ingest(args: &IngestArgs) -> Result<bool> {
    let text = fs::read_to_string(&args.counts).with_context(|| format!("reading {}", args.counts.display()))?;
    let counts = CountsTable::from_json(&text)?;

    let (suite, name, oracle, params) = match (&args.case, &args.oracle) {
        (Some(name), _) => {
            let case = find_case(name)?;
            (case.suite, case.name, case.oracle, case.params)
        }
        (None, Some(path)) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let oracle: Oracle = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
            let name = args
                .name
                .clone()
                .or_else(|| path.file_stem().map(|s| s.to_string_lossy().into_owned()))
                .unwrap_or_else(|| "external".into());
            ("ingest".to_string(), name, oracle, serde_json::Value::Null)
        }
        (None, None) => bail!("either --case or --oracle is required"),
    };
    if oracle.width() != counts.width() {
        bail!("counts have {} bits but the oracle expects {}", counts.width(), oracle.width());
    }

    let v = verdict(&counts, &oracle, args.k_se);
    let se = se_bound(counts.shots);
    let report = IngestReport {
        case: &name,
        backend: &counts.backend,
        date: &counts.date,
        shots: counts.shots,
        verdict: &v,
        frequencies: counts
            .counts
            .iter()
            .map(|(k, &n)| (k.as_str(), n as f64 / counts.shots as f64))
            .collect(),
        se,
        reported_se: reported_se_bound(counts.shots),
        margin_se: v.margin / se,
    };
    println!("{}", serde_json::to_string_pretty(&report)?);

    let now = chrono::Utc::now();
    let dir = store::new_run_dir(&args.out, &suite, &name, &store::stamp(now))?;
    store::write(&dir, store::COUNTS_FILE, &(counts.to_json() + "\n"))?;
    store::write(&dir, store::ORACLE_FILE, &(oracle.to_json() + "\n"))?;
    store::write_json(&dir, store::VERDICT_FILE, &report)?;
    let record = RunRecord {
        case: name.clone(),
        suite,
        backend: counts.backend.clone(),
        shots: counts.shots,
        seed: counts.seed,
        params,
        counts_file: store::COUNTS_FILE.into(),
        verdict: serde_json::to_value(v.class)?.as_str().unwrap_or_default().to_string(),
        color: v.color.into(),
        route: None,
        meta: RunMeta {
            started: store::iso(now),
            finished: store::iso(chrono::Utc::now()),
            tool_version: env!("CARGO_PKG_VERSION").into(),
        },
    };
    store::write_json(&dir, store::RUN_FILE, &record)?;
    Ok(v.class == VerdictClass::Correct)
}
