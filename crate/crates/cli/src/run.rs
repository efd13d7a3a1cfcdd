use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use qbench_core::analysis::{verdict, Verdict, VerdictClass};
use qbench_core::bench::{postselect, singlet_correlators, BenchmarkCase};
use qbench_core::qasm::serialize;
use qbench_core::sim::{run_noisy, sample, Channel, CountsTable, NoiseModel};
use qbench_core::transpile::{route_with, RouteOptions};
use qbench_core::Device;
use rayon::prelude::*;
use serde::Serialize;

use crate::cases::{suite_cases, Suite};
use crate::store::{self, RunMeta, RunRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Backend {
    Ideal,
    Noisy,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    #[arg(long, value_enum, default_value = "ideal")]
    pub backend: Backend,
    #[arg(long, default_value_t = 8192)]
    pub shots: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Per-gate success probability for the noisy backend.
    #[arg(long, default_value_t = 0.95)]
    pub p_correct: f64,
    #[arg(long, default_value = "bitflip")]
    pub channel: Channel,
    /// Route every case onto this device (built-in name or JSON file) before running.
    #[arg(long)]
    pub coupling: Option<String>,
    #[arg(long, env = "QBENCH_OUT", default_value = "qbench-out")]
    pub out: PathBuf,
    #[arg(long, default_value_t = qbench_core::analysis::DEFAULT_K_SE)]
    pub k_se: f64,
}

#[derive(Debug, Serialize)]
struct CaseOutcome {
    case: String,
    verdict: VerdictClass,
    top_state: Option<String>,
    top_frequency: Option<f64>,
    dir: PathBuf,
}

#[derive(Debug, Serialize)]
struct VerdictDocument<'a> {
    case: &'a str,
    verdict: &'a Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    postselection: Option<qbench_core::bench::PostSelection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    correlators: Option<qbench_core::bench::CorrelatorSet>,
}

#[derive(Debug, Serialize)]
struct Summary<'a> {
    suite: &'a str,
    backend: &'a str,
    shots: u64,
    seed: u64,
    cases: &'a [CaseOutcome],
    failures: Vec<&'a str>,
    meta: RunMeta,
}

#[derive(Serialize)]
struct CsvRow {
    theta1: f64,
    theta2: f64,
    f00: f64,
    f01: f64,
    f10: f64,
    f11: f64,
    #[serde(rename = "F1")]
    f1: f64,
    #[serde(rename = "F2")]
    f2: f64,
    #[serde(rename = "F")]
    f: f64,
    #[serde(rename = "E_theory")]
    e_theory: f64,
}

/// Seed of the `index`-th case, spread so neighbouring cases do not share streams.
fn case_seed(seed: u64, index: usize) -> u64 {
    seed ^ (index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

struct RunContext<'a> {
    args: &'a RunArgs,
    device: Option<Device>,
    noise: Option<NoiseModel>,
    stamp: String,
    started: String,
}

fn run_case(ctx: &RunContext, index: usize, case: &BenchmarkCase) -> Result<(CaseOutcome, CountsTable)> {
    let args = ctx.args;
    let mut circuit = case.circuit.clone();
    let mut route = None;
    if let Some(device) = &ctx.device {
        let routed = route_with(&circuit, &device.coupling, RouteOptions { restore_layout: true })
            .with_context(|| format!("routing {}", case.name))?;
        route = Some(serde_json::json!({ "stats": routed.stats, "layout": routed.layout.as_slice() }));
        circuit = routed.circuit;
    }
    let seed = case_seed(args.seed, index);
    let mut counts = match &ctx.noise {
        None => sample(&circuit, args.shots, seed)?,
        Some(noise) => run_noisy(&circuit, noise, args.shots, seed)?,
    };
    counts.circuit_name = case.name.clone();

    let v = verdict(&counts, &case.oracle, args.k_se);
    let postselection = match &case.postselect {
        Some(table) => postselect(&counts, table).ok(),
        None => None,
    };
    let correlators = if case.suite == "singlet" { singlet_correlators(&counts).ok() } else { None };

    let dir = store::new_run_dir(&args.out, &case.suite, &case.name, &ctx.stamp)?;
    store::write(&dir, store::CIRCUIT_FILE, &serialize(&circuit))?;
    store::write(&dir, store::COUNTS_FILE, &(counts.to_json() + "\n"))?;
    store::write(&dir, store::ORACLE_FILE, &(case.oracle.to_json() + "\n"))?;
    store::write_json(
        &dir,
        store::VERDICT_FILE,
        &VerdictDocument { case: &case.name, verdict: &v, postselection, correlators },
    )?;
    let record = RunRecord {
        case: case.name.clone(),
        suite: case.suite.clone(),
        backend: counts.backend.clone(),
        shots: counts.shots,
        seed: Some(seed),
        params: case.params.clone(),
        counts_file: store::COUNTS_FILE.into(),
        verdict: serde_json::to_value(v.class)?.as_str().unwrap_or_default().to_string(),
        color: v.color.to_string(),
        route,
        meta: RunMeta {
            started: ctx.started.clone(),
            finished: store::iso(chrono::Utc::now()),
            tool_version: env!("CARGO_PKG_VERSION").into(),
        },
    };
    store::write_json(&dir, store::RUN_FILE, &record)?;
    let top = v.top_states.first();
    Ok((
        CaseOutcome {
            case: case.name.clone(),
            verdict: v.class,
            top_state: top.map(|t| t.0.clone()),
            top_frequency: top.map(|t| t.1),
            dir,
        },
        counts,
    ))
}

fn write_singlet_csv(path: &Path, cases: &[BenchmarkCase], counts: &[CountsTable]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("writing {}", path.display()))?;
    for (case, table) in cases.iter().zip(counts) {
        let theta1 = case.params["theta1"].as_f64().unwrap_or_default();
        let theta2 = case.params["theta2"].as_f64().unwrap_or_default();
        let c = singlet_correlators(table)?;
        let [f00, f01, f10, f11] = c.freqs;
        w.serialize(CsvRow {
            theta1,
            theta2,
            f00,
            f01,
            f10,
            f11,
            f1: c.f1,
            f2: c.f2,
            f: c.f,
            e_theory: -(theta1 - theta2).cos(),
        })?;
    }
    w.flush()?;
    Ok(())
}

/// Runs every case of the chosen suites. Returns whether all verdicts were `Correct`.
pub fn cmd_run(args: &RunArgs) -> Result<bool> {
    if args.shots == 0 {
        bail!("--shots must be at least 1");
    }
    let noise = match args.backend {
        Backend::Ideal => None,
        Backend::Noisy => Some(NoiseModel::new(args.p_correct, args.channel)?),
    };
    let device = args.coupling.as_deref().map(Device::load).transpose()?;
    let now = chrono::Utc::now();
    let ctx = RunContext {
        args,
        device,
        noise,
        stamp: store::stamp(now),
        started: store::iso(now),
    };
    let mut all_correct = true;
    let mut failures_out = Vec::new();
    for suite in args.suite.expand() {
        let cases = suite_cases(suite)?;
        let results: Vec<(CaseOutcome, CountsTable)> = cases
            .par_iter()
            .enumerate()
            .map(|(i, case)| run_case(&ctx, i, case))
            .collect::<Result<_>>()?;
        let (outcomes, tables): (Vec<CaseOutcome>, Vec<CountsTable>) = results.into_iter().unzip();

        for o in &outcomes {
            println!(
                "{:<24} {:<32} top={} f={:.4}",
                serde_json::to_value(o.verdict)?.as_str().unwrap_or_default(),
                o.case,
                o.top_state.as_deref().unwrap_or("-"),
                o.top_frequency.unwrap_or(0.0),
            );
        }
        let failures: Vec<&str> = outcomes
            .iter()
            .filter(|o| o.verdict != VerdictClass::Correct)
            .map(|o| o.case.as_str())
            .collect();
        println!("{}: {} of {} correct", suite.name(), outcomes.len() - failures.len(), outcomes.len());

        let suite_dir = args.out.join(suite.name());
        fs::create_dir_all(&suite_dir)?;
        if suite == Suite::Singlet {
            write_singlet_csv(&suite_dir.join(format!("correlators-{}.csv", ctx.stamp)), &cases, &tables)?;
        }
        all_correct &= failures.is_empty();
        failures_out.extend(failures.iter().map(|f| format!("{}/{f}", suite.name())));
        let summary = Summary {
            suite: suite.name(),
            backend: match args.backend {
                Backend::Ideal => "ideal",
                Backend::Noisy => "noisy",
            },
            shots: args.shots,
            seed: args.seed,
            cases: &outcomes,
            failures,
            meta: RunMeta {
                started: ctx.started.clone(),
                finished: store::iso(chrono::Utc::now()),
                tool_version: env!("CARGO_PKG_VERSION").into(),
            },
        };
        store::write_json(&suite_dir, &format!("summary-{}.json", ctx.stamp), &summary)?;
    }
    if !failures_out.is_empty() {
        eprintln!("{}", serde_json::json!({ "failures": failures_out }));
    }
    Ok(all_correct)
}
