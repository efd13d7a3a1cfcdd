use std::f64::consts::PI;

use anyhow::{anyhow, Result};
use clap::ValueEnum;
use qbench_core::bench::{
    gen_513_encoder, gen_adder, gen_identity_sequence, gen_single_qubit_reference, gen_singlet,
    gen_surface_code_case, identity_table_rows, AdderInput, BenchmarkCase, RegisterSpread, SingletParams,
    SurfaceVariant,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Singlet,
    Adder,
    Identity,
    Surface,
    Code513,
    All,
}

impl Suite {
    pub const EACH: [Suite; 5] = [Suite::Singlet, Suite::Adder, Suite::Identity, Suite::Surface, Suite::Code513];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Singlet => "singlet",
            Suite::Adder => "adder",
            Suite::Identity => "identity",
            Suite::Surface => "surface",
            Suite::Code513 => "code513",
            Suite::All => "all",
        }
    }

    pub fn expand(self) -> Vec<Suite> {
        match self {
            Suite::All => Suite::EACH.to_vec(),
            one => vec![one],
        }
    }
}

/// Angles of the two correlator scans: `θ1 = 0` with `θ2` swept, then `θ1 = θ2` swept.
pub fn singlet_angles() -> Vec<(f64, f64)> {
    let steps: Vec<f64> = (0..=16).map(|k| 2.0 * PI * k as f64 / 16.0).collect();
    let mut out: Vec<(f64, f64)> = steps.iter().map(|&t| (0.0, t)).collect();
    out.extend(steps.iter().skip(1).map(|&t| (t, t)));
    out
}

pub fn suite_cases(suite: Suite) -> Result<Vec<BenchmarkCase>> {
    let mut cases = Vec::new();
    match suite {
        Suite::All => {
            for s in Suite::EACH {
                cases.extend(suite_cases(s)?);
            }
        }
        Suite::Singlet => {
            for (theta1, theta2) in singlet_angles() {
                cases.push(gen_singlet(SingletParams { theta1, theta2 })?);
            }
        }
        Suite::Adder => {
            for a in 0..4 {
                for b in 0..4 {
                    cases.push(gen_adder(AdderInput::basis(a, b))?);
                }
            }
            let spread = |a, b, spread_a, spread_b| AdderInput { a, b, spread_a, spread_b };
            cases.push(gen_adder(spread(0, 0, RegisterSpread::Low, RegisterSpread::None))?);
            cases.push(gen_adder(spread(1, 0, RegisterSpread::None, RegisterSpread::Mirror))?);
            cases.push(gen_adder(spread(1, 0, RegisterSpread::High, RegisterSpread::Mirror))?);
        }
        Suite::Identity => {
            for spec in identity_table_rows() {
                cases.push(gen_identity_sequence(&spec)?);
            }
        }
        Suite::Surface => {
            for variant in [SurfaceVariant::PreEncodeT, SurfaceVariant::LogicalX] {
                for k in 0..=8 {
                    cases.push(gen_surface_code_case(k, variant)?);
                    cases.push(gen_single_qubit_reference(k, variant)?);
                }
            }
        }
        Suite::Code513 => {
            cases.push(gen_513_encoder(0)?);
            cases.push(gen_513_encoder(1)?);
        }
    }
    Ok(cases)
}

pub fn find_case(name: &str) -> Result<BenchmarkCase> {
    suite_cases(Suite::All)?
        .into_iter()
        .find(|c| c.name == name)
        .ok_or_else(|| anyhow!("unknown case `{name}`"))
}
