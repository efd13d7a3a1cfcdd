use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Args;
use qbench_core::qasm::{parse, serialize};
use qbench_core::sim::MAX_UNITARY_QUBITS;
use qbench_core::transpile::{equivalence_error, route_with, widen, RouteOptions};
use qbench_core::{validate_coupling, Device};

const VERIFY_TOL: f64 = 1e-10;

#[derive(Debug, Args)]
pub struct TranspileArgs {
    /// Input QASM file.
    pub input: PathBuf,
    /// Target device: built-in name (`ibmqe-v1`, `ibmqe-v2`) or device JSON file.
    #[arg(long, default_value = "ibmqe-v1")]
    pub coupling: String,
    /// Output QASM file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Check unitary equivalence up to the final layout.
    #[arg(long)]
    pub verify: bool,
    /// Undo the routing permutation before the first measurement.
    #[arg(long)]
    pub restore_layout: bool,
}

/// Returns `Ok(false)` when verification fails.
pub fn cmd_transpile(args: &TranspileArgs) -> Result<bool> {
    let source = fs::read_to_string(&args.input).with_context(|| format!("reading {}", args.input.display()))?;
    let circuit = parse(&source).with_context(|| format!("parsing {}", args.input.display()))?;
    let device = Device::load(&args.coupling)?;
    let map = &device.coupling;
    if args.verify && map.num_qubits().max(circuit.num_qubits()) > MAX_UNITARY_QUBITS {
        bail!(
            "--verify is limited to {MAX_UNITARY_QUBITS} qubits; this circuit needs {}",
            map.num_qubits().max(circuit.num_qubits())
        );
    }
    if circuit.num_qubits() > map.num_qubits() {
        bail!("circuit uses {} qubits but the device has {}", circuit.num_qubits(), map.num_qubits());
    }

    let legal = validate_coupling(&circuit, map).is_empty();
    let (text, routed) = if legal {
        (source, None)
    } else {
        let routed = route_with(&circuit, map, RouteOptions { restore_layout: args.restore_layout })?;
        (serialize(&routed.circuit), Some(routed))
    };

    let mut status = serde_json::json!({ "routed": routed.is_some() });
    let mut verified = true;
    if let Some(r) = &routed {
        status["stats"] = serde_json::to_value(r.stats)?;
        status["layout"] = serde_json::to_value(r.layout.as_slice())?;
        if args.verify {
            let before = widen(&circuit.without_measurements(), map.num_qubits());
            let err = equivalence_error(&before, &r.circuit.without_measurements(), &r.layout)?;
            verified = err <= VERIFY_TOL;
            status["verify_error"] = serde_json::json!(err);
        }
    } else if args.verify {
        status["verify_error"] = serde_json::json!(0.0);
        status["layout"] = serde_json::to_value((0..map.num_qubits()).collect::<Vec<_>>())?;
    }
    if args.verify {
        status["verified"] = serde_json::json!(verified);
    }

    match &args.out {
        Some(path) => fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    eprintln!("{status}");
    Ok(verified)
}
