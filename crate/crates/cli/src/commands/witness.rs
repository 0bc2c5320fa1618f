use std::fs::File;

use entrobound::distribution::read_counts_csv;
use entrobound::element_bound::element_bound_report;
use entrobound::witness::{
    measured_witness_for_state, measured_witness_v, measurement_distribution_uniform,
    pure_min_report, quantum_witness_v, MeasurementPair,
};
use serde_json::json;

use super::{load_pair_file, load_state, params, parse_pair, CommandOutput};
use crate::args::{StateSource, WitnessArgs};
use crate::error::{CliError, CliResult};
use crate::output::Payload;

/// Tr ρ² this close to 1 counts as pure for the pure-state minimum bound.
const PURITY_TOL: f64 = 1e-9;

fn pair_for(args: &WitnessArgs) -> CliResult<(MeasurementPair, Vec<std::path::PathBuf>)> {
    match &args.bases_file {
        Some(path) => Ok((load_pair_file(path)?, vec![path.clone()])),
        None => Ok((parse_pair(&args.bases)?, vec![])),
    }
}

pub fn run(args: &WitnessArgs) -> CliResult<CommandOutput> {
    let (pair, mut inputs) = pair_for(args)?;
    let bases = match &args.bases_file {
        Some(p) => json!({ "file": p.display().to_string() }),
        None => json!(args.bases),
    };
    if let Some(path) = &args.counts {
        let file = File::open(path)
            .map_err(|e| CliError::validation(format!("{}: {e}", path.display())))?;
        let data = read_counts_csv(file, pair.dim(), args.min_counts)
            .map_err(|e| CliError::validation(format!("{}: {e}", path.display())))?;
        let measured = measured_witness_v(&data.dist_q, &data.dist_r, &pair)?;
        let pure_min = if args.assume_pure {
            pure_min_report(&data.dist_q, &data.dist_r, &pair)?
        } else {
            None
        };
        inputs.insert(0, path.clone());
        return Ok(CommandOutput {
            payload: Payload::Report(json!({
                "source": path.display().to_string(),
                "measured": measured,
                "pure_min": pure_min,
                "total_q": data.total_q,
                "total_r": data.total_r,
                "low_counts": data.low_counts,
                "warnings": data.warnings,
            })),
            parameters: params([
                ("bases", bases),
                ("min_counts", json!(args.min_counts)),
                ("assume_pure", json!(args.assume_pure)),
            ]),
            inputs,
            seed: None,
        });
    }
    if args.state.is_none() && args.rho.is_none() {
        return Err(CliError::validation(
            "give one of --state, --rho or --counts",
        ));
    }
    let (rho, source, state_inputs) = load_state(args.state.as_deref(), args.rho.as_deref())?;
    inputs.splice(0..0, state_inputs);
    let exact = quantum_witness_v(&rho)?;
    let measured = measured_witness_for_state(&rho, &pair)?;
    let pure_min = if (rho.purity() - 1.0).abs() <= PURITY_TOL {
        let dist_q = measurement_distribution_uniform(&rho, &pair.q)?;
        let dist_r = measurement_distribution_uniform(&rho, &pair.r)?;
        pure_min_report(&dist_q, &dist_r, &pair)?
    } else {
        None
    };
    Ok(CommandOutput {
        payload: Payload::Report(json!({
            "source": source,
            "exact": exact,
            "measured": measured,
            "pure_min": pure_min,
        })),
        parameters: params([("bases", bases)]),
        inputs,
        seed: None,
    })
}

pub fn run_element_bound(args: &StateSource) -> CliResult<CommandOutput> {
    let (rho, source, inputs) = load_state(args.state.as_deref(), args.rho.as_deref())?;
    let report = element_bound_report(&rho)?;
    Ok(CommandOutput {
        payload: Payload::Report(json!({ "source": source, "report": report })),
        parameters: params([]),
        inputs,
        seed: None,
    })
}
