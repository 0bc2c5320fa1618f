use entrobound::element_bound::{bound_b_corner, bound_b_full};
use entrobound::states::{ghz, w3, werner, WernerParams};
use entrobound::witness::{measured_witness_for_state, quantum_witness_v, MeasurementPair};
use entrobound::{DensityMatrix, PureState};
use rayon::prelude::*;
use serde_json::json;

use super::{params, parse_pair, threshold, CommandOutput};
use crate::args::{WernerArgs, WernerFamily};
use crate::error::CliResult;
use crate::output::{Payload, Table};
use crate::sweep::SweepSpec;
use crate::units::Quantity;

const COLUMNS: [&str; 5] = ["p", "v_exact", "v_measured", "b_full", "b_corner"];

fn row(target: &PureState, pair: &MeasurementPair, p: f64) -> entrobound::Result<[f64; 4]> {
    let rho: DensityMatrix = werner(target, WernerParams::new(p)?);
    Ok([
        quantum_witness_v(&rho)?.v_bound,
        measured_witness_for_state(&rho, pair)?.v_bound,
        bound_b_full(&rho)?,
        bound_b_corner(&rho)?,
    ])
}

pub fn run(args: &WernerArgs) -> CliResult<CommandOutput> {
    let sweep = SweepSpec::parse(&args.sweep, "p", Quantity::Dimensionless)?;
    let pair = parse_pair(&args.bases)?;
    let target = match args.state {
        WernerFamily::Gw => ghz(3, 2, None)?,
        WernerFamily::Ww => w3(),
    };
    let rows = sweep
        .values()
        .par_iter()
        .map(|&p| row(&target, &pair, p).map(|r| vec![p, r[0], r[1], r[2], r[3]]))
        .collect::<entrobound::Result<Vec<_>>>()?;

    let mut summary = Vec::new();
    for (k, name) in COLUMNS.iter().enumerate().skip(1) {
        let root = threshold(
            |p| row(&target, &pair, p).map(|r| r[k - 1]),
            0.0,
            1.0,
            false,
        )?;
        summary.push((format!("threshold_{name}"), root));
    }
    let family = match args.state {
        WernerFamily::Gw => "gw",
        WernerFamily::Ww => "ww",
    };
    Ok(CommandOutput {
        payload: Payload::Table(Table {
            columns: COLUMNS.to_vec(),
            rows,
            summary,
        }),
        parameters: params([
            ("state", json!(family)),
            ("sweep", json!(sweep)),
            ("bases", json!(args.bases)),
        ]),
        inputs: vec![],
        seed: None,
    })
}
