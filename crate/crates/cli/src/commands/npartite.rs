use std::fs::File;

use entrobound::distribution::read_counts_csv;
use entrobound::npartite::{conjugate_correlation_defect, cyclic_witness};
use entrobound::witness::measurement_distribution_uniform;
use entrobound::Error;
use serde_json::json;

use super::{load_state, params, parse_pair, CommandOutput};
use crate::args::NpartiteArgs;
use crate::error::{CliError, CliResult};
use crate::output::Payload;

pub fn run(args: &NpartiteArgs) -> CliResult<CommandOutput> {
    let pair = parse_pair(&args.bases)?;
    let (dist_q, dist_r, source, inputs, counts_info) = match (&args.state, &args.counts) {
        (Some(_), None) => {
            let (rho, source, inputs) = load_state(args.state.as_deref(), None)?;
            let q = measurement_distribution_uniform(&rho, &pair.q)?;
            let r = measurement_distribution_uniform(&rho, &pair.r)?;
            (q, r, source, inputs, None)
        }
        (None, Some(path)) => {
            if args.dim != pair.dim() {
                return Err(CliError::validation(format!(
                    "--dim {} does not match the {}-dimensional bases",
                    args.dim,
                    pair.dim()
                )));
            }
            let file = File::open(path)
                .map_err(|e| CliError::validation(format!("{}: {e}", path.display())))?;
            let data = read_counts_csv(file, args.dim, args.min_counts)
                .map_err(|e| CliError::validation(format!("{}: {e}", path.display())))?;
            let info = json!({
                "total_q": data.total_q,
                "total_r": data.total_r,
                "low_counts": data.low_counts,
                "warnings": data.warnings,
            });
            (
                data.dist_q,
                data.dist_r,
                path.display().to_string(),
                vec![path.clone()],
                Some(info),
            )
        }
        _ => {
            return Err(CliError::validation(
                "give exactly one of --state or --counts",
            ))
        }
    };
    if let Some(n) = args.n {
        if n != dist_q.parties() {
            return Err(CliError::validation(format!(
                "--n {n} does not match the {} parties of {source}",
                dist_q.parties()
            )));
        }
    }
    let report = cyclic_witness(&dist_q, &dist_r, &pair)?;
    let defect = match conjugate_correlation_defect(&dist_q, &dist_r, &pair) {
        Ok(d) => Some(d),
        Err(Error::NotConjugate { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let mut body = json!({
        "source": source,
        "report": report,
        "conjugate_correlation_defect": defect,
    });
    if let Some(info) = counts_info {
        body["counts"] = info;
    }
    Ok(CommandOutput {
        payload: Payload::Report(body),
        parameters: params([
            ("bases", json!(args.bases)),
            ("min_counts", json!(args.min_counts)),
        ]),
        inputs,
        seed: None,
    })
}
