use std::f64::consts::PI;

use entrobound::coarse::{coarse_grained_bound, coarse_grained_bound_mc};
use entrobound::cv::{
    e3f_cv_approx_spatial, e3f_cv_approx_time, e3f_cv_exact_bound, model_spatial, model_time,
    GaussianModel, SpatialParams, TimeParams,
};
use rayon::prelude::*;
use serde_json::json;

use super::{params, threshold, CommandOutput};
use crate::args::{CvCoarseArgs, CvSpatialArgs, CvTimeArgs};
use crate::error::{CliError, CliResult};
use crate::output::{Payload, SummaryValue, Table};
use crate::sweep::SweepSpec;
use crate::units::{parse_quantity, Quantity};

const COLUMNS: [&str; 4] = [
    "parameter",
    "exact_bound_bits",
    "approx_bare_bits",
    "approx_caption_bits",
];

/// Brackets wide enough to contain every crossing of physical interest.
const WIDTH_BRACKET: (f64, f64) = (1e-9, 10.0);
const BANDWIDTH_BRACKET: (f64, f64) = (1e3, 1e20);

/// Sweep grid or explicit `--at` points.
fn grid(
    sweep: &str,
    at: &[String],
    var: &str,
    kind: Quantity,
) -> CliResult<(Vec<f64>, serde_json::Value)> {
    if at.is_empty() {
        let spec = SweepSpec::parse(sweep, var, kind)?;
        Ok((spec.values(), json!(spec)))
    } else {
        let pts = at
            .iter()
            .map(|s| parse_quantity(s, kind))
            .collect::<CliResult<Vec<_>>>()?;
        let record = json!({ "points": pts });
        Ok((pts, record))
    }
}

fn table_rows<F>(points: &[f64], eval: F) -> CliResult<Vec<Vec<f64>>>
where
    F: Fn(f64) -> entrobound::Result<(f64, f64, f64)> + Sync,
{
    Ok(points
        .par_iter()
        .map(|&x| eval(x).map(|(e, b, c)| vec![x, e, b, c]))
        .collect::<entrobound::Result<Vec<_>>>()?)
}

/// Zero and unit crossings of the exact bound, zero crossings of both approximations.
fn intercepts<F>(eval: F, bracket: (f64, f64)) -> CliResult<Vec<(String, SummaryValue)>>
where
    F: Fn(f64) -> entrobound::Result<(f64, f64, f64)>,
{
    let (lo, hi) = bracket;
    Ok(vec![
        (
            "zero_intercept_exact".into(),
            threshold(|x| eval(x).map(|r| r.0), lo, hi, true)?,
        ),
        (
            "e3f_one_intercept_exact".into(),
            threshold(|x| eval(x).map(|r| r.0 - 1.0), lo, hi, true)?,
        ),
        (
            "zero_intercept_bare".into(),
            threshold(|x| eval(x).map(|r| r.1), lo, hi, true)?,
        ),
        (
            "zero_intercept_caption".into(),
            threshold(|x| eval(x).map(|r| r.2), lo, hi, true)?,
        ),
    ])
}

pub fn run_spatial(args: &CvSpatialArgs) -> CliResult<CommandOutput> {
    let base = SpatialParams {
        length: parse_quantity(&args.length, Quantity::Length)?,
        pump_wavelength: parse_quantity(&args.wavelength, Quantity::Length)?,
        refractive_index: parse_quantity(&args.index, Quantity::Dimensionless)?,
        pump_width: 1.0,
    };
    base.validate()?;
    let (points, grid_record) = grid(&args.sweep, &args.at, "sigma_p", Quantity::Length)?;
    let eval = |w: f64| -> entrobound::Result<(f64, f64, f64)> {
        let p = SpatialParams {
            pump_width: w,
            ..base
        };
        let exact = e3f_cv_exact_bound(&model_spatial(&p)?)?;
        let approx = e3f_cv_approx_spatial(&p)?;
        Ok((exact, approx.bare, approx.caption))
    };
    let rows = table_rows(&points, eval)?;
    let mut summary = vec![("parameter_unit".into(), SummaryValue::Text("m".into()))];
    summary.extend(intercepts(eval, WIDTH_BRACKET)?);
    Ok(CommandOutput {
        payload: Payload::Table(Table {
            columns: COLUMNS.to_vec(),
            rows,
            summary,
        }),
        parameters: params([
            ("length_m", json!(base.length)),
            ("pump_wavelength_m", json!(base.pump_wavelength)),
            ("refractive_index", json!(base.refractive_index)),
            ("sigma_p_m", grid_record),
        ]),
        inputs: vec![],
        seed: None,
    })
}

pub fn run_time(args: &CvTimeArgs) -> CliResult<CommandOutput> {
    let base = TimeParams {
        length: parse_quantity(&args.length, Quantity::Length)?,
        gvd: parse_quantity(&args.gvd, Quantity::Dimensionless)?,
        pump_bandwidth: 1.0,
    };
    base.validate()?;
    let (raw, grid_record) = grid(&args.sweep, &args.at, "sigma_wp", Quantity::Frequency)?;
    let factor = if args.ordinary_hz { 2.0 * PI } else { 1.0 };
    let points: Vec<f64> = raw.iter().map(|x| x * factor).collect();
    let eval = |s: f64| -> entrobound::Result<(f64, f64, f64)> {
        let p = TimeParams {
            pump_bandwidth: s,
            ..base
        };
        let exact = e3f_cv_exact_bound(&model_time(&p)?)?;
        let approx = e3f_cv_approx_time(&p)?;
        Ok((exact, approx.bare, approx.caption))
    };
    let rows = table_rows(&points, eval)?;
    let convention = if args.ordinary_hz {
        "ordinary frequency, multiplied by 2pi"
    } else {
        "angular frequency (rad/s)"
    };
    let mut summary = vec![
        ("parameter_unit".into(), SummaryValue::Text("rad/s".into())),
        (
            "bandwidth_convention".into(),
            SummaryValue::Text(convention.into()),
        ),
    ];
    summary.extend(intercepts(eval, BANDWIDTH_BRACKET)?);
    Ok(CommandOutput {
        payload: Payload::Table(Table {
            columns: COLUMNS.to_vec(),
            rows,
            summary,
        }),
        parameters: params([
            ("length_m", json!(base.length)),
            ("gvd_s2_per_m", json!(base.gvd)),
            ("bandwidth_convention", json!(convention)),
            ("sigma_wp_input", grid_record),
        ]),
        inputs: vec![],
        seed: None,
    })
}

pub fn run_coarse(args: &CvCoarseArgs, seed: Option<u64>) -> CliResult<CommandOutput> {
    let [au, av, aw] = args.alpha[..] else {
        return Err(CliError::validation(format!(
            "--alpha needs 3 values, got {}",
            args.alpha.len()
        )));
    };
    let m = GaussianModel::new(au, av, aw)?;
    let quadrature = coarse_grained_bound(&m, args.dx, args.dk)?;
    let continuous = if m.is_symmetric() {
        Some(e3f_cv_exact_bound(&m)?)
    } else {
        None
    };
    let (monte_carlo, used_seed) = match args.samples {
        Some(n) => {
            let s = seed.unwrap_or(0);
            (
                Some(coarse_grained_bound_mc(&m, args.dx, args.dk, n, s)?),
                Some(s),
            )
        }
        None => (None, None),
    };
    Ok(CommandOutput {
        payload: Payload::Report(json!({
            "model": m,
            "quadrature": quadrature,
            "monte_carlo": monte_carlo,
            "continuous_bound": continuous,
        })),
        parameters: params([
            ("alpha", json!(args.alpha)),
            ("dx", json!(args.dx)),
            ("dk", json!(args.dk)),
            ("samples", json!(args.samples)),
        ]),
        inputs: vec![],
        seed: used_seed,
    })
}
