use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use entrobound::linalg::CMatrix;
use entrobound::root::{bisect, bisect_log, DEFAULT_ROOT_TOL};
use entrobound::states::StateSpec;
use entrobound::witness::{MeasurementPair, ObservableBasis};
use entrobound::{DensityMatrix, Error};
use num_complex::Complex64;
use serde::Deserialize;
use serde_json::Value;

use crate::args::{Cli, Command};
use crate::error::{CliError, CliResult};
use crate::output::{Payload, SummaryValue};

mod cv;
mod npartite;
mod werner;
mod witness;

pub struct CommandOutput {
    pub payload: Payload,
    pub parameters: BTreeMap<String, Value>,
    pub inputs: Vec<PathBuf>,
    /// Set only when a stochastic path consumed the seed.
    pub seed: Option<u64>,
}

pub fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Werner(_) => "werner",
        Command::Witness(_) => "witness",
        Command::ElementBound(_) => "element-bound",
        Command::CvSpatial(_) => "cv-spatial",
        Command::CvTime(_) => "cv-time",
        Command::CvCoarse(_) => "cv-coarse",
        Command::Npartite(_) => "npartite",
    }
}

pub fn execute(cli: &Cli) -> CliResult<CommandOutput> {
    match &cli.command {
        Command::Werner(a) => werner::run(a),
        Command::Witness(a) => witness::run(a),
        Command::ElementBound(a) => witness::run_element_bound(a),
        Command::CvSpatial(a) => cv::run_spatial(a),
        Command::CvTime(a) => cv::run_time(a),
        Command::CvCoarse(a) => cv::run_coarse(a, cli.seed),
        Command::Npartite(a) => npartite::run(a),
    }
}

fn params<const N: usize>(entries: [(&str, Value); N]) -> BTreeMap<String, Value> {
    entries
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect()
}

/// State from a built-in name or a density-matrix file, with a label for
/// the report and the file to hash.
fn load_state(
    state: Option<&str>,
    rho: Option<&Path>,
) -> CliResult<(DensityMatrix, String, Vec<PathBuf>)> {
    match (state, rho) {
        (Some(name), None) => {
            let spec: StateSpec = name.parse()?;
            Ok((spec.build()?, spec.to_string(), vec![]))
        }
        (None, Some(path)) => {
            let text = read(path)?;
            let rho = DensityMatrix::from_json_str(&text)
                .map_err(|e| CliError::validation(format!("{}: {e}", path.display())))?;
            Ok((rho, path.display().to_string(), vec![path.to_path_buf()]))
        }
        _ => Err(CliError::validation("give exactly one of --state or --rho")),
    }
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::validation(format!("{}: {e}", path.display())))
}

fn parse_pair(names: &str) -> CliResult<MeasurementPair> {
    let parts: Vec<&str> = split_top_level(names);
    match parts.as_slice() {
        [q, r] => Ok(MeasurementPair::new(
            ObservableBasis::named(q.trim())?,
            ObservableBasis::named(r.trim())?,
        )?),
        _ => Err(CliError::validation(format!(
            "--bases expects two names Q,R, got `{names}`"
        ))),
    }
}

/// Splits on commas outside parentheses, so `fourier(3),computational(3)` works.
fn split_top_level(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}

#[derive(Deserialize)]
struct MatrixJson {
    re: Vec<Vec<f64>>,
    #[serde(default)]
    im: Option<Vec<Vec<f64>>>,
}

#[derive(Deserialize)]
struct PairJson {
    q: MatrixJson,
    r: MatrixJson,
}

fn basis_from_json(m: &MatrixJson, field: &str) -> CliResult<ObservableBasis> {
    let n = m.re.len();
    let bad = |why: String| CliError::validation(format!("bases file, field `{field}`: {why}"));
    if let Some((i, row)) = m.re.iter().enumerate().find(|(_, r)| r.len() != n) {
        return Err(bad(format!(
            "re row {i} has {} entries, expected {n}",
            row.len()
        )));
    }
    if let Some(im) = &m.im {
        if im.len() != n || im.iter().any(|r| r.len() != n) {
            return Err(bad(format!("im must be {n}x{n}")));
        }
    }
    let u = CMatrix::from_fn(n, |i, j| {
        let im = m.im.as_ref().map_or(0.0, |im| im[i][j]);
        Complex64::new(m.re[i][j], im)
    });
    ObservableBasis::from_unitary(&u).map_err(|e| bad(e.to_string()))
}

fn load_pair_file(path: &Path) -> CliResult<MeasurementPair> {
    let raw: PairJson = serde_json::from_str(&read(path)?)
        .map_err(|e| CliError::validation(format!("{}: {e}", path.display())))?;
    Ok(MeasurementPair::new(
        basis_from_json(&raw.q, "q")?,
        basis_from_json(&raw.r, "r")?,
    )?)
}

/// Point where `f` goes from negative to positive across the bracket, or
/// `none` when it does not strictly change sign there.
fn threshold<F>(mut f: F, lo: f64, hi: f64, log: bool) -> CliResult<SummaryValue>
where
    F: FnMut(f64) -> entrobound::Result<f64>,
{
    let (f_lo, f_hi) = (f(lo)?, f(hi)?);
    if f_lo * f_hi >= 0.0 {
        return Ok(SummaryValue::Text("none".into()));
    }
    let root = if log {
        bisect_log(f, lo, hi, DEFAULT_ROOT_TOL)
    } else {
        bisect(f, lo, hi, DEFAULT_ROOT_TOL)
    };
    match root {
        Ok(x) => Ok(SummaryValue::Number(x)),
        Err(Error::NoBracket { .. }) => Ok(SummaryValue::Text("none".into())),
        Err(e) => Err(e.into()),
    }
}
