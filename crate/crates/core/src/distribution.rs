//! Joint outcome distributions of N parties and their Shannon entropies.

use std::collections::BTreeMap;
use std::io::Read;

use serde::Serialize;

use crate::error::{Error, Result};

pub const NORMALIZATION_TOL: f64 = 1e-10;
/// Probabilities below this are treated as exactly zero before taking logs.
pub const PROB_FLOOR: f64 = 1e-15;
/// Per-setting total below which plug-in entropy estimates are flagged.
pub const DEFAULT_MIN_COUNTS: u64 = 1000;

/// Probability table over outcome tuples, party 0 most significant.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JointDistribution {
    dims: Vec<usize>,
    probs: Vec<f64>,
}

impl JointDistribution {
    pub fn new(dims: Vec<usize>, probs: Vec<f64>) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::InvalidDistribution(format!(
                "bad outcome counts {dims:?}"
            )));
        }
        let total: usize = dims.iter().product();
        if probs.len() != total {
            return Err(Error::DimensionMismatch {
                expected: total,
                found: probs.len(),
            });
        }
        if let Some(p) = probs.iter().find(|p| !(**p >= 0.0)) {
            return Err(Error::InvalidDistribution(format!(
                "negative probability {p}"
            )));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {sum}"
            )));
        }
        Ok(Self { dims, probs })
    }

    /// Normalizes raw counts.
    pub fn from_counts(dims: Vec<usize>, counts: &[u64]) -> Result<Self> {
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Err(Error::InvalidDistribution("no counts".into()));
        }
        let probs = counts.iter().map(|&c| c as f64 / total as f64).collect();
        Self::new(dims, probs)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn parties(&self) -> usize {
        self.dims.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, outcome: &[usize]) -> f64 {
        self.probs[self.index(outcome)]
    }

    fn index(&self, outcome: &[usize]) -> usize {
        outcome
            .iter()
            .zip(&self.dims)
            .fold(0, |acc, (&x, &d)| acc * d + x)
    }

    fn check_parties(&self, parties: &[usize]) -> Result<()> {
        for (k, &p) in parties.iter().enumerate() {
            if p >= self.parties() {
                return Err(Error::InvalidPartySet(format!(
                    "party {p} out of range for {} parties",
                    self.parties()
                )));
            }
            if parties[..k].contains(&p) {
                return Err(Error::InvalidPartySet(format!("party {p} repeated")));
            }
        }
        Ok(())
    }

    /// Marginal table over `parties`, in the order given.
    pub fn marginal(&self, parties: &[usize]) -> Result<JointDistribution> {
        self.check_parties(parties)?;
        let dims: Vec<usize> = parties.iter().map(|&p| self.dims[p]).collect();
        let mut probs = vec![0.0; dims.iter().product()];
        let mut digits = vec![0usize; self.parties()];
        for &p in &self.probs {
            let idx = parties
                .iter()
                .zip(&dims)
                .fold(0, |acc, (&party, &d)| acc * d + digits[party]);
            probs[idx] += p;
            // increment mixed-radix counter
            for (slot, &d) in digits.iter_mut().zip(&self.dims).rev() {
                *slot += 1;
                if *slot < d {
                    break;
                }
                *slot = 0;
            }
        }
        Ok(JointDistribution { dims, probs })
    }

    /// Shannon entropy in bits of the whole table.
    pub fn entropy(&self) -> f64 {
        shannon_entropy(&self.probs)
    }

    /// Shannon entropy of the marginal on `parties`; zero for the empty set.
    pub fn subset_entropy(&self, parties: &[usize]) -> Result<f64> {
        if parties.is_empty() {
            return Ok(0.0);
        }
        Ok(self.marginal(parties)?.entropy())
    }

    /// `H(target | given) = H(target, given) − H(given)`.
    pub fn conditional_entropy(&self, target: &[usize], given: &[usize]) -> Result<f64> {
        if target.is_empty() {
            return Err(Error::InvalidPartySet("target set is empty".into()));
        }
        if let Some(p) = target.iter().find(|p| given.contains(p)) {
            return Err(Error::InvalidPartySet(format!(
                "party {p} in both target and given"
            )));
        }
        let joint: Vec<usize> = target.iter().chain(given).copied().collect();
        let h = self.subset_entropy(&joint)? - self.subset_entropy(given)?;
        // rounding can push a deterministic conditional a hair below zero
        Ok(h.max(0.0))
    }
}

/// `H(target | given)` for a single target party.
pub fn shannon_conditional(
    dist: &JointDistribution,
    target: usize,
    given: &[usize],
) -> Result<f64> {
    dist.conditional_entropy(&[target], given)
}

pub fn shannon_entropy(probs: &[f64]) -> f64 {
    probs
        .iter()
        .filter(|&&p| p >= PROB_FLOOR)
        .map(|&p| -p * p.log2())
        .sum()
}

/// Measurement setting column of the counts file.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Setting {
    Q,
    R,
}

/// Empirical distributions for the two settings read from a counts CSV.
#[derive(Clone, Debug, Serialize)]
pub struct CountsData {
    pub dist_q: JointDistribution,
    pub dist_r: JointDistribution,
    pub total_q: u64,
    pub total_r: u64,
    /// True when either setting has fewer than the requested minimum counts.
    pub low_counts: bool,
    pub warnings: Vec<String>,
}

/// Reads `setting,outcome_A,outcome_B,...,count` rows. Outcomes are integer
/// indices below `local_dim`; repeated rows accumulate.
pub fn read_counts_csv<R: Read>(
    reader: R,
    local_dim: usize,
    min_counts: u64,
) -> Result<CountsData> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr.headers()?.clone();
    let n_cols = headers.len();
    if n_cols < 3
        || headers.get(0) != Some("setting")
        || headers.get(n_cols - 1) != Some("count")
        || !headers
            .iter()
            .skip(1)
            .take(n_cols - 2)
            .all(|h| h.starts_with("outcome_"))
    {
        return Err(Error::Parse(format!(
            "counts header must be `setting,outcome_A,...,count`, got `{}`",
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let parties = n_cols - 2;
    let mut tables: BTreeMap<Setting, Vec<u64>> = BTreeMap::new();
    let size = local_dim.pow(parties as u32);
    for (line, record) in rdr.records().enumerate() {
        let record = record?;
        let line_no = line + 2;
        let field = |i: usize| record.get(i).unwrap_or("");
        let setting = match field(0) {
            "Q" | "q" => Setting::Q,
            "R" | "r" => Setting::R,
            other => {
                return Err(Error::Parse(format!(
                    "line {line_no}: setting must be Q or R, got `{other}`"
                )))
            }
        };
        let mut idx = 0;
        for col in 1..=parties {
            let x: usize = field(col).parse().map_err(|_| {
                Error::Parse(format!(
                    "line {line_no}: bad outcome `{}` in column {col}",
                    field(col)
                ))
            })?;
            if x >= local_dim {
                return Err(Error::Parse(format!(
                    "line {line_no}: outcome {x} not below local dimension {local_dim}"
                )));
            }
            idx = idx * local_dim + x;
        }
        let count: u64 = field(n_cols - 1).parse().map_err(|_| {
            Error::Parse(format!("line {line_no}: bad count `{}`", field(n_cols - 1)))
        })?;
        tables.entry(setting).or_insert_with(|| vec![0; size])[idx] += count;
    }
    let take = |s: Setting| -> Result<(JointDistribution, u64)> {
        let counts = tables
            .get(&s)
            .ok_or_else(|| Error::Parse(format!("no rows for setting {s:?}")))?;
        let total = counts.iter().sum();
        Ok((
            JointDistribution::from_counts(vec![local_dim; parties], counts)?,
            total,
        ))
    };
    let (dist_q, total_q) = take(Setting::Q)?;
    let (dist_r, total_r) = take(Setting::R)?;
    let mut warnings = Vec::new();
    for (s, total) in [(Setting::Q, total_q), (Setting::R, total_r)] {
        if total < min_counts {
            warnings.push(format!(
                "setting {s:?} has {total} counts (< {min_counts}); plug-in entropies are unreliable"
            ));
        }
    }
    Ok(CountsData {
        dist_q,
        dist_r,
        total_q,
        total_r,
        low_counts: !warnings.is_empty(),
        warnings,
    })
}
