//! `var=start:stop:points[:log]` parameter sweeps.

use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::units::{parse_quantity, Quantity};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepSpec {
    pub variable: String,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl SweepSpec {
    pub fn parse(text: &str, expected_var: &str, kind: Quantity) -> CliResult<Self> {
        let bad = |why: &str| CliError::validation(format!("bad sweep `{text}`: {why}"));
        let (var, range) = text
            .split_once('=')
            .ok_or_else(|| bad("expected var=start:stop:points"))?;
        let var = var.trim();
        if var != expected_var {
            return Err(bad(&format!(
                "this command sweeps `{expected_var}`, not `{var}`"
            )));
        }
        let parts: Vec<&str> = range.split(':').collect();
        let spacing = match parts.as_slice() {
            [_, _, _] => Spacing::Linear,
            [_, _, _, "log"] => Spacing::Log,
            [_, _, _, "lin"] => Spacing::Linear,
            _ => return Err(bad("expected start:stop:points[:log]")),
        };
        let start = parse_quantity(parts[0], kind)?;
        let stop = parse_quantity(parts[1], kind)?;
        let points: usize = parts[2]
            .trim()
            .parse()
            .map_err(|_| bad("points must be a positive integer"))?;
        let spec = SweepSpec {
            variable: var.to_string(),
            start,
            stop,
            points,
            spacing,
        };
        spec.validate().map_err(|e| bad(&e))?;
        Ok(spec)
    }

    fn validate(&self) -> Result<(), String> {
        if !(self.start < self.stop) {
            return Err("start must be below stop".into());
        }
        if self.points < 2 {
            return Err("need at least 2 points".into());
        }
        if self.spacing == Spacing::Log && self.start <= 0.0 {
            return Err("log spacing needs a positive start".into());
        }
        Ok(())
    }

    /// Grid values; both endpoints are included exactly.
    pub fn values(&self) -> Vec<f64> {
        let last = self.points - 1;
        (0..self.points)
            .map(|i| {
                if i == 0 {
                    return self.start;
                }
                if i == last {
                    return self.stop;
                }
                let t = i as f64 / last as f64;
                match self.spacing {
                    Spacing::Linear => self.start + t * (self.stop - self.start),
                    Spacing::Log => {
                        let (a, b) = (self.start.log10(), self.stop.log10());
                        10f64.powf(a + t * (b - a))
                    }
                }
            })
            .collect()
    }
}
