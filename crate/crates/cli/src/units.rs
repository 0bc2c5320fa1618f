//! Unit-suffixed quantities. Values are returned in SI units.

use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quantity {
    Length,
    /// Bandwidths; the numeric value is kept as given (no 2π factor).
    Frequency,
    Dimensionless,
}

const LENGTH: &[(&str, f64)] = &[
    ("nm", 1e-9),
    ("um", 1e-6),
    ("µm", 1e-6),
    ("mm", 1e-3),
    ("cm", 1e-2),
    ("m", 1.0),
];

const FREQUENCY: &[(&str, f64)] = &[
    ("rad/s", 1.0),
    ("THz", 1e12),
    ("GHz", 1e9),
    ("MHz", 1e6),
    ("kHz", 1e3),
    ("Hz", 1.0),
];

pub fn parse_quantity(text: &str, kind: Quantity) -> CliResult<f64> {
    let text = text.trim();
    let table: &[(&str, f64)] = match kind {
        Quantity::Length => LENGTH,
        Quantity::Frequency => FREQUENCY,
        Quantity::Dimensionless => &[],
    };
    let (number, scale) = table
        .iter()
        .find_map(|&(suffix, scale)| text.strip_suffix(suffix).map(|n| (n, scale)))
        .unwrap_or((text, 1.0));
    let value: f64 = number
        .trim()
        .parse()
        .map_err(|_| CliError::validation(format!("cannot parse `{text}` as a {kind:?} value")))?;
    let value = value * scale;
    if !value.is_finite() {
        return Err(CliError::validation(format!("`{text}` is not finite")));
    }
    Ok(value)
}
