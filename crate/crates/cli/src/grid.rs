//! Value lists on the command line: `12`, `4,6,8`, or inclusive ranges
//! `start:stop:step`.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::CliError;

/// Inclusive list of chain lengths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SizeList {
    text: String,
    values: Vec<usize>,
}

/// Inclusive list of real parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct ValueList {
    text: String,
    values: Vec<f64>,
}

impl SizeList {
    pub fn values(&self) -> &[usize] {
        &self.values
    }
}

impl ValueList {
    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

fn parse_number<T: FromStr>(s: &str, what: &str) -> Result<T, CliError> {
    s.trim()
        .parse()
        .map_err(|_| CliError::Config(format!("cannot parse {what} '{s}'")))
}

impl FromStr for SizeList {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let values = if let Some((a, rest)) = s.split_once(':') {
            let (b, step) = rest.split_once(':').unwrap_or((rest, "1"));
            let (a, b, step): (usize, usize, usize) = (
                parse_number(a, "size")?,
                parse_number(b, "size")?,
                parse_number(step, "step")?,
            );
            if step == 0 || b < a {
                return Err(CliError::Config(format!("empty or invalid size range '{s}'")));
            }
            (a..=b).step_by(step).collect()
        } else {
            s.split(',').map(|v| parse_number(v, "size")).collect::<Result<Vec<_>, _>>()?
        };
        if values.is_empty() {
            return Err(CliError::Config("size list must not be empty".into()));
        }
        Ok(Self { text: s.to_string(), values })
    }
}

impl FromStr for ValueList {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let values = if let Some((a, rest)) = s.split_once(':') {
            let (b, step) = rest
                .split_once(':')
                .ok_or_else(|| CliError::Config(format!("range '{s}' needs start:stop:step")))?;
            let (a, b, step): (f64, f64, f64) = (
                parse_number(a, "value")?,
                parse_number(b, "value")?,
                parse_number(step, "step")?,
            );
            if step.is_nan() || step <= 0.0 || !a.is_finite() || !b.is_finite() || b < a {
                return Err(CliError::Config(format!("empty or invalid range '{s}'")));
            }
            // Endpoint-inclusive with a rounding margin.
            let count = ((b - a) / step + 1e-9).floor() as usize + 1;
            (0..count).map(|k| a + k as f64 * step).collect()
        } else {
            s.split(',').map(|v| parse_number(v, "value")).collect::<Result<Vec<_>, _>>()?
        };
        if values.is_empty() || values.iter().any(|v: &f64| !v.is_finite()) {
            return Err(CliError::Config(format!("invalid value list '{s}'")));
        }
        Ok(Self { text: s.to_string(), values })
    }
}

impl fmt::Display for SizeList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

impl fmt::Display for ValueList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

impl Serialize for SizeList {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.text)
    }
}

impl Serialize for ValueList {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.text)
    }
}

/// `40x40` grid resolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridShape {
    pub lambda_points: usize,
    pub mu_points: usize,
}

impl FromStr for GridShape {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (a, b) = s
            .split_once(['x', 'X'])
            .ok_or_else(|| CliError::Config(format!("grid must look like 40x40, got '{s}'")))?;
        Ok(Self {
            lambda_points: parse_number(a, "grid size")?,
            mu_points: parse_number(b, "grid size")?,
        })
    }
}

impl fmt::Display for GridShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.lambda_points, self.mu_points)
    }
}

impl Serialize for GridShape {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
