//! Machine-readable records of verified identities and inequalities.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::FromPrimitive;
use serde::{Deserialize, Serialize};

/// Comparison asserted by a report. `Ratio` marks informational records that
/// report a measured quotient without asserting a threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = "ratio")]
    Ratio,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Eq => "=",
            Relation::Ratio => "ratio",
        })
    }
}

/// One verified identity or inequality: exact lhs/rhs as rational strings,
/// the asserted relation, and the outcome. Parameters are decimal strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub name: String,
    pub params: BTreeMap<String, String>,
    pub lhs: String,
    pub rhs: String,
    pub relation: Relation,
    pub pass: bool,
    pub wall_time_ms: u64,
}

impl Report {
    fn compare(name: &str, lhs: &BigRational, rhs: &BigRational, relation: Relation) -> Report {
        let pass = match relation {
            Relation::Le => lhs <= rhs,
            Relation::Ge => lhs >= rhs,
            Relation::Eq => lhs == rhs,
            Relation::Ratio => true,
        };
        Report {
            name: name.to_string(),
            params: BTreeMap::new(),
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            relation,
            pass,
            wall_time_ms: 0,
        }
    }

    pub fn le(name: &str, lhs: &BigRational, rhs: &BigRational) -> Report {
        Self::compare(name, lhs, rhs, Relation::Le)
    }

    pub fn ge(name: &str, lhs: &BigRational, rhs: &BigRational) -> Report {
        Self::compare(name, lhs, rhs, Relation::Ge)
    }

    pub fn eq(name: &str, lhs: &BigRational, rhs: &BigRational) -> Report {
        Self::compare(name, lhs, rhs, Relation::Eq)
    }

    pub fn ratio(name: &str, lhs: &BigRational, rhs: &BigRational) -> Report {
        Self::compare(name, lhs, rhs, Relation::Ratio)
    }

    pub fn with_param(mut self, key: &str, value: impl fmt::Display) -> Report {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn with_wall_time(mut self, ms: u64) -> Report {
        self.wall_time_ms = ms;
        self
    }

    /// The record with the timing zeroed; two runs with identical flags are
    /// byte-for-byte identical in this form.
    pub fn canonical(&self) -> Report {
        let mut out = self.clone();
        out.wall_time_ms = 0;
        out
    }
}

/// Canonical JSON for a batch of reports (timings stripped).
pub fn canonical_json(reports: &[Report]) -> String {
    let canon: Vec<Report> = reports.iter().map(Report::canonical).collect();
    serde_json::to_string_pretty(&canon).expect("reports serialize")
}

pub fn all_pass(reports: &[Report]) -> bool {
    reports.iter().all(|r| r.pass)
}

/// Helpers for exact operands.
pub fn rat_u64(v: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

pub fn rat_int(v: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(v.into())
}

pub fn rat_f64(v: f64) -> BigRational {
    BigRational::from_f64(v).expect("finite float")
}

/// Double-precision view of an exact rational, for display only.
pub fn rat_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64()
        .unwrap_or_else(|| r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN))
}
