//! Interval bounds for sequential, bidirectional and symmetrized topological
//! complexity, derived from inequality rules, computed cup-lengths and a
//! registry of known values.

mod engine;
mod registry;
mod space;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use engine::{explain, BoundInterval, BoundsEngine, Limits, RuleApplication, Side};
pub use registry::{registry_lookup, Registry, RegistryEntry, RegistryFile, RegistryHit};
pub use space::{parse_space, ParseError, SpaceSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Flavor {
    TC,
    TCbeta,
    TCsigma,
}

impl Flavor {
    pub const ALL: [Flavor; 3] = [Flavor::TC, Flavor::TCbeta, Flavor::TCsigma];

    pub(crate) fn index(self) -> usize {
        self as usize
    }

    /// `TC_n`, `TC^β_n` or `TC^Σ_n`.
    pub fn symbol(self, n: usize) -> String {
        match self {
            Flavor::TC => format!("TC_{n}"),
            Flavor::TCbeta => format!("TC^β_{n}"),
            Flavor::TCsigma => format!("TC^Σ_{n}"),
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::TC => "TC",
            Flavor::TCbeta => "TCbeta",
            Flavor::TCsigma => "TCsigma",
        })
    }
}

impl FromStr for Flavor {
    type Err = String;

    /// Accepts `TC`/`tc`, `TCbeta`/`beta`, `TCsigma`/`sigma`.
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "tc" => Ok(Flavor::TC),
            "tcbeta" | "beta" => Ok(Flavor::TCbeta),
            "tcsigma" | "sigma" => Ok(Flavor::TCsigma),
            _ => Err(format!("unknown flavor '{s}' (expected tc, beta or sigma)")),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundsError {
    #[error("n must be at least 2, got {0}")]
    InvalidN(usize),
    #[error("inconsistent bounds for {target}: lower {lower} > upper {upper} after rule {rule}")]
    Inconsistent {
        target: String,
        lower: u64,
        upper: u64,
        rule: String,
    },
    #[error("registry: {0}")]
    Registry(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}
