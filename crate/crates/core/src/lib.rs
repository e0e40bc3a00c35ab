//! Optimal stopping for i.i.d. prophet inequalities in both the max (reward)
//! and min (cost) settings.
//!
//! The crate computes the value of the optimal dynamic-programming policy,
//! the prophet benchmark (expected extreme order statistics), extreme value
//! indices and their asymptotic competitive ratio `Λ(γ)`, EVT-prescribed
//! single and multi-unit thresholds, and Monte Carlo estimates of competitive
//! ratios that are reproducible across thread counts.
//!
//! ```
//! use prophetlab::{benchmark, evt, policies, Objective};
//! use prophetlab::distributions::Uniform;
//!
//! let n = 10_000;
//! let g = policies::optimal_values(&Uniform, n, Objective::Min).unwrap().last();
//! let prophet = benchmark::prophet_value(&Uniform, n, Objective::Min).unwrap();
//! let limit = evt::asymptotic_ratio(-1.0, Objective::Min).unwrap();
//! assert!((g / prophet - limit).abs() < 0.02);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub mod benchmark;
pub mod cli;
pub mod distributions;
pub mod error;
pub mod evt;
pub mod policies;
pub mod quadrature;
pub mod simulate;
pub mod special;

pub use error::{Error, Result};

/// Whether the decision maker maximises a reward or minimises a cost.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    Max,
    Min,
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Objective::Max => "max",
            Objective::Min => "min",
        })
    }
}

impl FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "max" => Ok(Objective::Max),
            "min" => Ok(Objective::Min),
            other => Err(Error::Precondition(format!(
                "objective must be 'max' or 'min', got '{other}'"
            ))),
        }
    }
}
