use std::fmt;
use std::str::FromStr;

use super::{ContinuousDistribution, Exponential, Pareto, ReverseWeibullWitness, Uniform};
use crate::error::{Error, Result};

/// One of the built-in families, constructible from a textual spec:
///
/// ```text
/// uniform
/// exponential:rate=<r>
/// pareto:alpha=<a>
/// rw_witness:gamma=<g>
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Catalog {
    Uniform(Uniform),
    Exponential(Exponential),
    Pareto(Pareto),
    ReverseWeibullWitness(ReverseWeibullWitness),
}

impl Catalog {
    fn inner(&self) -> &dyn ContinuousDistribution {
        match self {
            Catalog::Uniform(d) => d,
            Catalog::Exponential(d) => d,
            Catalog::Pareto(d) => d,
            Catalog::ReverseWeibullWitness(d) => d,
        }
    }
}

fn parse_param(spec: &str, body: Option<&str>, key: &str) -> Result<f64> {
    let err = |reason: String| Error::Parse {
        spec: spec.to_string(),
        reason,
    };
    let body = body.ok_or_else(|| err(format!("missing parameter '{key}='")))?;
    let (k, v) = body
        .split_once('=')
        .ok_or_else(|| err(format!("expected '{key}=<value>'")))?;
    if k.trim() != key {
        return Err(err(format!(
            "unknown parameter '{}', expected '{key}'",
            k.trim()
        )));
    }
    v.trim()
        .parse::<f64>()
        .map_err(|e| err(format!("bad value for '{key}': {e}")))
}

impl FromStr for Catalog {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let spec = s.trim();
        let (family, body) = match spec.split_once(':') {
            Some((f, b)) => (f.trim(), Some(b)),
            None => (spec, None),
        };
        let wrap = |e: Error| match e {
            Error::Domain(reason) => Error::Parse {
                spec: spec.to_string(),
                reason,
            },
            other => other,
        };
        match family {
            "uniform" => match body {
                None => Ok(Catalog::Uniform(Uniform)),
                Some(_) => Err(Error::Parse {
                    spec: spec.to_string(),
                    reason: "uniform takes no parameters".into(),
                }),
            },
            "exponential" => {
                let rate = parse_param(spec, body, "rate")?;
                Exponential::new(rate)
                    .map(Catalog::Exponential)
                    .map_err(wrap)
            }
            "pareto" => {
                let alpha = parse_param(spec, body, "alpha")?;
                Pareto::new(alpha).map(Catalog::Pareto).map_err(wrap)
            }
            "rw_witness" => {
                let gamma = parse_param(spec, body, "gamma")?;
                ReverseWeibullWitness::new(gamma)
                    .map(Catalog::ReverseWeibullWitness)
                    .map_err(wrap)
            }
            other => Err(Error::Parse {
                spec: spec.to_string(),
                reason: format!("unknown family '{other}'"),
            }),
        }
    }
}

impl fmt::Display for Catalog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.inner().name())
    }
}

impl ContinuousDistribution for Catalog {
    fn name(&self) -> String {
        self.inner().name()
    }
    fn support(&self) -> (f64, f64) {
        self.inner().support()
    }
    fn cdf(&self, x: f64) -> f64 {
        self.inner().cdf(x)
    }
    fn pdf(&self, x: f64) -> f64 {
        self.inner().pdf(x)
    }
    fn sf(&self, x: f64) -> f64 {
        self.inner().sf(x)
    }
    fn quantile(&self, q: f64) -> Result<f64> {
        self.inner().quantile(q)
    }
    fn sample(&self, u: f64) -> f64 {
        self.inner().sample(u)
    }
    fn has_finite_mean(&self) -> bool {
        self.inner().has_finite_mean()
    }
    fn mean(&self) -> Result<f64> {
        self.inner().mean()
    }
    fn gamma_max(&self) -> Option<f64> {
        self.inner().gamma_max()
    }
    fn gamma_min(&self) -> Option<f64> {
        self.inner().gamma_min()
    }
    fn tail_integral_upper(&self, a: f64) -> Result<f64> {
        self.inner().tail_integral_upper(a)
    }
    fn tail_integral_lower(&self, b: f64) -> Result<f64> {
        self.inner().tail_integral_lower(b)
    }
    fn exact_order_statistic(&self, i: usize, n: usize) -> Option<f64> {
        self.inner().exact_order_statistic(i, n)
    }
}
