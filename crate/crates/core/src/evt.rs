//! Extreme value theory: limit laws, the competitive-ratio function Λ(γ),
//! quantile asymptotics and index estimation from quantiles.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::distributions::ContinuousDistribution;
use crate::error::{Error, Result};
use crate::special::{gamma, ln_gamma_unchecked};
use crate::Objective;

/// Euler–Mascheroni constant.
pub const EULER_MASCHERONI: f64 = 0.577_215_664_901_532_9;

/// |γ| below this selects the Gumbel branch.
pub const GUMBEL_EPS: f64 = 1e-9;

/// Default quantile spacing for the index estimators.
pub const DEFAULT_ESTIMATOR_SPACING: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EvtClass {
    Frechet,
    Gumbel,
    ReverseWeibull,
}

/// An extreme value index with its domain-of-attraction class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvtIndex {
    gamma: f64,
    class: EvtClass,
}

impl EvtIndex {
    pub fn new(gamma: f64) -> Result<Self> {
        if !gamma.is_finite() {
            return Err(Error::domain(format!("index must be finite, got {gamma}")));
        }
        let class = if gamma.abs() < GUMBEL_EPS {
            EvtClass::Gumbel
        } else if gamma > 0.0 {
            EvtClass::Frechet
        } else {
            EvtClass::ReverseWeibull
        };
        Ok(EvtIndex { gamma, class })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn class(&self) -> EvtClass {
        self.class
    }
}

impl fmt::Display for EvtIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({:?})", self.gamma, self.class)
    }
}

/// Λ(γ) = (1-γ)^{-γ} / Γ(1-γ), defined for γ < 1.
pub fn lambda_acr(gamma_idx: f64) -> Result<f64> {
    if !(gamma_idx < 1.0) {
        return Err(Error::domain(format!(
            "lambda is defined for gamma < 1, got {gamma_idx}"
        )));
    }
    let one_minus = 1.0 - gamma_idx;
    Ok(one_minus.powf(-gamma_idx) / gamma(one_minus)?)
}

/// Asymptotic competitive ratio of the optimal policy: `min(Λ, 1)` for
/// maxima, `max(Λ, 1)` for minima.
pub fn asymptotic_ratio(gamma_idx: f64, objective: Objective) -> Result<f64> {
    let l = lambda_acr(gamma_idx)?;
    match objective {
        Objective::Max => Ok(l.min(1.0)),
        Objective::Min => {
            if gamma_idx > GUMBEL_EPS {
                return Err(Error::domain(format!(
                    "minima of a distribution bounded below need gamma <= 0, got {gamma_idx}"
                )));
            }
            Ok(l.max(1.0))
        }
    }
}

/// Γ(x) for x > 0.
pub fn gamma_function(x: f64) -> Result<f64> {
    gamma(x)
}

/// Limit law of normalised maxima, G_γ(x).
pub fn extreme_cdf_max(gamma_idx: f64, x: f64) -> f64 {
    if gamma_idx.abs() < GUMBEL_EPS {
        return (-(-x).exp()).exp();
    }
    let base = 1.0 + gamma_idx * x;
    if base <= 0.0 {
        // below the lower endpoint (γ > 0) or above the upper one (γ < 0)
        return if gamma_idx > 0.0 { 0.0 } else { 1.0 };
    }
    (-base.powf(-1.0 / gamma_idx)).exp()
}

/// Limit law of normalised minima, G*_γ(x) = exp(-(1-γx)^{-1/γ}).
pub fn extreme_cdf_min(gamma_idx: f64, x: f64) -> f64 {
    if gamma_idx.abs() < GUMBEL_EPS {
        return (-x.exp()).exp();
    }
    let base = 1.0 - gamma_idx * x;
    if base <= 0.0 {
        return if gamma_idx > 0.0 { 0.0 } else { 1.0 };
    }
    (-base.powf(-1.0 / gamma_idx)).exp()
}

fn require_horizon(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::Precondition(format!("need n >= 2, got {n}")));
    }
    Ok(())
}

/// Asymptotic approximation of the prophet value `E[max]` or `E[min]` of
/// `n` draws in terms of a single tail quantile.
pub fn prophet_value_approx<D: ContinuousDistribution + ?Sized>(
    dist: &D,
    index: EvtIndex,
    n: usize,
    objective: Objective,
) -> Result<f64> {
    require_horizon(n)?;
    let g = index.gamma();
    let nf = n as f64;
    match (objective, index.class()) {
        (Objective::Max, EvtClass::Frechet) => {
            if g >= 1.0 {
                return Err(Error::domain(format!(
                    "max approximation needs gamma < 1, got {g}"
                )));
            }
            Ok(gamma(1.0 - g)? * dist.quantile(1.0 - 1.0 / nf)?)
        }
        (Objective::Max, EvtClass::Gumbel) => dist.quantile(1.0 - (-EULER_MASCHERONI).exp() / nf),
        (Objective::Max, EvtClass::ReverseWeibull) => {
            let (_, hi) = dist.support();
            if !hi.is_finite() {
                return Err(Error::domain(
                    "gamma < 0 for maxima needs a finite right endpoint",
                ));
            }
            Ok(hi - gamma(1.0 - g)? * (hi - dist.quantile(1.0 - 1.0 / nf)?))
        }
        (Objective::Min, EvtClass::ReverseWeibull) => {
            Ok(gamma(1.0 - g)? * dist.quantile(1.0 / nf)?)
        }
        (Objective::Min, EvtClass::Gumbel) => dist.quantile((-EULER_MASCHERONI).exp() / nf),
        (Objective::Min, EvtClass::Frechet) => Err(Error::domain(format!(
            "minima approximation needs gamma <= 0, got {g}"
        ))),
    }
}

/// Which tail a quantile relation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tail {
    Upper,
    Lower,
}

/// Result of [`quantile_scaling`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantileScaling {
    pub approx: f64,
    pub exact: f64,
}

impl QuantileScaling {
    pub fn relative_error(&self) -> f64 {
        ((self.approx - self.exact) / self.exact).abs()
    }
}

/// Compares the multiplicative quantile relation with the exact quantile.
///
/// * lower tail: `F^←(c/n) ≈ c^{-γ} F^←(1/n)` (γ ≤ 0);
/// * upper tail, γ ∈ (0,1): `F^←(1-c/n) ≈ c^{-γ} F^←(1-1/n)`;
/// * upper tail, γ < 0: `x^* - F^←(1-c/n) ≈ c^{-γ} (x^* - F^←(1-1/n))`.
pub fn quantile_scaling<D: ContinuousDistribution + ?Sized>(
    dist: &D,
    gamma_idx: f64,
    n: usize,
    c: f64,
    tail: Tail,
) -> Result<QuantileScaling> {
    require_horizon(n)?;
    if !(c > 0.0) {
        return Err(Error::domain(format!("c must be positive, got {c}")));
    }
    let nf = n as f64;
    if c / nf > 1.0 {
        return Err(Error::domain(format!("c/n = {} exceeds 1", c / nf)));
    }
    let factor = c.powf(-gamma_idx);
    match tail {
        Tail::Lower => {
            if gamma_idx > GUMBEL_EPS {
                return Err(Error::domain(format!(
                    "lower-tail scaling needs gamma <= 0, got {gamma_idx}"
                )));
            }
            Ok(QuantileScaling {
                approx: factor * dist.quantile(1.0 / nf)?,
                exact: dist.quantile(c / nf)?,
            })
        }
        Tail::Upper => {
            let exact = dist.quantile(1.0 - c / nf)?;
            let base = dist.quantile(1.0 - 1.0 / nf)?;
            if gamma_idx > GUMBEL_EPS && gamma_idx < 1.0 {
                Ok(QuantileScaling {
                    approx: factor * base,
                    exact,
                })
            } else if gamma_idx < -GUMBEL_EPS {
                let (_, hi) = dist.support();
                if !hi.is_finite() {
                    return Err(Error::domain("gamma < 0 needs a finite right endpoint"));
                }
                Ok(QuantileScaling {
                    approx: hi - factor * (hi - base),
                    exact,
                })
            } else {
                Err(Error::domain(format!(
                    "upper-tail scaling is multiplicative only for gamma in (-inf,0) ∪ (0,1), got {gamma_idx}"
                )))
            }
        }
    }
}

/// Γ(m+1) Γ(n+1-γ) / (Γ(n+1) Γ(m+1-γ)): the limiting ratio of prophet
/// values for `m` and `n` draws.
pub fn order_stat_ratio_gen(gamma_idx: f64, n: usize, m: usize) -> Result<f64> {
    if !(1 <= m && m < n) {
        return Err(Error::Precondition(format!(
            "need 1 <= m < n, got m={m}, n={n}"
        )));
    }
    if !(gamma_idx < 1.0) {
        return Err(Error::domain(format!("need gamma < 1, got {gamma_idx}")));
    }
    if gamma_idx == 0.0 {
        return Ok(1.0);
    }
    let (nf, mf) = (n as f64, m as f64);
    let log_ratio = ln_gamma_unchecked(mf + 1.0) + ln_gamma_unchecked(nf + 1.0 - gamma_idx)
        - ln_gamma_unchecked(nf + 1.0)
        - ln_gamma_unchecked(mf + 1.0 - gamma_idx);
    Ok(log_ratio.exp())
}

/// Index for minima from two lower quantiles:
/// `γ̂ = -log(F^←(c/n) / F^←(1/n)) / log c`.
pub fn estimate_evt_index_min<D: ContinuousDistribution + ?Sized>(
    dist: &D,
    n: usize,
    c: f64,
) -> Result<f64> {
    check_spacing(n, c)?;
    let nf = n as f64;
    let near = dist.quantile(1.0 / nf)? - dist.support().0;
    let far = dist.quantile(c / nf)? - dist.support().0;
    if !(near > 0.0) {
        return Err(Error::DegenerateQuantile(format!(
            "F^<-(1/n) equals the left endpoint for n = {n}"
        )));
    }
    Ok(-(far / near).ln() / c.ln())
}

/// Index for maxima from two upper quantiles. With a finite right endpoint
/// the distances to `x^*` are used; otherwise the quantiles themselves.
pub fn estimate_evt_index_max<D: ContinuousDistribution + ?Sized>(
    dist: &D,
    n: usize,
    c: f64,
) -> Result<f64> {
    check_spacing(n, c)?;
    let nf = n as f64;
    let near = dist.quantile(1.0 - 1.0 / nf)?;
    let far = dist.quantile(1.0 - c / nf)?;
    let (_, hi) = dist.support();
    let (num, den) = if hi.is_finite() {
        (hi - far, hi - near)
    } else {
        (far, near)
    };
    if !(den > 0.0) || !(num > 0.0) {
        return Err(Error::DegenerateQuantile(format!(
            "upper quantiles are degenerate for n = {n}"
        )));
    }
    Ok(-(num / den).ln() / c.ln())
}

fn check_spacing(n: usize, c: f64) -> Result<()> {
    if !(c > 1.0) {
        return Err(Error::domain(format!("spacing c must exceed 1, got {c}")));
    }
    if c >= n as f64 {
        return Err(Error::HorizonTooSmall(format!(
            "c/n must be < 1, got c={c}, n={n}"
        )));
    }
    Ok(())
}
