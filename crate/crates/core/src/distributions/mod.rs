//! Continuous distributions and their tail integrals.
//!
//! [`ContinuousDistribution`] exposes the CDF, density and left-continuous
//! quantile of a distribution together with the two tail integrals of the
//! survival function that drive the optimal stopping recursions:
//!
//! * `tail_integral_upper(a) = ∫_a^{x^*} (1 - F(u)) du`, so that
//!   `E[max(X, a)] = a + tail_integral_upper(a)`;
//! * `tail_integral_lower(b) = ∫_{x_*}^b (1 - F(u)) du`, so that
//!   `E[min(X, b)] = x_* + tail_integral_lower(b)`.
//!
//! Families override these with closed forms; the default methods fall back
//! on adaptive quadrature (see [`numeric`]).

mod catalog;
pub mod numeric;
mod spec;

pub use catalog::{Exponential, Pareto, ReverseWeibullWitness, Uniform};
pub use spec::Catalog;

use std::fmt::Debug;

use crate::error::Result;

/// A continuous univariate distribution with support `[x_*, x^*)`.
pub trait ContinuousDistribution: Debug + Send + Sync {
    fn name(&self) -> String;

    /// `(x_*, x^*)`; the right endpoint may be `+inf`.
    fn support(&self) -> (f64, f64);

    fn cdf(&self, x: f64) -> f64;

    fn pdf(&self, x: f64) -> f64;

    /// Survival function `1 - F(x)`. Override when it can be evaluated
    /// without cancellation.
    fn sf(&self, x: f64) -> f64 {
        1.0 - self.cdf(x)
    }

    /// Left-continuous inverse `inf { x : F(x) >= q }`.
    fn quantile(&self, q: f64) -> Result<f64> {
        numeric::quantile_by_bisection(self, q)
    }

    /// Inverse-transform sample for a uniform variate `u` in `(0, 1)`.
    fn sample(&self, u: f64) -> f64 {
        self.quantile(u).unwrap_or(f64::NAN)
    }

    fn has_finite_mean(&self) -> bool {
        true
    }

    fn mean(&self) -> Result<f64> {
        let (lo, _) = self.support();
        Ok(lo + self.tail_integral_upper(lo)?)
    }

    /// Extreme value index for maxima, when known.
    fn gamma_max(&self) -> Option<f64> {
        None
    }

    /// Extreme value index for minima, when known.
    fn gamma_min(&self) -> Option<f64> {
        None
    }

    fn tail_integral_upper(&self, a: f64) -> Result<f64> {
        numeric::tail_integral_upper(self, a)
    }

    fn tail_integral_lower(&self, b: f64) -> Result<f64> {
        numeric::tail_integral_lower(self, b)
    }

    /// Closed-form `E[X_(i)]` for `n` draws, if the family has one for `(i, n)`.
    fn exact_order_statistic(&self, _i: usize, _n: usize) -> Option<f64> {
        None
    }
}

impl<D: ContinuousDistribution + ?Sized> ContinuousDistribution for &D {
    fn name(&self) -> String {
        (**self).name()
    }
    fn support(&self) -> (f64, f64) {
        (**self).support()
    }
    fn cdf(&self, x: f64) -> f64 {
        (**self).cdf(x)
    }
    fn pdf(&self, x: f64) -> f64 {
        (**self).pdf(x)
    }
    fn sf(&self, x: f64) -> f64 {
        (**self).sf(x)
    }
    fn quantile(&self, q: f64) -> Result<f64> {
        (**self).quantile(q)
    }
    fn sample(&self, u: f64) -> f64 {
        (**self).sample(u)
    }
    fn has_finite_mean(&self) -> bool {
        (**self).has_finite_mean()
    }
    fn mean(&self) -> Result<f64> {
        (**self).mean()
    }
    fn gamma_max(&self) -> Option<f64> {
        (**self).gamma_max()
    }
    fn gamma_min(&self) -> Option<f64> {
        (**self).gamma_min()
    }
    fn tail_integral_upper(&self, a: f64) -> Result<f64> {
        (**self).tail_integral_upper(a)
    }
    fn tail_integral_lower(&self, b: f64) -> Result<f64> {
        (**self).tail_integral_lower(b)
    }
    fn exact_order_statistic(&self, i: usize, n: usize) -> Option<f64> {
        (**self).exact_order_statistic(i, n)
    }
}
