//! Quadrature and bisection fallbacks shared by all distributions.
//!
//! These are also callable directly on families that provide closed forms,
//! which gives an independent route to cross-check them.

use super::ContinuousDistribution;
use crate::error::{Error, Result};
use crate::quadrature::{integrate_with_breaks, Tolerance};

const BISECTION_MAX_ITER: usize = 200;
const BRACKET_MAX_DOUBLINGS: usize = 2_000;

pub(crate) fn check_probability(q: f64) -> Result<()> {
    if (0.0..=1.0).contains(&q) {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "probability must lie in [0, 1], got {q}"
        )))
    }
}

/// `inf { x : F(x) >= q }` by bisection on the CDF.
///
/// The bracket starts at the support and, for unbounded support, grows by
/// doubling until it covers `q`.
pub fn quantile_by_bisection<D: ContinuousDistribution + ?Sized>(d: &D, q: f64) -> Result<f64> {
    check_probability(q)?;
    let (lo, hi) = d.support();
    if q == 0.0 {
        return Ok(lo);
    }
    if q == 1.0 {
        return Ok(hi);
    }
    let mut left = lo;
    let mut right = if hi.is_finite() {
        hi
    } else {
        let mut width = 1.0_f64.max(lo.abs());
        let mut x = lo + width;
        let mut doublings = 0;
        while d.cdf(x) < q {
            left = x;
            width *= 2.0;
            x = lo + width;
            doublings += 1;
            if doublings > BRACKET_MAX_DOUBLINGS || !x.is_finite() {
                return Ok(f64::INFINITY);
            }
        }
        x
    };
    for _ in 0..BISECTION_MAX_ITER {
        let mid = 0.5 * (left + right);
        if mid <= left || mid >= right {
            break;
        }
        if d.cdf(mid) >= q {
            right = mid;
        } else {
            left = mid;
        }
    }
    Ok(right)
}

fn infinite_mean<D: ContinuousDistribution + ?Sized>(d: &D) -> Error {
    Error::InfiniteMean(format!(
        "{} has no finite mean; accepting the first value is already 1-competitive",
        d.name()
    ))
}

/// Break points that spread the mass of the upper tail beyond `a`.
fn tail_breaks<D: ContinuousDistribution + ?Sized>(d: &D, a: f64) -> Vec<f64> {
    let p = d.sf(a);
    let mut pts = vec![a];
    let mut level = p;
    for _ in 0..12 {
        level *= 0.1;
        if level <= 0.0 {
            break;
        }
        if let Ok(x) = d.quantile(1.0 - level) {
            if x.is_finite() && x > *pts.last().unwrap() {
                pts.push(x);
            }
        }
    }
    pts
}

/// `∫_a^{x^*} (1 - F(u)) du` by adaptive quadrature.
pub fn tail_integral_upper<D: ContinuousDistribution + ?Sized>(d: &D, a: f64) -> Result<f64> {
    if !d.has_finite_mean() {
        return Err(infinite_mean(d));
    }
    let (lo, hi) = d.support();
    if a >= hi {
        return Ok(0.0);
    }
    if a < lo {
        return Ok((lo - a) + tail_integral_upper(d, lo)?);
    }
    let tol = Tolerance::default();
    let sf = |u: f64| d.sf(u);
    if hi.is_finite() {
        return integrate_with_breaks(sf, &[a, hi], tol);
    }
    let mut pts = tail_breaks(d, a);
    pts.push(f64::INFINITY);
    integrate_with_breaks(sf, &pts, tol)
}

/// `∫_{x_*}^b (1 - F(u)) du` by adaptive quadrature.
pub fn tail_integral_lower<D: ContinuousDistribution + ?Sized>(d: &D, b: f64) -> Result<f64> {
    let (lo, hi) = d.support();
    if b <= lo {
        return Ok(0.0);
    }
    if b >= hi && !hi.is_finite() {
        return tail_integral_upper(d, lo);
    }
    let end = b.min(hi);
    let mid = d
        .quantile(0.5 * d.cdf(end))
        .ok()
        .filter(|m| *m > lo && *m < end);
    let pts: Vec<f64> = std::iter::once(lo)
        .chain(mid)
        .chain(std::iter::once(end))
        .collect();
    integrate_with_breaks(|u| d.sf(u), &pts, Tolerance::default())
}
