//! Prophet benchmarks: expected order statistics `μ_{i:n}`, the single-item
//! prophet values `μ_{1:n}` / `μ_{n:n}` and the multi-unit optimum.

use serde::{Deserialize, Serialize};

use crate::distributions::ContinuousDistribution;
use crate::error::{Error, Result};
use crate::quadrature::{integrate_with_breaks, Tolerance};
use crate::special::ln_binomial;
use crate::Objective;

/// Position `i` of `n` in the ascending order statistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderStatSpec {
    i: usize,
    n: usize,
}

impl OrderStatSpec {
    pub fn new(i: usize, n: usize) -> Result<Self> {
        if i == 0 || i > n {
            return Err(Error::Precondition(format!(
                "need 1 <= i <= n, got i={i}, n={n}"
            )));
        }
        Ok(OrderStatSpec { i, n })
    }

    pub fn i(&self) -> usize {
        self.i
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// `E[X_(i)]` for `n` i.i.d. draws.
///
/// Uses the family's closed form when it has one; otherwise integrates
/// `F^←(t)` against the Beta(i, n-i+1) density in quantile space, with the
/// Beta weight evaluated in log space.
pub fn expected_order_statistic<D: ContinuousDistribution + ?Sized>(
    dist: &D,
    i: usize,
    n: usize,
) -> Result<f64> {
    let spec = OrderStatSpec::new(i, n)?;
    if !dist.has_finite_mean() {
        return Err(Error::InfiniteMean(format!(
            "{} has no finite mean",
            dist.name()
        )));
    }
    if let Some(v) = dist.exact_order_statistic(spec.i, spec.n) {
        return Ok(v);
    }
    if n == 1 {
        return dist.mean();
    }
    order_statistic_by_quadrature(dist, spec)
}

/// The quadrature route of [`expected_order_statistic`], ignoring closed forms.
pub fn order_statistic_by_quadrature<D: ContinuousDistribution + ?Sized>(
    dist: &D,
    spec: OrderStatSpec,
) -> Result<f64> {
    let (i, n) = (spec.i as f64, spec.n as f64);
    let log_norm = n.ln() + ln_binomial(spec.n as u64 - 1, spec.i as u64 - 1);
    let integrand = |t: f64| {
        let lw = log_norm + (i - 1.0) * t.ln() + (n - i) * (-t).ln_1p();
        let w = lw.exp();
        if w == 0.0 {
            return 0.0;
        }
        dist.quantile(t).unwrap_or(f64::NAN) * w
    };

    let mode = if n > 1.0 { (i - 1.0) / (n - 1.0) } else { 0.5 };
    let sd = (i * (n - i + 1.0) / ((n + 1.0) * (n + 1.0) * (n + 2.0))).sqrt();
    let mut pts = vec![0.0, mode, 1.0];
    for k in [1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0] {
        pts.push(mode - k * sd);
        pts.push(mode + k * sd);
    }
    pts.retain(|p| (0.0..=1.0).contains(p));
    pts.sort_by(f64::total_cmp);
    pts.dedup();

    let v = integrate_with_breaks(integrand, &pts, Tolerance::relative(1e-10))?;
    if v.is_nan() {
        return Err(Error::Quadrature {
            estimate: v,
            error: f64::NAN,
        });
    }
    Ok(v)
}

/// `μ_{n:n}` for maxima, `μ_{1:n}` for minima.
pub fn prophet_value<D: ContinuousDistribution + ?Sized>(
    dist: &D,
    n: usize,
    objective: Objective,
) -> Result<f64> {
    match objective {
        Objective::Max => expected_order_statistic(dist, n, n),
        Objective::Min => expected_order_statistic(dist, 1, n),
    }
}

/// Expected cost of the offline optimum when at least `k` of `n` values must
/// be selected: the sum of the `k` smallest expected order statistics.
pub fn prophet_multi_unit<D: ContinuousDistribution + ?Sized>(
    dist: &D,
    k: usize,
    n: usize,
) -> Result<f64> {
    if k == 0 || k > n {
        return Err(Error::Precondition(format!(
            "need 1 <= k <= n, got k={k}, n={n}"
        )));
    }
    (1..=k).map(|i| expected_order_statistic(dist, i, n)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{Exponential, ReverseWeibullWitness, Uniform};

    #[test]
    fn examples() {
        assert!((expected_order_statistic(&Uniform, 1, 3).unwrap() - 0.25).abs() < 1e-15);
        let e = Exponential::new(1.0).unwrap();
        assert!((expected_order_statistic(&e, 1, 50).unwrap() - 0.02).abs() < 1e-15);
        assert!((expected_order_statistic(&e, 1, 1).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn prophet_values() {
        let v = prophet_value(&Uniform, 1000, Objective::Max).unwrap();
        assert!((v - 1000.0 / 1001.0).abs() < 1e-15);
        let w = ReverseWeibullWitness::new(-2.0).unwrap();
        let v = prophet_value(&w, 100, Objective::Min).unwrap();
        assert!((v - 2e-4).abs() < 1e-15);
        assert_eq!(prophet_value(&Uniform, 1, Objective::Min).unwrap(), 0.5);
        assert_eq!(prophet_value(&Uniform, 1, Objective::Max).unwrap(), 0.5);
    }

    #[test]
    fn multi_unit_examples() {
        assert!((prophet_multi_unit(&Uniform, 3, 9).unwrap() - 0.6).abs() < 1e-15);
        assert_eq!(prophet_multi_unit(&Uniform, 1, 1).unwrap(), 0.5);
        let e = Exponential::new(1.0).unwrap();
        assert!((prophet_multi_unit(&e, 2, 2).unwrap() - 2.0).abs() < 1e-15);
        assert!(prophet_multi_unit(&e, 3, 2).is_err());
        assert!(prophet_multi_unit(&e, 0, 2).is_err());
    }

    #[test]
    fn bad_index() {
        assert!(matches!(
            expected_order_statistic(&Uniform, 0, 3),
            Err(Error::Precondition(_))
        ));
        assert!(expected_order_statistic(&Uniform, 4, 3).is_err());
    }

    #[test]
    fn quadrature_matches_closed_forms() {
        let e = Exponential::new(1.0).unwrap();
        for &(i, n) in &[
            (1, 1),
            (1, 7),
            (3, 7),
            (7, 7),
            (1, 100_000),
            (12, 100_000),
            (50, 100),
        ] {
            let spec = OrderStatSpec::new(i, n).unwrap();
            let q = order_statistic_by_quadrature(&Uniform, spec).unwrap();
            let exact = i as f64 / (n as f64 + 1.0);
            assert!(
                ((q - exact) / exact).abs() < 1e-8,
                "uniform ({i},{n}): {q} vs {exact}"
            );
            let q = order_statistic_by_quadrature(&e, spec).unwrap();
            let exact = e.exact_order_statistic(i, n).unwrap();
            assert!(
                ((q - exact) / exact).abs() < 1e-8,
                "exp ({i},{n}): {q} vs {exact}"
            );
        }
    }

    #[test]
    fn witness_minimum_by_quadrature() {
        for &g in &[-0.5, -1.0, -2.0] {
            let w = ReverseWeibullWitness::new(g).unwrap();
            for &n in &[2usize, 10, 10_000] {
                let q =
                    order_statistic_by_quadrature(&w, OrderStatSpec::new(1, n).unwrap()).unwrap();
                let exact = w.exact_order_statistic(1, n).unwrap();
                assert!(((q - exact) / exact).abs() < 1e-8, "g={g} n={n}");
            }
        }
    }
}
