//! Stopping policies: the optimal dynamic-programming schedule for maxima and
//! minima, EVT-prescribed single thresholds, the exact value of a single
//! threshold for minima, and the multi-unit threshold.

use serde::{Deserialize, Serialize};

use crate::distributions::ContinuousDistribution;
use crate::error::{Error, Result};
use crate::evt::GUMBEL_EPS;
use crate::quadrature::{integrate, Tolerance};
use crate::Objective;

/// Values `G(1..=n)` of the optimal policy for one objective.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolicyValueTable {
    objective: Objective,
    distribution: String,
    support: (f64, f64),
    values: Vec<f64>,
}

impl PolicyValueTable {
    pub fn objective(&self) -> Objective {
        self.objective
    }

    pub fn distribution(&self) -> &str {
        &self.distribution
    }

    pub fn horizon(&self) -> usize {
        self.values.len()
    }

    /// `G(k)` for `1 <= k <= horizon`.
    pub fn value(&self, k: usize) -> Option<f64> {
        k.checked_sub(1).and_then(|i| self.values.get(i)).copied()
    }

    /// `G(horizon)`.
    pub fn last(&self) -> f64 {
        *self.values.last().expect("tables are never empty")
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Runs the optimal-stopping recursion up to horizon `n`:
///
/// * max: `G(k) = G(k-1) + ∫_{G(k-1)}^{x^*} (1 - F)`
/// * min: `G(k) = x_* + ∫_{x_*}^{G(k-1)} (1 - F)`
///
/// with `G(1) = E[X]`.
pub fn optimal_values<D: ContinuousDistribution + ?Sized>(
    dist: &D,
    n: usize,
    objective: Objective,
) -> Result<PolicyValueTable> {
    if n == 0 {
        return Err(Error::Precondition("horizon must be at least 1".into()));
    }
    let mut values = Vec::with_capacity(n);
    let mut g = dist.mean()?;
    let (lo, _) = dist.support();
    values.push(g);
    for _ in 1..n {
        g = match objective {
            Objective::Max => g + dist.tail_integral_upper(g)?,
            Objective::Min => lo + dist.tail_integral_lower(g)?,
        };
        values.push(g);
    }
    Ok(PolicyValueTable {
        objective,
        distribution: dist.name(),
        support: dist.support(),
        values,
    })
}

/// A threshold rule for sequential selection.
///
/// For minimisation a value is accepted when `X <= threshold`; for
/// maximisation when `X >= threshold`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ThresholdPolicy {
    /// One threshold per step. The last entry is the support endpoint that
    /// makes acceptance certain.
    Schedule { thresholds: Vec<f64> },
    /// A fixed threshold; the last value is taken if nothing was accepted.
    Single { threshold: f64, horizon: usize },
    /// Select at least `quota` values: take values crossing the threshold
    /// until the quota is met, and take every remaining value once the
    /// remaining steps equal the unfilled quota.
    MultiUnit {
        threshold: f64,
        horizon: usize,
        quota: usize,
    },
}

impl ThresholdPolicy {
    pub fn single(threshold: f64, horizon: usize) -> Result<Self> {
        if horizon == 0 {
            return Err(Error::Precondition("horizon must be at least 1".into()));
        }
        Ok(ThresholdPolicy::Single { threshold, horizon })
    }

    pub fn multi_unit(threshold: f64, horizon: usize, quota: usize) -> Result<Self> {
        if quota == 0 || quota > horizon {
            return Err(Error::Precondition(format!(
                "need 1 <= quota <= horizon, got quota={quota}, horizon={horizon}"
            )));
        }
        Ok(ThresholdPolicy::MultiUnit {
            threshold,
            horizon,
            quota,
        })
    }

    pub fn horizon(&self) -> usize {
        match self {
            ThresholdPolicy::Schedule { thresholds } => thresholds.len(),
            ThresholdPolicy::Single { horizon, .. }
            | ThresholdPolicy::MultiUnit { horizon, .. } => *horizon,
        }
    }

    pub fn quota(&self) -> usize {
        match self {
            ThresholdPolicy::MultiUnit { quota, .. } => *quota,
            _ => 1,
        }
    }
}

/// The optimal schedule `τ_i = G(n - i)` for `i < n`; step `n` always accepts.
pub fn threshold_schedule(table: &PolicyValueTable) -> ThresholdPolicy {
    let n = table.horizon();
    let forced = match table.objective {
        Objective::Max => table.support.0,
        Objective::Min => table.support.1,
    };
    let thresholds = (1..=n)
        .map(|i| {
            if i < n {
                table.values[n - i - 1]
            } else {
                forced
            }
        })
        .collect();
    ThresholdPolicy::Schedule { thresholds }
}

/// `g(n, γ) = -γ log(n / log n)`.
pub fn evt_threshold_rate(gamma_idx: f64, n: usize) -> f64 {
    let nf = n as f64;
    -gamma_idx * (nf / nf.ln()).ln()
}

/// Single threshold for minima `T = F^←(g(n,γ)/n)` with
/// `g(n,γ) = -γ log(n / log n)`, for γ < 0.
pub fn evt_single_threshold_min<D: ContinuousDistribution + ?Sized>(
    dist: &D,
    gamma_idx: f64,
    n: usize,
) -> Result<f64> {
    if !(gamma_idx < 0.0) {
        return Err(Error::domain(format!(
            "the EVT single threshold needs gamma < 0, got {gamma_idx}; for gamma = 0 any \
             threshold between E[min of n] and E[X] is constant-competitive"
        )));
    }
    if n < 3 {
        return Err(Error::HorizonTooSmall(format!("need n >= 3, got {n}")));
    }
    let q = evt_threshold_rate(gamma_idx, n) / n as f64;
    if q > 1.0 {
        return Err(Error::HorizonTooSmall(format!(
            "g(n, gamma)/n = {q} exceeds 1 for n = {n}"
        )));
    }
    dist.quantile(q)
}

/// Exact expected cost of "accept the first `X_i <= T` for `i < n`, else take
/// `X_n`":
///
/// `(1 - (1-F(T))^{n-1}) E[X | X <= T] + (1-F(T))^{n-1} E[X]`.
pub fn single_threshold_expected_value<D: ContinuousDistribution + ?Sized>(
    dist: &D,
    n: usize,
    threshold: f64,
) -> Result<f64> {
    if n == 0 {
        return Err(Error::Precondition("horizon must be at least 1".into()));
    }
    let mean = dist.mean()?;
    let p = dist.cdf(threshold);
    if n == 1 || p <= 0.0 {
        return Ok(mean);
    }
    let conditional = conditional_mean_below(dist, threshold, p)?;
    let miss = ((n - 1) as f64 * (-p).ln_1p()).exp();
    Ok((1.0 - miss) * conditional + miss * mean)
}

/// `E[X | X <= T] = x_* + ∫_{x_*}^{T} (F(T) - F(u)) du / F(T)`.
fn conditional_mean_below<D: ContinuousDistribution + ?Sized>(
    dist: &D,
    threshold: f64,
    p: f64,
) -> Result<f64> {
    let (lo, hi) = dist.support();
    if threshold >= hi || p >= 1.0 {
        return dist.mean();
    }
    let area = integrate(
        |u| p - dist.cdf(u),
        lo,
        threshold,
        Tolerance::relative(1e-11),
    )?;
    Ok(lo + area / p)
}

/// Result of [`best_single_threshold`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BestThreshold {
    pub threshold: f64,
    pub quantile: f64,
    pub value: f64,
}

const GRID_POINTS: usize = 241;
const GRID_LOG10_MIN: f64 = -12.0;
const GOLDEN_MAX_ITER: usize = 300;

/// Numerically optimal single threshold for minima.
///
/// The threshold is parameterised as `T = F^←(q)`. A log-spaced grid over
/// `q` brackets the minimiser, then golden-section search in `log q`
/// refines it until the bracket is narrower than `1e-6 · min(q, 1)`.
pub fn best_single_threshold<D: ContinuousDistribution + ?Sized>(
    dist: &D,
    n: usize,
) -> Result<BestThreshold> {
    if n == 0 {
        return Err(Error::Precondition("horizon must be at least 1".into()));
    }
    if n == 1 {
        let mean = dist.mean()?;
        return Ok(BestThreshold {
            threshold: dist.quantile(0.5)?,
            quantile: 0.5,
            value: mean,
        });
    }
    let eval = |log_q: f64| -> Result<f64> {
        let q = 10f64.powf(log_q).min(1.0);
        single_threshold_expected_value(dist, n, dist.quantile(q)?)
    };

    let step = -GRID_LOG10_MIN / (GRID_POINTS - 1) as f64;
    let grid: Vec<f64> = (0..GRID_POINTS)
        .map(|j| GRID_LOG10_MIN + j as f64 * step)
        .collect();
    let mut values = Vec::with_capacity(GRID_POINTS);
    for &x in &grid {
        values.push(eval(x)?);
    }
    let best = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(j, _)| j)
        .unwrap();
    let mut a = grid[best.saturating_sub(1)];
    let mut b = grid[(best + 1).min(GRID_POINTS - 1)];

    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = eval(c)?;
    let mut fd = eval(d)?;
    for _ in 0..GOLDEN_MAX_ITER {
        let q_mid = 10f64.powf(0.5 * (a + b));
        if 10f64.powf(b) - 10f64.powf(a) < 1e-6 * q_mid.min(1.0) {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = eval(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = eval(d)?;
        }
    }
    let (mut log_q, mut value) = if fc <= fd { (c, fc) } else { (d, fd) };
    if values[best] < value {
        log_q = grid[best];
        value = values[best];
    }
    let quantile = 10f64.powf(log_q).min(1.0);
    Ok(BestThreshold {
        threshold: dist.quantile(quantile)?,
        quantile,
        value,
    })
}

/// `c = e^{1-γ}`, the multi-unit threshold constant.
pub fn multi_unit_constant(gamma_idx: f64) -> f64 {
    (1.0 - gamma_idx).exp()
}

/// Smallest quota for which a single threshold is constant-competitive:
/// `⌈log n⌉`.
pub fn minimum_quota(n: usize) -> usize {
    (n as f64).ln().ceil().max(1.0) as usize
}

/// Multi-unit threshold for minima `T = F^←(c log n / n)`, `c = e^{1-γ}`.
pub fn multi_unit_threshold<D: ContinuousDistribution + ?Sized>(
    dist: &D,
    gamma_idx: f64,
    n: usize,
    k: usize,
) -> Result<f64> {
    if gamma_idx > GUMBEL_EPS {
        return Err(Error::domain(format!(
            "multi-unit threshold needs gamma <= 0, got {gamma_idx}"
        )));
    }
    if n < 2 {
        return Err(Error::HorizonTooSmall(format!("need n >= 2, got {n}")));
    }
    let nf = n as f64;
    if (k as f64) < nf.ln() {
        return Err(Error::Precondition(format!(
            "quota k = {k} is below log n = {:.4}",
            nf.ln()
        )));
    }
    let q = multi_unit_constant(gamma_idx) * nf.ln() / nf;
    if q > 1.0 {
        return Err(Error::HorizonTooSmall(format!(
            "c log n / n = {q} exceeds 1 for n = {n}"
        )));
    }
    dist.quantile(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{Exponential, ReverseWeibullWitness, Uniform};

    #[test]
    fn dp_examples() {
        let t = optimal_values(&Uniform, 2, Objective::Min).unwrap();
        assert!((t.last() - 0.375).abs() < 1e-15);
        let t = optimal_values(&Uniform, 3, Objective::Max).unwrap();
        assert!((t.value(2).unwrap() - 0.625).abs() < 1e-15);
        assert!((t.last() - 0.695_312_5).abs() < 1e-15);
        let e = Exponential::new(3.0).unwrap();
        for obj in [Objective::Min, Objective::Max] {
            let t = optimal_values(&e, 1, obj).unwrap();
            assert_eq!(t.horizon(), 1);
            assert!((t.last() - 1.0 / 3.0).abs() < 1e-15);
        }
        assert!(optimal_values(&e, 0, Objective::Min).is_err());
        assert_eq!(t_value_out_of_range(), None);
    }

    fn t_value_out_of_range() -> Option<f64> {
        optimal_values(&Uniform, 2, Objective::Min)
            .unwrap()
            .value(3)
    }

    #[test]
    fn schedule_examples() {
        let t = optimal_values(&Uniform, 3, Objective::Min).unwrap();
        let s = threshold_schedule(&t);
        assert_eq!(
            s,
            ThresholdPolicy::Schedule {
                thresholds: vec![0.375, 0.5, 1.0]
            }
        );
        let t = optimal_values(&Uniform, 2, Objective::Max).unwrap();
        assert_eq!(
            threshold_schedule(&t),
            ThresholdPolicy::Schedule {
                thresholds: vec![0.5, 0.0]
            }
        );
        let t = optimal_values(&Exponential::new(1.0).unwrap(), 1, Objective::Min).unwrap();
        assert_eq!(
            threshold_schedule(&t),
            ThresholdPolicy::Schedule {
                thresholds: vec![f64::INFINITY]
            }
        );
    }

    #[test]
    fn evt_threshold_examples() {
        let e = Exponential::new(1.0).unwrap();
        let g = (100f64 / 100f64.ln()).ln();
        assert!((g - 3.077_99).abs() < 1e-5);
        let t = evt_single_threshold_min(&e, -1.0, 100).unwrap();
        assert!((t - (-(1.0 - g / 100.0f64).ln())).abs() < 1e-15);
        assert!((t - 0.031_264).abs() < 1e-6);
        let t = evt_single_threshold_min(&Uniform, -1.0, 100).unwrap();
        assert!((t - 0.030_779_9).abs() < 1e-7);

        let w = ReverseWeibullWitness::new(-2.0).unwrap();
        let g = 2.0 * (16f64 / 16f64.ln()).ln();
        assert!((g - 3.50).abs() < 0.01);
        let t = evt_single_threshold_min(&w, -2.0, 16).unwrap();
        assert!((t - w.quantile(g / 16.0).unwrap()).abs() < 1e-15);
        assert!((g / 16.0 - 0.2188).abs() < 1e-3);
    }

    #[test]
    fn evt_threshold_errors() {
        assert!(matches!(
            evt_single_threshold_min(&Uniform, 0.0, 100),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            evt_single_threshold_min(&Uniform, -1.0, 2),
            Err(Error::HorizonTooSmall(_))
        ));
        // g/n > 1 for a steep index and a short horizon
        assert!(matches!(
            evt_single_threshold_min(&Uniform, -10.0, 5),
            Err(Error::HorizonTooSmall(_))
        ));
    }

    #[test]
    fn single_value_examples() {
        assert!((single_threshold_expected_value(&Uniform, 2, 0.5).unwrap() - 0.375).abs() < 1e-12);
        assert!((single_threshold_expected_value(&Uniform, 2, 1.0).unwrap() - 0.5).abs() < 1e-12);
        assert!((single_threshold_expected_value(&Uniform, 2, 0.0).unwrap() - 0.5).abs() < 1e-15);
        let e = Exponential::new(1.0).unwrap();
        assert_eq!(single_threshold_expected_value(&e, 1, 0.3).unwrap(), 1.0);
    }

    #[test]
    fn single_value_closed_form_uniform() {
        // E[X | X <= T] = T/2 for the uniform
        for &(n, t) in &[(3usize, 0.2), (10, 0.05), (50, 0.4)] {
            let miss = (1.0f64 - t).powi(n as i32 - 1);
            let expected = (1.0 - miss) * t / 2.0 + miss * 0.5;
            let v = single_threshold_expected_value(&Uniform, n, t).unwrap();
            assert!((v - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn best_threshold_uniform_two_steps() {
        let b = best_single_threshold(&Uniform, 2).unwrap();
        assert!((b.threshold - 0.5).abs() < 1e-5);
        assert!((b.value - 0.375).abs() < 1e-10);
        let b = best_single_threshold(&Exponential::new(1.0).unwrap(), 1).unwrap();
        assert_eq!(b.value, 1.0);
    }

    #[test]
    fn best_threshold_beats_evt_threshold() {
        let e = Exponential::new(1.0).unwrap();
        let n = 100;
        let b = best_single_threshold(&e, n).unwrap();
        let evt =
            single_threshold_expected_value(&e, n, evt_single_threshold_min(&e, -1.0, n).unwrap())
                .unwrap();
        assert!(b.value <= evt + 1e-12);
        assert!(b.value >= 0.01 && b.value <= 1.0);
        // brute-force grid oracle in q
        let grid_best = (1..1000)
            .map(|j| {
                let q = j as f64 / 1000.0;
                single_threshold_expected_value(&e, n, e.quantile(q).unwrap()).unwrap()
            })
            .fold(f64::INFINITY, f64::min);
        assert!(b.value <= grid_best + 1e-12);
    }

    #[test]
    fn multi_unit_threshold_examples() {
        let n = 10_000;
        let c = multi_unit_constant(-1.0);
        assert!((c - 7.389_056).abs() < 1e-6);
        let t = multi_unit_threshold(&Uniform, -1.0, n, 10).unwrap();
        assert!((t - c * (n as f64).ln() / n as f64).abs() < 1e-15);
        assert!((t - 6.806e-3).abs() < 1e-6);
        let e = Exponential::new(1.0).unwrap();
        let t = multi_unit_threshold(&e, -1.0, n, 10).unwrap();
        assert!((t - 6.829e-3).abs() < 1e-6);
        let t = multi_unit_threshold(&e, 0.0, n, 10).unwrap();
        let q = std::f64::consts::E * (n as f64).ln() / n as f64;
        assert!((t - e.quantile(q).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn multi_unit_threshold_errors() {
        assert!(matches!(
            multi_unit_threshold(&Uniform, -1.0, 10_000, 9),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            multi_unit_threshold(&Uniform, -1.0, 10, 3),
            Err(Error::HorizonTooSmall(_))
        ));
        assert!(multi_unit_threshold(&Uniform, 0.5, 10_000, 10).is_err());
        assert_eq!(minimum_quota(1000), 7);
        assert_eq!(minimum_quota(100_000), 12);
    }

    #[test]
    fn policy_constructors() {
        assert!(ThresholdPolicy::single(0.3, 0).is_err());
        assert!(ThresholdPolicy::multi_unit(0.3, 4, 5).is_err());
        let p = ThresholdPolicy::multi_unit(0.3, 4, 2).unwrap();
        assert_eq!((p.horizon(), p.quota()), (4, 2));
    }
}
