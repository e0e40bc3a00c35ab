//! Monte Carlo estimation of competitive ratios.
//!
//! Every trial draws its randomness from a ChaCha8 stream keyed on
//! `(seed, trial)`; the `j`-th uniform consumed by a trial is word `j` of that
//! stream. Per-trial outcomes are collected in trial order and reduced with a
//! fixed pairwise summation, so estimates are bit-identical for any number of
//! worker threads.
//!
//! Single and multi-unit threshold policies are simulated by jumping straight
//! to the next accepted value: the gap between acceptances is geometric and
//! the accepted value is drawn from the distribution conditioned on crossing
//! the threshold. Schedules are simulated draw by draw.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::benchmark::{prophet_multi_unit, prophet_value};
use crate::distributions::ContinuousDistribution;
use crate::error::{Error, Result};
use crate::policies::ThresholdPolicy;
use crate::Objective;

/// Minimum number of trials accepted by [`estimate_ratio`].
pub const MIN_TRIALS: usize = 100;

const Z95: f64 = 1.96;

/// Empirical competitive ratio with a 95% normal confidence interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioEstimate {
    pub mean_alg: f64,
    pub benchmark: f64,
    pub ratio: f64,
    /// Standard error of `mean_alg`.
    pub stderr: f64,
    pub ci95_lo: f64,
    pub ci95_hi: f64,
    pub trials: usize,
    pub seed: u64,
}

impl RatioEstimate {
    /// Standard error of `ratio`.
    pub fn ratio_stderr(&self) -> f64 {
        self.stderr / self.benchmark.abs()
    }
}

/// How trials are generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sampling {
    /// Skip ahead between acceptances for single and multi-unit thresholds,
    /// draw by draw for schedules.
    #[default]
    Auto,
    /// Always draw all `n` values and call [`run_trial`].
    FullDraws,
}

/// Knobs for [`estimate_ratio_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimulationOptions {
    pub trials: usize,
    pub seed: u64,
    /// Worker threads; `0` uses the global rayon pool.
    pub workers: usize,
    pub sampling: Sampling,
}

impl SimulationOptions {
    pub fn new(trials: usize, seed: u64) -> Self {
        SimulationOptions {
            trials,
            seed,
            workers: 0,
            sampling: Sampling::Auto,
        }
    }

    pub fn workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn sampling(mut self, sampling: Sampling) -> Self {
        self.sampling = sampling;
        self
    }
}

fn accepts(x: f64, threshold: f64, objective: Objective) -> bool {
    match objective {
        Objective::Max => x >= threshold,
        Objective::Min => x <= threshold,
    }
}

/// Applies `policy` to a realised sequence of draws.
///
/// Returns the selected value, or the sum of selected values for a
/// multi-unit policy.
pub fn run_trial(policy: &ThresholdPolicy, draws: &[f64], objective: Objective) -> Result<f64> {
    let n = policy.horizon();
    if draws.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: draws.len(),
        });
    }
    match policy {
        ThresholdPolicy::Schedule { thresholds } => Ok(draws
            .iter()
            .zip(thresholds)
            .enumerate()
            .find(|&(i, (&x, &t))| i + 1 == n || accepts(x, t, objective))
            .map(|(_, (&x, _))| x)
            .expect("a schedule accepts its last draw")),
        ThresholdPolicy::Single { threshold, .. } => Ok(draws[..n - 1]
            .iter()
            .copied()
            .find(|&x| accepts(x, *threshold, objective))
            .unwrap_or(draws[n - 1])),
        ThresholdPolicy::MultiUnit {
            threshold, quota, ..
        } => {
            let mut need = *quota;
            let mut total = 0.0;
            for (i, &x) in draws.iter().enumerate() {
                if need == 0 {
                    break;
                }
                if n - i == need || accepts(x, *threshold, objective) {
                    total += x;
                    need -= 1;
                }
            }
            Ok(total)
        }
    }
}

/// Uniform stream for one trial.
struct TrialStream(ChaCha8Rng);

impl TrialStream {
    fn new(seed: u64, trial: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial);
        TrialStream(rng)
    }

    /// Uniform on the open interval `(0, 1)`.
    fn next(&mut self) -> f64 {
        ((self.0.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }
}

/// Probability that a single draw crosses `threshold`.
fn crossing_probability<D: ContinuousDistribution + ?Sized>(
    dist: &D,
    threshold: f64,
    objective: Objective,
) -> f64 {
    match objective {
        Objective::Max => dist.sf(threshold),
        Objective::Min => dist.cdf(threshold),
    }
}

/// A draw conditioned on crossing the threshold, which happens with
/// probability `p`.
fn crossing_draw<D: ContinuousDistribution + ?Sized>(
    dist: &D,
    p: f64,
    objective: Objective,
    u: f64,
) -> f64 {
    match objective {
        Objective::Min => dist.sample(p * u),
        Objective::Max => dist.sample(1.0 - p * u),
    }
}

/// Number of failures before the first success, or `u64::MAX` when the
/// success probability is zero.
fn geometric_gap(p: f64, u: f64) -> u64 {
    if p >= 1.0 {
        return 0;
    }
    if p <= 0.0 {
        return u64::MAX;
    }
    let g = (u.ln() / (-p).ln_1p()).floor();
    if g >= u64::MAX as f64 {
        u64::MAX
    } else {
        g as u64
    }
}

fn full_draw_trial<D: ContinuousDistribution + ?Sized>(
    dist: &D,
    policy: &ThresholdPolicy,
    objective: Objective,
    stream: &mut TrialStream,
) -> f64 {
    let draws: Vec<f64> = (0..policy.horizon())
        .map(|_| dist.sample(stream.next()))
        .collect();
    run_trial(policy, &draws, objective).unwrap_or(f64::NAN)
}

fn fast_trial<D: ContinuousDistribution + ?Sized>(
    dist: &D,
    policy: &ThresholdPolicy,
    objective: Objective,
    p: f64,
    stream: &mut TrialStream,
) -> f64 {
    match policy {
        ThresholdPolicy::Schedule { thresholds } => {
            let n = thresholds.len();
            for (i, &t) in thresholds.iter().enumerate() {
                let x = dist.sample(stream.next());
                if i + 1 == n || accepts(x, t, objective) {
                    return x;
                }
            }
            unreachable!("schedules are never empty")
        }
        ThresholdPolicy::Single { horizon, .. } => {
            let gap = geometric_gap(p, stream.next());
            let u = stream.next();
            if gap < (*horizon as u64) - 1 {
                crossing_draw(dist, p, objective, u)
            } else {
                dist.sample(u)
            }
        }
        ThresholdPolicy::MultiUnit { horizon, quota, .. } => {
            let n = *horizon as u64;
            let mut need = *quota as u64;
            // 0-based index of the next unseen draw
            let mut pos = 0u64;
            let mut total = 0.0;
            while need > 0 {
                let forced_from = n - need;
                let gap = geometric_gap(p, stream.next());
                if pos.saturating_add(gap) < forced_from {
                    total += crossing_draw(dist, p, objective, stream.next());
                    pos += gap + 1;
                    need -= 1;
                } else {
                    for _ in 0..need {
                        total += dist.sample(stream.next());
                    }
                    need = 0;
                }
            }
            total
        }
    }
}

/// Pairwise sum with a fixed split order.
fn pairwise_sum(xs: &[f64]) -> f64 {
    const BLOCK: usize = 64;
    if xs.len() <= BLOCK {
        xs.iter().sum()
    } else {
        let mid = xs.len() / 2;
        pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
    }
}

/// Per-trial outcomes of `policy` in trial order.
pub fn simulate_trials<D: ContinuousDistribution + ?Sized>(
    dist: &D,
    policy: &ThresholdPolicy,
    objective: Objective,
    options: SimulationOptions,
) -> Result<Vec<f64>> {
    let p = match policy {
        ThresholdPolicy::Single { threshold, .. }
        | ThresholdPolicy::MultiUnit { threshold, .. } => {
            crossing_probability(dist, *threshold, objective)
        }
        ThresholdPolicy::Schedule { .. } => f64::NAN,
    };
    let run = || -> Vec<f64> {
        (0..options.trials as u64)
            .into_par_iter()
            .map(|trial| {
                let mut stream = TrialStream::new(options.seed, trial);
                match options.sampling {
                    Sampling::Auto => fast_trial(dist, policy, objective, p, &mut stream),
                    Sampling::FullDraws => full_draw_trial(dist, policy, objective, &mut stream),
                }
            })
            .collect()
    };
    let values = if options.workers == 0 {
        run()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(options.workers)
            .build()
            .map_err(|e| Error::Precondition(format!("cannot start worker pool: {e}")))?
            .install(run)
    };
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::domain(format!(
            "trial {i} produced a non-finite value"
        )));
    }
    Ok(values)
}

/// Mean and standard error of the mean, reduced in a fixed order.
pub fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let m = values.len() as f64;
    let mean = pairwise_sum(values) / m;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let sq: Vec<f64> = values.iter().map(|v| (v - mean) * (v - mean)).collect();
    let var = pairwise_sum(&sq) / (m - 1.0);
    (mean, (var / m).sqrt())
}

/// Estimates `E[ALG] / benchmark` for `policy` on i.i.d. draws from `dist`,
/// using the global thread pool.
///
/// The benchmark is the exact prophet value: `μ_{n:n}` or `μ_{1:n}` for single
/// selection, the sum of the `k` smallest expected order statistics for a
/// multi-unit policy.
pub fn estimate_ratio<D: ContinuousDistribution + ?Sized>(
    dist: &D,
    policy: &ThresholdPolicy,
    objective: Objective,
    trials: usize,
    seed: u64,
) -> Result<RatioEstimate> {
    estimate_ratio_with(
        dist,
        policy,
        objective,
        SimulationOptions::new(trials, seed),
    )
}

/// [`estimate_ratio`] with explicit worker count and sampling mode.
pub fn estimate_ratio_with<D: ContinuousDistribution + ?Sized>(
    dist: &D,
    policy: &ThresholdPolicy,
    objective: Objective,
    options: SimulationOptions,
) -> Result<RatioEstimate> {
    if options.trials < MIN_TRIALS {
        return Err(Error::Precondition(format!(
            "need at least {MIN_TRIALS} trials, got {}",
            options.trials
        )));
    }
    let n = policy.horizon();
    let benchmark = match policy {
        ThresholdPolicy::MultiUnit { quota, .. } => match objective {
            Objective::Min => prophet_multi_unit(dist, *quota, n)?,
            Objective::Max => {
                return Err(Error::Precondition(
                    "multi-unit benchmarks are defined for minimisation only".into(),
                ))
            }
        },
        _ => prophet_value(dist, n, objective)?,
    };
    if !benchmark.is_finite() || benchmark == 0.0 {
        return Err(Error::InfiniteMean(format!(
            "benchmark for {} is {benchmark}",
            dist.name()
        )));
    }
    let values = simulate_trials(dist, policy, objective, options)?;
    let (mean_alg, stderr) = mean_and_stderr(&values);
    let lo = (mean_alg - Z95 * stderr) / benchmark;
    let hi = (mean_alg + Z95 * stderr) / benchmark;
    Ok(RatioEstimate {
        mean_alg,
        benchmark,
        ratio: mean_alg / benchmark,
        stderr,
        ci95_lo: lo.min(hi),
        ci95_hi: lo.max(hi),
        trials: options.trials,
        seed: options.seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{Exponential, Uniform};
    use crate::policies::{optimal_values, threshold_schedule};

    #[test]
    fn hand_traces() {
        let s = ThresholdPolicy::Schedule {
            thresholds: vec![0.375, 0.5, 1.0],
        };
        assert_eq!(
            run_trial(&s, &[0.4, 0.45, 0.9], Objective::Min).unwrap(),
            0.45
        );
        assert_eq!(
            run_trial(&s, &[0.3, 0.45, 0.9], Objective::Min).unwrap(),
            0.3
        );
        assert_eq!(
            run_trial(&s, &[0.6, 0.55, 0.9], Objective::Min).unwrap(),
            0.9
        );

        let single = ThresholdPolicy::single(0.5, 2).unwrap();
        assert_eq!(
            run_trial(&single, &[0.8, 0.9], Objective::Min).unwrap(),
            0.9
        );
        assert_eq!(
            run_trial(&single, &[0.8, 0.9], Objective::Max).unwrap(),
            0.8
        );

        let multi = ThresholdPolicy::multi_unit(0.3, 4, 2).unwrap();
        let v = run_trial(&multi, &[0.2, 0.5, 0.6, 0.1], Objective::Min).unwrap();
        assert!((v - 0.3).abs() < 1e-15);
        // nothing passes, so the last two are forced
        let v = run_trial(&multi, &[0.9, 0.5, 0.6, 0.7], Objective::Min).unwrap();
        assert!((v - 1.3).abs() < 1e-15);
        // one accepted early, the last one forced
        let v = run_trial(&multi, &[0.1, 0.5, 0.6, 0.7], Objective::Min).unwrap();
        assert!((v - 0.8).abs() < 1e-15);
    }

    #[test]
    fn length_mismatch() {
        let single = ThresholdPolicy::single(0.5, 3).unwrap();
        assert_eq!(
            run_trial(&single, &[0.1, 0.2], Objective::Min),
            Err(Error::LengthMismatch {
                expected: 3,
                actual: 2
            })
        );
    }

    #[test]
    fn uniforms_are_open_and_keyed() {
        let mut a = TrialStream::new(7, 3);
        let mut b = TrialStream::new(7, 3);
        let mut c = TrialStream::new(7, 4);
        let xa: Vec<f64> = (0..100).map(|_| a.next()).collect();
        let xb: Vec<f64> = (0..100).map(|_| b.next()).collect();
        let xc: Vec<f64> = (0..100).map(|_| c.next()).collect();
        assert_eq!(xa, xb);
        assert_ne!(xa, xc);
        assert!(xa.iter().all(|&u| u > 0.0 && u < 1.0));
    }

    #[test]
    fn geometric_gap_edges() {
        assert_eq!(geometric_gap(1.0, 0.3), 0);
        assert_eq!(geometric_gap(0.0, 0.3), u64::MAX);
        assert_eq!(geometric_gap(0.5, 0.6), 0);
        assert_eq!(geometric_gap(0.5, 0.4), 1);
    }

    #[test]
    fn single_threshold_two_steps() {
        let p = ThresholdPolicy::single(0.5, 2).unwrap();
        let est = estimate_ratio(&Uniform, &p, Objective::Min, 200_000, 42).unwrap();
        assert!((est.mean_alg - 0.375).abs() < 4.0 * est.stderr);
        assert!((est.benchmark - 1.0 / 3.0).abs() < 1e-15);
        assert!(est.ci95_lo < est.ratio && est.ratio < est.ci95_hi);
    }

    #[test]
    fn one_step_ratio_is_one() {
        let e = Exponential::new(2.0).unwrap();
        for obj in [Objective::Min, Objective::Max] {
            let s = threshold_schedule(&optimal_values(&e, 1, obj).unwrap());
            let est = estimate_ratio(&e, &s, obj, 50_000, 1).unwrap();
            assert!((est.ratio - 1.0).abs() < 4.0 * est.ratio_stderr());
        }
    }

    #[test]
    fn rejects_few_trials() {
        let p = ThresholdPolicy::single(0.5, 2).unwrap();
        assert!(matches!(
            estimate_ratio(&Uniform, &p, Objective::Min, 99, 0),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn pairwise_sum_is_exact_on_integers() {
        let xs: Vec<f64> = (1..=10_000).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&xs), 50_005_000.0);
    }
}
