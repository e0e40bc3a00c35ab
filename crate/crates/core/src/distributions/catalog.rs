use super::numeric::check_probability;
use super::ContinuousDistribution;
use crate::error::{Error, Result};
use crate::special::{gamma, gamma_ratio, regularized_gamma_p, regularized_gamma_q};

/// Uniform distribution on `[0, 1]`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Uniform;

impl ContinuousDistribution for Uniform {
    fn name(&self) -> String {
        "uniform".into()
    }

    fn support(&self) -> (f64, f64) {
        (0.0, 1.0)
    }

    fn cdf(&self, x: f64) -> f64 {
        x.clamp(0.0, 1.0)
    }

    fn pdf(&self, x: f64) -> f64 {
        if (0.0..=1.0).contains(&x) {
            1.0
        } else {
            0.0
        }
    }

    fn quantile(&self, q: f64) -> Result<f64> {
        check_probability(q)?;
        Ok(q)
    }

    fn sample(&self, u: f64) -> f64 {
        u
    }

    fn mean(&self) -> Result<f64> {
        Ok(0.5)
    }

    fn gamma_max(&self) -> Option<f64> {
        Some(-1.0)
    }

    fn gamma_min(&self) -> Option<f64> {
        Some(-1.0)
    }

    fn tail_integral_upper(&self, a: f64) -> Result<f64> {
        Ok(if a < 0.0 {
            0.5 - a
        } else if a >= 1.0 {
            0.0
        } else {
            0.5 * (1.0 - a) * (1.0 - a)
        })
    }

    fn tail_integral_lower(&self, b: f64) -> Result<f64> {
        let b = b.clamp(0.0, 1.0);
        Ok(b - 0.5 * b * b)
    }

    fn exact_order_statistic(&self, i: usize, n: usize) -> Option<f64> {
        Some(i as f64 / (n as f64 + 1.0))
    }
}

/// Exponential distribution with the given rate on `[0, inf)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exponential {
    rate: f64,
}

impl Exponential {
    pub fn new(rate: f64) -> Result<Self> {
        if rate > 0.0 && rate.is_finite() {
            Ok(Exponential { rate })
        } else {
            Err(Error::domain(format!(
                "exponential rate must be positive, got {rate}"
            )))
        }
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }
}

impl ContinuousDistribution for Exponential {
    fn name(&self) -> String {
        format!("exponential:rate={}", self.rate)
    }

    fn support(&self) -> (f64, f64) {
        (0.0, f64::INFINITY)
    }

    fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            0.0
        } else {
            -(-self.rate * x).exp_m1()
        }
    }

    fn sf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            1.0
        } else {
            (-self.rate * x).exp()
        }
    }

    fn pdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            0.0
        } else {
            self.rate * (-self.rate * x).exp()
        }
    }

    fn quantile(&self, q: f64) -> Result<f64> {
        check_probability(q)?;
        Ok(-(-q).ln_1p() / self.rate)
    }

    fn mean(&self) -> Result<f64> {
        Ok(1.0 / self.rate)
    }

    fn gamma_max(&self) -> Option<f64> {
        Some(0.0)
    }

    fn gamma_min(&self) -> Option<f64> {
        Some(-1.0)
    }

    fn tail_integral_upper(&self, a: f64) -> Result<f64> {
        Ok(if a < 0.0 {
            -a + 1.0 / self.rate
        } else {
            (-self.rate * a).exp() / self.rate
        })
    }

    fn tail_integral_lower(&self, b: f64) -> Result<f64> {
        Ok(if b <= 0.0 {
            0.0
        } else {
            -(-self.rate * b).exp_m1() / self.rate
        })
    }

    /// Rényi representation: `E[X_(i)] = (1/rate) Σ_{j=n-i+1}^{n} 1/j`.
    fn exact_order_statistic(&self, i: usize, n: usize) -> Option<f64> {
        let sum: f64 = (n + 1 - i..=n).rev().map(|j| 1.0 / j as f64).sum();
        Some(sum / self.rate)
    }
}

/// Pareto distribution `F(x) = 1 - x^{-alpha}` on `[1, inf)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pareto {
    alpha: f64,
}

impl Pareto {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha > 0.0 && alpha.is_finite() {
            Ok(Pareto { alpha })
        } else {
            Err(Error::domain(format!(
                "pareto alpha must be positive, got {alpha}"
            )))
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    fn infinite_mean(&self) -> Error {
        Error::InfiniteMean(format!(
            "pareto with alpha = {} <= 1 has no finite mean",
            self.alpha
        ))
    }
}

impl ContinuousDistribution for Pareto {
    fn name(&self) -> String {
        format!("pareto:alpha={}", self.alpha)
    }

    fn support(&self) -> (f64, f64) {
        (1.0, f64::INFINITY)
    }

    fn cdf(&self, x: f64) -> f64 {
        if x <= 1.0 {
            0.0
        } else {
            -(-self.alpha * x.ln()).exp_m1()
        }
    }

    fn sf(&self, x: f64) -> f64 {
        if x <= 1.0 {
            1.0
        } else {
            x.powf(-self.alpha)
        }
    }

    fn pdf(&self, x: f64) -> f64 {
        if x < 1.0 {
            0.0
        } else {
            self.alpha * x.powf(-self.alpha - 1.0)
        }
    }

    fn quantile(&self, q: f64) -> Result<f64> {
        check_probability(q)?;
        if q == 1.0 {
            return Ok(f64::INFINITY);
        }
        Ok((-(-q).ln_1p() / self.alpha).exp())
    }

    fn has_finite_mean(&self) -> bool {
        self.alpha > 1.0
    }

    fn mean(&self) -> Result<f64> {
        if !self.has_finite_mean() {
            return Err(self.infinite_mean());
        }
        Ok(self.alpha / (self.alpha - 1.0))
    }

    fn gamma_max(&self) -> Option<f64> {
        Some(1.0 / self.alpha)
    }

    fn tail_integral_upper(&self, a: f64) -> Result<f64> {
        if !self.has_finite_mean() {
            return Err(self.infinite_mean());
        }
        let am1 = self.alpha - 1.0;
        Ok(if a < 1.0 {
            (1.0 - a) + 1.0 / am1
        } else {
            a.powf(-am1) / am1
        })
    }

    fn tail_integral_lower(&self, b: f64) -> Result<f64> {
        if b <= 1.0 {
            return Ok(0.0);
        }
        let am1 = self.alpha - 1.0;
        if am1 == 0.0 {
            return Ok(b.ln());
        }
        // (1 - b^{1-alpha}) / (alpha - 1)
        Ok(-(-am1 * b.ln()).exp_m1() / am1)
    }

    /// `E[X_(i)] = Γ(n+1) Γ(n-i+1-1/alpha) / (Γ(n-i+1) Γ(n+1-1/alpha))`.
    fn exact_order_statistic(&self, i: usize, n: usize) -> Option<f64> {
        let inv = 1.0 / self.alpha;
        let j = (n + 1 - i) as f64;
        if j - inv <= 0.0 {
            return None;
        }
        let a = gamma_ratio(n as f64 + 1.0, n as f64 + 1.0 - inv).ok()?;
        let b = gamma_ratio(j - inv, j).ok()?;
        Some(a * b)
    }
}

/// The family `F(x) = 1 - exp(-x^{-1/gamma})` on `[0, inf)` for `gamma < 0`.
///
/// Its minima lie in the reverse Weibull domain with index `gamma`, and
/// `E[min of n] = Γ(1 - gamma) / n^{-gamma}` exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReverseWeibullWitness {
    gamma: f64,
}

impl ReverseWeibullWitness {
    pub fn new(gamma: f64) -> Result<Self> {
        if gamma < 0.0 && gamma.is_finite() {
            Ok(ReverseWeibullWitness { gamma })
        } else {
            Err(Error::domain(format!(
                "reverse Weibull witness needs gamma < 0, got {gamma}"
            )))
        }
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Weibull shape `-1/gamma`.
    fn shape(&self) -> f64 {
        -1.0 / self.gamma
    }

    fn gamma_one_minus(&self) -> f64 {
        gamma(1.0 - self.gamma).expect("1 - gamma > 1")
    }
}

impl ContinuousDistribution for ReverseWeibullWitness {
    fn name(&self) -> String {
        format!("rw_witness:gamma={}", self.gamma)
    }

    fn support(&self) -> (f64, f64) {
        (0.0, f64::INFINITY)
    }

    fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            0.0
        } else {
            -(-x.powf(self.shape())).exp_m1()
        }
    }

    fn sf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            1.0
        } else {
            (-x.powf(self.shape())).exp()
        }
    }

    fn pdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let k = self.shape();
        let xk = x.powf(k);
        k * xk / x * (-xk).exp()
    }

    fn quantile(&self, q: f64) -> Result<f64> {
        check_probability(q)?;
        Ok((-(-q).ln_1p()).powf(-self.gamma))
    }

    fn mean(&self) -> Result<f64> {
        Ok(self.gamma_one_minus())
    }

    fn gamma_max(&self) -> Option<f64> {
        Some(0.0)
    }

    fn gamma_min(&self) -> Option<f64> {
        Some(self.gamma)
    }

    /// `Γ(1-gamma) Q(-gamma, a^{-1/gamma})`.
    fn tail_integral_upper(&self, a: f64) -> Result<f64> {
        if a < 0.0 {
            return Ok(-a + self.gamma_one_minus());
        }
        Ok(self.gamma_one_minus() * regularized_gamma_q(-self.gamma, a.powf(self.shape()))?)
    }

    /// `Γ(1-gamma) P(-gamma, b^{-1/gamma})`.
    fn tail_integral_lower(&self, b: f64) -> Result<f64> {
        if b <= 0.0 {
            return Ok(0.0);
        }
        Ok(self.gamma_one_minus() * regularized_gamma_p(-self.gamma, b.powf(self.shape()))?)
    }

    fn exact_order_statistic(&self, i: usize, n: usize) -> Option<f64> {
        (i == 1).then(|| self.gamma_one_minus() / (n as f64).powf(-self.gamma))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::numeric;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn cdf_examples() {
        assert_eq!(Uniform.cdf(0.3), 0.3);
        let rw = ReverseWeibullWitness::new(-1.0).unwrap();
        assert!(close(rw.cdf(1.0), 1.0 - (-1.0f64).exp(), 1e-15));
        assert!(close(Pareto::new(2.0).unwrap().cdf(2.0), 0.75, 1e-15));
    }

    #[test]
    fn cdf_clamps_outside_support() {
        assert_eq!(Uniform.cdf(-3.0), 0.0);
        assert_eq!(Uniform.cdf(7.0), 1.0);
        assert_eq!(Pareto::new(2.0).unwrap().cdf(0.5), 0.0);
        assert_eq!(Exponential::new(1.0).unwrap().cdf(-1.0), 0.0);
    }

    #[test]
    fn quantile_examples() {
        assert_eq!(Uniform.quantile(0.25).unwrap(), 0.25);
        let e = Exponential::new(1.0).unwrap();
        assert!(close(
            e.quantile(0.001).unwrap(),
            0.001_000_500_333_583_5,
            1e-14
        ));
        let rw = ReverseWeibullWitness::new(-2.0).unwrap();
        assert!(close(
            rw.quantile(1.0 - (-1.0f64).exp()).unwrap(),
            1.0,
            1e-14
        ));
    }

    #[test]
    fn quantile_endpoints() {
        let e = Exponential::new(2.0).unwrap();
        assert_eq!(e.quantile(0.0).unwrap(), 0.0);
        assert_eq!(e.quantile(1.0).unwrap(), f64::INFINITY);
        assert_eq!(Pareto::new(3.0).unwrap().quantile(0.0).unwrap(), 1.0);
        assert_eq!(Uniform.quantile(1.0).unwrap(), 1.0);
    }

    #[test]
    fn quantile_rejects_bad_probability() {
        assert!(matches!(Uniform.quantile(1.5), Err(Error::Domain(_))));
        assert!(matches!(
            Exponential::new(1.0).unwrap().quantile(-0.1),
            Err(Error::Domain(_))
        ));
        assert!(Uniform.quantile(f64::NAN).is_err());
    }

    #[test]
    fn sampling_examples() {
        assert_eq!(Uniform.sample(0.7), 0.7);
        let e = Exponential::new(1.0).unwrap();
        assert!(close(e.sample(1.0 - (-2.0f64).exp()), 2.0, 1e-14));
        assert!(close(Pareto::new(2.0).unwrap().sample(0.75), 2.0, 1e-14));
    }

    #[test]
    fn upper_tail_examples() {
        assert!(close(
            Uniform.tail_integral_upper(0.5).unwrap(),
            0.125,
            1e-15
        ));
        let e = Exponential::new(1.0).unwrap();
        assert!(close(e.tail_integral_upper(0.0).unwrap(), 1.0, 1e-15));
        let p = Pareto::new(2.0).unwrap();
        assert!(close(p.tail_integral_upper(2.0).unwrap(), 0.5, 1e-15));
        assert!(close(p.tail_integral_upper(5.0).unwrap(), 0.2, 1e-15));
    }

    #[test]
    fn lower_tail_examples() {
        assert!(close(
            Uniform.tail_integral_lower(0.5).unwrap(),
            0.375,
            1e-15
        ));
        assert_eq!(Uniform.tail_integral_lower(0.0).unwrap(), 0.0);
        assert_eq!(
            Pareto::new(2.0).unwrap().tail_integral_lower(1.0).unwrap(),
            0.0
        );
        let rw = ReverseWeibullWitness::new(-2.0).unwrap();
        let expected = 2.0 - 4.0 * (-1.0f64).exp();
        assert!(close(rw.tail_integral_lower(1.0).unwrap(), expected, 1e-14));
        assert!((expected - 0.528_482).abs() < 1e-6);
    }

    #[test]
    fn infinite_mean_is_reported() {
        let p = Pareto::new(1.0).unwrap();
        assert!(matches!(
            p.tail_integral_upper(2.0),
            Err(Error::InfiniteMean(_))
        ));
        assert!(matches!(p.mean(), Err(Error::InfiniteMean(_))));
        let p = Pareto::new(0.5).unwrap();
        assert!(matches!(
            numeric::tail_integral_upper(&p, 2.0),
            Err(Error::InfiniteMean(_))
        ));
    }

    #[test]
    fn constructors_validate() {
        assert!(Exponential::new(0.0).is_err());
        assert!(Pareto::new(-1.0).is_err());
        assert!(ReverseWeibullWitness::new(0.0).is_err());
        assert!(ReverseWeibullWitness::new(0.5).is_err());
    }

    #[test]
    fn known_indices() {
        assert_eq!(Uniform.gamma_max(), Some(-1.0));
        assert_eq!(Uniform.gamma_min(), Some(-1.0));
        let e = Exponential::new(1.0).unwrap();
        assert_eq!(e.gamma_max(), Some(0.0));
        assert_eq!(e.gamma_min(), Some(-1.0));
        assert_eq!(Pareto::new(4.0).unwrap().gamma_max(), Some(0.25));
    }

    #[test]
    fn closed_forms_agree_with_quadrature() {
        let dists: Vec<Box<dyn ContinuousDistribution>> = vec![
            Box::new(Uniform),
            Box::new(Exponential::new(1.5).unwrap()),
            Box::new(Pareto::new(2.5).unwrap()),
            Box::new(ReverseWeibullWitness::new(-1.0).unwrap()),
            Box::new(ReverseWeibullWitness::new(-2.0).unwrap()),
            Box::new(ReverseWeibullWitness::new(-0.5).unwrap()),
        ];
        for d in &dists {
            for &q in &[0.01, 0.2, 0.5, 0.9, 0.999] {
                let x = d.quantile(q).unwrap();
                let up = d.tail_integral_upper(x).unwrap();
                let up_num = numeric::tail_integral_upper(d.as_ref(), x).unwrap();
                assert!(
                    close(up_num, up, 1e-9),
                    "{} upper at {x}: {up_num} vs {up}",
                    d.name()
                );
                let lo = d.tail_integral_lower(x).unwrap();
                let lo_num = numeric::tail_integral_lower(d.as_ref(), x).unwrap();
                assert!(
                    close(lo_num, lo, 1e-9),
                    "{} lower at {x}: {lo_num} vs {lo}",
                    d.name()
                );
            }
        }
    }

    #[test]
    fn bisection_quantile_agrees_with_closed_form() {
        let rw = ReverseWeibullWitness::new(-2.0).unwrap();
        let p = Pareto::new(2.0).unwrap();
        for &q in &[1e-6, 0.1, 0.5, 0.99] {
            let a = numeric::quantile_by_bisection(&rw, q).unwrap();
            assert!(close(a, rw.quantile(q).unwrap(), 1e-12));
            let b = numeric::quantile_by_bisection(&p, q).unwrap();
            assert!(close(b, p.quantile(q).unwrap(), 1e-12));
        }
    }

    #[test]
    fn pareto_order_statistics_against_series() {
        // E[max(X1, X2)] = 1 + ∫_1^∞ (2x^-2 - x^-4) dx = 8/3
        let p = Pareto::new(2.0).unwrap();
        assert!(close(
            p.exact_order_statistic(2, 2).unwrap(),
            8.0 / 3.0,
            1e-13
        ));
        // single draw gives the mean alpha/(alpha-1) = 2
        assert!(close(p.exact_order_statistic(1, 1).unwrap(), 2.0, 1e-13));
    }
}
