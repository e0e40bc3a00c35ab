// Selecting at least `k = ⌈log n⌉` items with one threshold, simulated.

use prophetlab::distributions::Exponential;
use prophetlab::policies::{minimum_quota, multi_unit_threshold, ThresholdPolicy};
use prophetlab::simulate::estimate_ratio;
use prophetlab::Objective;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let e = Exponential::new(1.0)?;
    let bound = 1.0 + 2f64.exp();
    println!("Exponential(1), c = e^2, bound 1 + e^2 = {bound:.4}");
    for n in [1_000, 10_000, 100_000] {
        let k = minimum_quota(n);
        let t = multi_unit_threshold(&e, -1.0, n, k)?;
        let policy = ThresholdPolicy::multi_unit(t, n, k)?;
        let est = estimate_ratio(&e, &policy, Objective::Min, 20_000, 7)?;
        println!(
            "  n = {n:>6}, k = {k:>2}, T = {t:.4e}: ratio {:.4} [{:.4}, {:.4}]",
            est.ratio, est.ci95_lo, est.ci95_hi
        );
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
