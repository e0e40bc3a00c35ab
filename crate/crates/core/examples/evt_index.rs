// Extreme value indices from quantile spacings and the multiplicative
// quantile relation behind them.

use prophetlab::distributions::{Catalog, ContinuousDistribution};
use prophetlab::evt::{
    estimate_evt_index_max, estimate_evt_index_min, quantile_scaling, EvtIndex, Tail,
    DEFAULT_ESTIMATOR_SPACING,
};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let c = DEFAULT_ESTIMATOR_SPACING;
    for spec in [
        "uniform",
        "exponential:rate=1",
        "pareto:alpha=2",
        "rw_witness:gamma=-2",
    ] {
        let dist: Catalog = spec.parse()?;
        println!("{dist}");
        for n in [1_000, 1_000_000] {
            let hat_max = estimate_evt_index_max(&dist, n, c)?;
            let hat_min = estimate_evt_index_min(&dist, n, c).ok();
            println!("  n = {n:>7}: max index {hat_max:+.4}, min index {hat_min:+.4?}");
        }
        if let Some(g) = dist.gamma_max() {
            println!("  known max index {} ({:?})", g, EvtIndex::new(g)?.class());
        }
        if let Some(g) = dist.gamma_min() {
            let s = quantile_scaling(&dist, g, 1_000_000, 5.0, Tail::Lower)?;
            println!(
                "  known min index {g}; F^<-(5/n) = {:.6e} vs 5^-g F^<-(1/n) = {:.6e}",
                s.exact, s.approx
            );
        }
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
