// Ratio of the optimal policy value to the prophet value as the horizon
// grows, against the limit predicted by the extreme value index.

use prophetlab::benchmark::prophet_value;
use prophetlab::distributions::{Catalog, ContinuousDistribution};
use prophetlab::evt::asymptotic_ratio;
use prophetlab::policies::optimal_values;
use prophetlab::Objective;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cases = [
        ("uniform", Objective::Min),
        ("exponential:rate=1", Objective::Min),
        ("rw_witness:gamma=-2", Objective::Min),
        ("uniform", Objective::Max),
        ("exponential:rate=1", Objective::Max),
        ("pareto:alpha=2", Objective::Max),
    ];
    let grid = [10, 100, 1_000, 10_000, 100_000];
    for (spec, obj) in cases {
        let dist: Catalog = spec.parse()?;
        let gamma = match obj {
            Objective::Max => dist.gamma_max(),
            Objective::Min => dist.gamma_min(),
        }
        .expect("catalog families have an index for these objectives");
        let limit = asymptotic_ratio(gamma, obj)?;
        let table = optimal_values(&dist, *grid.last().unwrap(), obj)?;
        println!("{dist} ({obj}), gamma = {gamma}, limit = {limit:.6}");
        for n in grid {
            let g = table.value(n).unwrap();
            let ratio = g / prophet_value(&dist, n, obj)?;
            println!("  n = {n:>6}: ratio = {ratio:.6}");
        }
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
