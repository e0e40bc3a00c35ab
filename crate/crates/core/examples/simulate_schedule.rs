// Monte Carlo run of the optimal schedule checked against the exact
// dynamic-programming value, with identical results across thread counts.

use prophetlab::distributions::Uniform;
use prophetlab::policies::{optimal_values, threshold_schedule};
use prophetlab::simulate::{estimate_ratio_with, SimulationOptions};
use prophetlab::Objective;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let n = 20;
    for obj in [Objective::Min, Objective::Max] {
        let table = optimal_values(&Uniform, n, obj)?;
        let policy = threshold_schedule(&table);
        let one = estimate_ratio_with(
            &Uniform,
            &policy,
            obj,
            SimulationOptions::new(50_000, 11).workers(1),
        )?;
        let four = estimate_ratio_with(
            &Uniform,
            &policy,
            obj,
            SimulationOptions::new(50_000, 11).workers(4),
        )?;
        assert_eq!(one, four);
        println!(
            "Uniform {obj}, n = {n}: simulated {:.6} ± {:.6}, DP {:.6}, z = {:+.2}",
            one.mean_alg,
            one.stderr,
            table.last(),
            (one.mean_alg - table.last()) / one.stderr
        );
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
