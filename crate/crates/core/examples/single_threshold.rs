// A single fixed threshold for minima: the EVT choice, the numerically best
// threshold and the optimal schedule, on reverse-Weibull witnesses.

use prophetlab::benchmark::prophet_value;
use prophetlab::distributions::ReverseWeibullWitness;
use prophetlab::policies::{
    best_single_threshold, evt_single_threshold_min, optimal_values,
    single_threshold_expected_value,
};
use prophetlab::Objective;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for g in [-1.0, -2.0] {
        let w = ReverseWeibullWitness::new(g)?;
        println!("rw_witness gamma = {g}: ratios to E[min]");
        println!("{:>9} {:>10} {:>10} {:>10}", "n", "evt", "best", "optimal");
        let mut first = None;
        for n in [1_000, 10_000, 100_000, 1_000_000] {
            let prophet = prophet_value(&w, n, Objective::Min)?;
            let t = evt_single_threshold_min(&w, g, n)?;
            let evt = single_threshold_expected_value(&w, n, t)? / prophet;
            let best = best_single_threshold(&w, n)?.value / prophet;
            let dp = optimal_values(&w, n, Objective::Min)?.last() / prophet;
            println!("{n:>9} {evt:>10.4} {best:>10.4} {dp:>10.4}");
            first.get_or_insert(evt);
            if n == 1_000_000 {
                println!(
                    "growth from 1e3 to 1e6: {:.3} (log-ratio^-gamma = {:.3})",
                    evt / first.unwrap(),
                    2f64.powf(-g)
                );
            }
        }
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
