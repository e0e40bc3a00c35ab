// Tabulates the asymptotic competitive ratio `Λ(γ)` and its clamped max/min
// forms, and locates the minimum of `Λ` on `[0, 1)`.

use prophetlab::evt::{asymptotic_ratio, lambda_acr};
use prophetlab::Objective;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    println!(
        "{:>6} {:>12} {:>10} {:>10}",
        "gamma", "Lambda", "max ACR", "min ACR"
    );
    for i in 0..40 {
        let g = (i as f64 - 30.0) / 10.0;
        // minima of a distribution bounded below have gamma <= 0
        let min_acr = match asymptotic_ratio(g, Objective::Min) {
            Ok(v) => format!("{v:>10.6}"),
            Err(_) => format!("{:>10}", "-"),
        };
        println!(
            "{g:>6.1} {:>12.6} {:>10.6} {min_acr}",
            lambda_acr(g)?,
            asymptotic_ratio(g, Objective::Max)?
        );
    }

    let (mut arg, mut floor) = (0.0, f64::INFINITY);
    for j in 0..1000 {
        let g = 0.999 * j as f64 / 999.0;
        let l = lambda_acr(g)?;
        if l < floor {
            (arg, floor) = (g, l);
        }
    }
    println!("min of Lambda on [0, 0.999]: {floor:.6} at gamma = {arg:.3}");
    assert!(floor > 0.775);
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
