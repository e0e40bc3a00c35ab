// Expected order statistics: closed forms, the quantile-space quadrature
// fallback, multi-unit benchmarks and the one-quantile prophet approximation.

use prophetlab::benchmark::{
    expected_order_statistic, order_statistic_by_quadrature, prophet_multi_unit, prophet_value,
    OrderStatSpec,
};
use prophetlab::distributions::{ContinuousDistribution, Exponential, Pareto, Uniform};
use prophetlab::evt::{prophet_value_approx, EvtIndex};
use prophetlab::Objective;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let e = Exponential::new(1.0)?;
    println!("Exponential(1), n = 20");
    for i in [1, 2, 5, 10, 20] {
        let exact = expected_order_statistic(&e, i, 20)?;
        let quad = order_statistic_by_quadrature(&e, OrderStatSpec::new(i, 20)?)?;
        println!("  E[X_({i}:20)] = {exact:.12}  quadrature {quad:.12}");
    }

    let (k, n) = (5, 50);
    println!(
        "Uniform: sum of {k} smallest of {n} = {:.10} (k(k+1)/(2(n+1)) = {:.10})",
        prophet_multi_unit(&Uniform, k, n)?,
        (k * (k + 1)) as f64 / (2.0 * (n + 1) as f64)
    );

    let n = 10_000;
    let p = Pareto::new(2.0)?;
    let cases: [(&dyn ContinuousDistribution, Objective, f64); 4] = [
        (&Uniform, Objective::Min, -1.0),
        (&e, Objective::Min, -1.0),
        (&Uniform, Objective::Max, -1.0),
        (&p, Objective::Max, 0.5),
    ];
    for (dist, obj, g) in cases {
        let exact = prophet_value(dist, n, obj)?;
        let approx = prophet_value_approx(dist, EvtIndex::new(g)?, n, obj)?;
        println!(
            "{} {obj} n = {n}: exact {exact:.8e}, approx {approx:.8e}, rel err {:.2e}",
            dist.name(),
            ((approx - exact) / exact).abs()
        );
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
